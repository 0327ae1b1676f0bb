#include "rgs/minimize.hpp"

#include "rgs/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rgs {

namespace {

constexpr std::size_t cg_max_iter = 500;
constexpr double cg_rel_tol = 1e-8;

// (1 - dt Δ_h) x = b by conjugate gradients with the real inner product.
std::size_t solve_shifted(const kernels::Layout& g, double dt, std::span<const cplx> b, std::span<cplx> x)
{
    const std::size_t m = b.size();
    std::vector<cplx> r(b.begin(), b.end());
    std::vector<cplx> p(r);
    std::vector<cplx> ap(m);
    std::ranges::fill(x, cplx{});
    const double bnorm2 = kernels::inner_re(g, b, b);
    if (bnorm2 == 0.0) {
        return 0;
    }
    double rr = bnorm2;
    for (std::size_t k = 1; k <= cg_max_iter; ++k) {
        kernels::shifted_laplacian(g, dt, p, ap);
        const double alpha = rr / kernels::inner_re(g, p, ap);
        kernels::axpy(alpha, p, x);
        kernels::axpy(-alpha, ap, r);
        const double rr_new = kernels::inner_re(g, r, r);
        if (rr_new <= cg_rel_tol * cg_rel_tol * bnorm2) {
            return k;
        }
        kernels::xpby(r, rr_new / rr, p);
        rr = rr_new;
    }
    throw std::runtime_error("inner solver stalled");
}

double energy_slack(const EnergyBreakdown& e)
{
    return 1e-13 * (std::abs(e.kinetic) + std::abs(e.potential) + std::abs(e.interaction) + std::abs(e.momentum));
}

double edge_mass(const ComplexField& u)
{
    const GridSpec& grid = u.grid();
    const double edge = 0.8 * grid.half_width();
    double m = 0.0;
    for (std::size_t j = 0; j < grid.n(); ++j) {
        for (std::size_t i = 0; i < grid.n(); ++i) {
            const Point x = grid.node(i, j);
            if (std::abs(x.x1) > edge || std::abs(x.x2) > edge) {
                m += std::norm(u(i, j));
            }
        }
    }
    return m * grid.cell_area();
}

struct FlowState
{
    ComplexField u;
    EnergyBreakdown energy;
    ComplexField hu;
    double mu{0.0};
    double residual{0.0};
};

FlowState evaluate(ComplexField u, const RealField& V, const Physics& phys)
{
    FlowState s{std::move(u), {}, ComplexField(V.grid()), 0.0, 0.0};
    s.energy = gp_energy(s.u, V, phys);
    s.hu = apply_hamiltonian(s.u, V, phys);
    s.mu = lagrange_multiplier(s.u, s.energy.total, phys.rho, phys.p);
    ComplexField r = s.hu;
    kernels::axpy(-s.mu, s.u.values(), r.values());
    const double lap = l2_norm(laplacian(s.u));
    s.residual = lap > 0.0 ? l2_norm(r) / lap : l2_norm(r);
    return s;
}

// Newton step for the centre on the two translation modes. A magnetic translation
// T_a leaves the kinetic and interaction terms unchanged, so
// E(T_a u) - E(u) = ∫(V_Ω(x+a) - V_Ω(x))|u|²; the gradient and Hessian in a are
// moments of |u|² against differences of the sampled V_Ω. Returns the length of
// the accepted shift, 0 when none was taken.
double relax_translation(FlowState& s, const RealField& V, const Physics& phys)
{
    const GridSpec& grid = s.u.grid();
    const std::size_t n = grid.n();
    const double dx = grid.spacing();
    const double quarter = 0.25 * phys.omega * phys.omega;
    auto vo = [&](std::size_t i, std::size_t j) {
        const Point x = grid.node(i, j);
        return V(i, j) - quarter * dot(x, x);
    };
    double g[2] = {0.0, 0.0};
    double h[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t j = 2; j + 2 < n; ++j) {
        for (std::size_t i = 2; i + 2 < n; ++i) {
            const double m = std::norm(s.u(i, j));
            if (m == 0.0) {
                continue;
            }
            const double c = vo(i, j);
            g[0] += m * (vo(i + 1, j) - vo(i - 1, j)) / (2.0 * dx);
            g[1] += m * (vo(i, j + 1) - vo(i, j - 1)) / (2.0 * dx);
            h[0][0] += m * (vo(i + 1, j) - 2.0 * c + vo(i - 1, j)) / (dx * dx);
            h[1][1] += m * (vo(i, j + 1) - 2.0 * c + vo(i, j - 1)) / (dx * dx);
            h[0][1] += m * (vo(i + 1, j + 1) - vo(i + 1, j - 1) - vo(i - 1, j + 1) + vo(i - 1, j - 1)) / (4.0 * dx * dx);
        }
    }
    const double det = h[0][0] * h[1][1] - h[0][1] * h[0][1];
    if (!(h[0][0] > 0.0) || !(det > 0.0)) {
        return 0.0;
    }
    Point a{-(h[1][1] * g[0] - h[0][1] * g[1]) / det, -(h[0][0] * g[1] - h[0][1] * g[0]) / det};
    const double len = a.norm();
    if (!(len > 1e-13 * dx)) {
        return 0.0;
    }
    const double max_step = 0.25 * grid.half_width();
    if (len > max_step) {
        a = (max_step / len) * a;
    }
    for (int attempt = 0; attempt < 8; ++attempt) {
        ComplexField v = normalize(magnetic_translate(s.u, a, phys.omega));
        const EnergyBreakdown e = gp_energy(v, V, phys);
        if (e.total <= s.energy.total) {
            s = evaluate(std::move(v), V, phys);
            return a.norm();
        }
        a = 0.5 * a;
    }
    return 0.0;
}

} // namespace

ComplexField magnetic_translate(const ComplexField& u, Point a, double omega)
{
    const GridSpec& grid = u.grid();
    const auto n = static_cast<std::ptrdiff_t>(grid.n());
    // Cubic Lagrange weights on the nodes -1, 0, 1, 2 at fractional offset f.
    auto shift_axis = [&](const ComplexField& in, double shift, bool along_x1) {
        const double q = -shift / grid.spacing();
        const double base = std::floor(q);
        const double f = q - base;
        const auto b = static_cast<std::ptrdiff_t>(base);
        const double w[4] = {-f * (f - 1.0) * (f - 2.0) / 6.0, (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
                             -(f + 1.0) * f * (f - 2.0) / 2.0, (f + 1.0) * f * (f - 1.0) / 6.0};
        ComplexField out(grid);
        for (std::ptrdiff_t j = 0; j < n; ++j) {
            for (std::ptrdiff_t i = 0; i < n; ++i) {
                cplx acc{};
                for (std::ptrdiff_t k = -1; k <= 2; ++k) {
                    const std::ptrdiff_t si = along_x1 ? i + b + k : i;
                    const std::ptrdiff_t sj = along_x1 ? j : j + b + k;
                    if (si >= 0 && si < n && sj >= 0 && sj < n) {
                        acc += w[k + 1] * in(static_cast<std::size_t>(si), static_cast<std::size_t>(sj));
                    }
                }
                out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = acc;
            }
        }
        return out;
    };
    ComplexField v = shift_axis(shift_axis(u, a.x1, true), a.x2, false);
    const double half = 0.5 * omega;
    for (std::size_t j = 0; j < grid.n(); ++j) {
        for (std::size_t i = 0; i < grid.n(); ++i) {
            const Point x = grid.node(i, j);
            v(i, j) *= std::polar(1.0, half * (a.x1 * x.x2 - a.x2 * x.x1));
        }
    }
    v.zero_boundary();
    return v;
}

std::string to_string(InitKind kind)
{
    switch (kind) {
    case InitKind::gaussian:
        return "gaussian";
    case InitKind::rescaled_w:
        return "rescaled_w";
    case InitKind::vortex:
        return "vortex";
    case InitKind::random:
        return "random";
    }
    return "unknown";
}

InitKind parse_init_kind(const std::string& name)
{
    for (InitKind k : {InitKind::gaussian, InitKind::rescaled_w, InitKind::vortex, InitKind::random}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown initial guess '" + name + "'");
}

void SolveConfig::validate() const
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("solver dt must be positive");
    }
    if (!(tol_energy > 0.0) || !(tol_residual > 0.0)) {
        throw std::invalid_argument("solver tolerances must be positive");
    }
    if (!(backtrack > 0.0 && backtrack < 1.0) || !(grow >= 1.0)) {
        throw std::invalid_argument("backtracking factors must satisfy 0 < backtrack < 1 <= grow");
    }
    if (!(init_eps > 0.0)) {
        throw std::invalid_argument("init_eps must be positive");
    }
}

EnergyBreakdown GroundState::physical_energy() const
{
    const double s = 1.0 / (length_scale * length_scale);
    return {energy.kinetic * s, energy.potential * s, energy.interaction * s, energy.momentum * s, energy.total * s};
}

double GroundState::physical_mu() const
{
    return mu / (length_scale * length_scale);
}

ComplexField initial_guess(InitKind kind, const GridSpec& grid, const RadialProfile* profile, double eps,
                           std::uint64_t seed)
{
    auto gaussian = [](Point x) { return std::exp(-0.5 * dot(x, x)); };
    switch (kind) {
    case InitKind::gaussian:
        return normalize(ComplexField::sample(grid, gaussian));
    case InitKind::rescaled_w: {
        if (profile == nullptr) {
            throw std::invalid_argument("rescaled_w start needs a radial profile");
        }
        if (!(eps > 0.0)) {
            throw std::invalid_argument("rescaled_w start needs eps > 0");
        }
        const double amp = 1.0 / (eps * std::sqrt(profile->a_star));
        return normalize(ComplexField::sample(grid, [&](Point x) { return amp * (*profile)(x.norm() / eps); }));
    }
    case InitKind::vortex:
        return normalize(ComplexField::sample(grid, [&](Point x) {
            return gaussian(x) * std::polar(1.0, std::atan2(x.x2, x.x1));
        }));
    case InitKind::random: {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> noise(-1.0, 1.0);
        ComplexField f(grid);
        for (std::size_t j = 0; j < grid.n(); ++j) {
            for (std::size_t i = 0; i < grid.n(); ++i) {
                const double a = noise(rng);
                const double b = noise(rng);
                if (!grid.on_boundary(i, j)) {
                    f(i, j) = gaussian(grid.node(i, j)) * (1.0 + 0.1 * cplx{a, b});
                }
            }
        }
        return normalize(f);
    }
    }
    throw std::invalid_argument("unknown initial guess");
}

double stable_dt(const ComplexField& u, const RealField& V, const Physics& phys, double mu_hat)
{
    double vmax = 0.0;
    for (double v : V.values()) {
        vmax = std::max(vmax, std::abs(v));
    }
    const double umax = sup_norm(u);
    const GridSpec& g = u.grid();
    const double rotation = phys.omega * std::sqrt(2.0) * g.half_width() / g.spacing();
    const double stiff = vmax + phys.p * phys.coupling() * std::pow(umax, phys.p - 1.0) + std::abs(mu_hat) + rotation;
    return 1.5 / std::max(stiff, 1e-12);
}

ComplexField flow_step(const ComplexField& u, const RealField& V, const Physics& phys, double dt, FlowStepInfo* info)
{
    const ComplexField hu = apply_hamiltonian(u, V, phys);
    const double mu_hat = inner_re(u, hu) / inner_re(u, u);
    // With u* = u + δ the step reads (1 - dt Δ_h) δ = dt (μ̂ u - H u).
    ComplexField b(u.grid());
    for (std::size_t k = 0; k < b.values().size(); ++k) {
        b[k] = dt * (mu_hat * u[k] - hu[k]);
    }
    b.zero_boundary();
    ComplexField delta(u.grid());
    const std::size_t iters = solve_shifted(kernels::Layout::of(u.grid()), dt, b.values(), delta.values());
    if (info != nullptr) {
        info->cg_iterations = iters;
        info->mu_hat = mu_hat;
    }
    kernels::axpy(1.0, u.values(), delta.values());
    return normalize(delta);
}

GroundState solve_ground_state(const SolveConfig& config, const PotentialSpec& Vspec, const Physics& phys,
                               const RadialProfile* profile, const ComplexField* start)
{
    config.validate();
    if (!(phys.p > 1.0 && phys.p <= 3.0) || !(phys.rho > 0.0) || !(phys.omega >= 0.0)) {
        throw std::invalid_argument("solver needs 1 < p <= 3, rho > 0, Omega >= 0");
    }
    if (!config.allow_supercritical && phys.omega > 0.0) {
        const OmegaStar critical = omega_star(Vspec);
        const double limit = critical.estimated ? critical.value * (1.0 + 1e-6) : critical.value;
        if (phys.omega >= limit) {
            throw std::runtime_error("energy unbounded (Ω ≥ Ω*?)");
        }
    }
    const GridSpec& grid = config.grid;
    const RealField V = sample_potential(Vspec, grid);

    ComplexField u0 = start != nullptr ? normalize(*start)
                                       : initial_guess(config.init, grid, profile, config.init_eps, config.seed);
    if (u0.grid() != grid) {
        throw std::invalid_argument("start field grid does not match the solver grid");
    }
    if (config.init_phase != 0.0) {
        const cplx ph = std::polar(1.0, config.init_phase);
        for (auto& z : u0.values()) {
            z *= ph;
        }
    }

    FlowState s = evaluate(std::move(u0), V, phys);
    GroundState out{s.u, s.energy, s.mu, s.residual, 0, false, {}, {}, 1.0, phys};
    out.history.push_back({s.energy.total, s.residual, config.dt, false});

    double dt = config.dt;
    std::size_t streak = 0;
    std::size_t accepted = 0;
    auto stagnated = [&] {
        const auto& h = out.history;
        if (h.size() <= config.stagnation_window) {
            return false;
        }
        const double now = h.back().energy;
        const double then = h[h.size() - 1 - config.stagnation_window].energy;
        return std::abs(now - then) <= config.tol_energy * std::max(std::abs(now), 1e-300);
    };

    while (out.iterations < config.max_iter) {
        if (s.residual < config.tol_residual && stagnated()) {
            // A centre still drifting along the weak translation modes is not converged.
            if (config.relax_every > 0 && relax_translation(s, V, phys) > 1e-8 * config.grid.spacing()) {
                ++out.iterations;
                out.history.push_back({s.energy.total, s.residual, 0.0, true});
                continue;
            }
            out.converged = true;
            break;
        }
        ++out.iterations;
        const double step = std::min(dt, stable_dt(s.u, V, phys, s.mu));
        ComplexField trial = flow_step(s.u, V, phys, step);
        FlowState next = evaluate(std::move(trial), V, phys);
        if (next.energy.total < -1e12 || (next.energy.total < s.energy.total && edge_mass(next.u) > 0.5)) {
            throw std::runtime_error("energy unbounded (Ω ≥ Ω*?)");
        }
        if (next.energy.total > s.energy.total + energy_slack(s.energy)) {
            dt *= config.backtrack;
            streak = 0;
            if (dt < 1e-14 * config.dt) {
                out.message = "step size underflow";
                break;
            }
            continue;
        }
        s = std::move(next);
        out.history.push_back({s.energy.total, s.residual, step, false});
        ++accepted;
        if (++streak >= config.grow_after) {
            dt = std::min(dt * config.grow, config.dt);
            streak = 0;
        }
        if (config.relax_every > 0 && accepted % config.relax_every == 0 && s.residual < 1e-4) {
            if (relax_translation(s, V, phys) > 0.0) {
                out.history.push_back({s.energy.total, s.residual, 0.0, true});
            }
        }
    }
    if (!out.converged && out.message.empty()) {
        std::ostringstream msg;
        msg << "max_iter reached: residual " << s.residual << ", target " << config.tol_residual;
        out.message = msg.str();
    }
    out.u = std::move(s.u);
    out.energy = s.energy;
    out.mu = s.mu;
    out.residual = s.residual;
    return out;
}

ScaledProblem rescale_problem(const PotentialSpec& V, const Physics& phys, double ell)
{
    if (!(ell > 0.0)) {
        throw std::invalid_argument("length scale must be positive");
    }
    ScaledProblem sp{V.rescaled(ell), phys, ell};
    sp.phys.omega = phys.omega * ell * ell;
    // ρ̃^{p-1} = ρ^{p-1} ell^{3-p}
    sp.phys.rho = phys.rho * std::pow(ell, (3.0 - phys.p) / (phys.p - 1.0));
    return sp;
}

GroundState solve_scaled(const SolveConfig& config, const PotentialSpec& V, const Physics& phys, double ell,
                         const RadialProfile* profile)
{
    const ScaledProblem sp = rescale_problem(V, phys, ell);
    GroundState gs = solve_ground_state(config, sp.V, sp.phys, profile);
    gs.length_scale = ell;
    gs.solved = sp.phys;
    return gs;
}

PhaseAlignment phase_align(const ComplexField& u, const ComplexField& ref)
{
    const double ref_norm = l2_norm(ref);
    if (!(ref_norm > 0.0)) {
        throw std::invalid_argument("phase_align needs a nonzero reference");
    }
    const cplx overlap = inner(u, ref); // ∫ conj(u) ref
    PhaseAlignment out{0.0, u, 0.0, false};
    if (std::abs(overlap) <= 1e-14 * l2_norm(u) * ref_norm) {
        out.gauge_undetermined = true;
    } else {
        out.theta = std::arg(overlap);
        const cplx ph = std::polar(1.0, out.theta);
        for (auto& z : out.aligned.values()) {
            z *= ph;
        }
    }
    ComplexField diff = out.aligned;
    kernels::axpy(-1.0, ref.values(), diff.values());
    out.distance = l2_norm(diff);
    return out;
}

ProbeTable nonexistence_probe(const PotentialSpec& V, const Physics& phys, const RadialProfile& profile,
                              const std::vector<double>& taus, const GridSpec& grid)
{
    const EffectivePotential vo{V, phys.omega};
    const double L = grid.half_width();
    constexpr double support = 2.0; // cutoff φ vanishes beyond |x - x_τ| = 2

    // Direction along which V_Ω falls fastest.
    Point dir{1.0, 0.0};
    double lowest = INFINITY;
    for (int k = 0; k < 360; ++k) {
        const double th = 2.0 * std::numbers::pi * k / 360.0;
        const Point d{std::cos(th), std::sin(th)};
        const double v = vo(0.5 * L * d);
        if (k == 0 || v < lowest - 1e-12 * std::abs(lowest)) {
            lowest = v;
            dir = d;
        }
    }

    ProbeTable table;
    table.conclusive = lowest < 0.0;
    const double wnorm = std::sqrt(profile.a_star);
    for (double tau : taus) {
        if (!(tau > 0.0)) {
            throw std::invalid_argument("probe needs tau > 0");
        }
        Point x_tau{};
        if (table.conclusive) {
            const double target = -(phys.p - 1.0) * tau * tau;
            const double r_end = L - support - grid.spacing();
            bool found = false;
            for (double r = 0.0; r <= r_end; r += 0.25 * grid.spacing()) {
                if (vo(r * dir) <= target) {
                    x_tau = r * dir;
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw std::runtime_error("grid too small for probe");
            }
        }
        const Point xt = x_tau;
        auto cutoff = [](double r) {
            if (r <= 1.0) {
                return 1.0;
            }
            if (r >= 2.0) {
                return 0.0;
            }
            const double c = std::cos(0.5 * std::numbers::pi * (r - 1.0));
            return c * c;
        };
        ComplexField f = ComplexField::sample(grid, [&](Point x) {
            const Point y = x - xt;
            const double r = y.norm();
            const double S = 0.5 * dot(x, xt.perp());
            return (tau / wnorm) * profile(tau * r) * cutoff(r) * std::polar(1.0, phys.omega * S);
        });
        f = normalize(f);
        table.rows.push_back({tau, xt, vo(xt), gp_energy(f, V, phys)});
    }
    return table;
}

} // namespace rgs
