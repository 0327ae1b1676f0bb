#include "rgs/asymptotics.hpp"

#include "rgs/kernels.hpp"
#include "rgs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace rgs {

double epsilon_rho(double rho, double a_star, double p)
{
    if (!(rho > 0.0) || !(a_star > 0.0) || !(p > 1.0 && p < 3.0)) {
        throw std::invalid_argument("epsilon_rho needs rho > 0, a* > 0, 1 < p < 3");
    }
    return std::pow(rho / std::sqrt(a_star), -(p - 1.0) / (3.0 - p));
}

double hat_I_of_rho(double rho, double a_star, double p)
{
    const double eps = epsilon_rho(rho, a_star, p);
    return -0.5 * (3.0 - p) / (eps * eps);
}

Point max_point(const ComplexField& u)
{
    const GridSpec& g = u.grid();
    const auto n = g.n();
    double peak = 0.0;
    for (const cplx& z : u.values()) {
        peak = std::max(peak, std::abs(z));
    }
    const double tie = 1e-12 * peak;
    std::size_t bi = 0;
    std::size_t bj = 0;
    bool have = false;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(u(i, j)) < peak - tie) {
                continue;
            }
            if (!have) {
                bi = i;
                bj = j;
                have = true;
                continue;
            }
            const Point x = g.node(i, j);
            const Point b = g.node(bi, bj);
            const double rx = x.norm();
            const double rb = b.norm();
            const double rtol = 1e-12 * std::max(g.spacing(), rb);
            bool better = false;
            if (rx < rb - rtol) {
                better = true;
            } else if (std::abs(rx - rb) <= rtol) {
                better = x.x1 < b.x1 || (x.x1 == b.x1 && x.x2 < b.x2);
            }
            if (better) {
                bi = i;
                bj = j;
            }
        }
    }
    Point z = g.node(bi, bj);
    auto refine = [&](double fm, double f0, double fp) {
        const double curv = fm - 2.0 * f0 + fp;
        if (!(curv < 0.0)) {
            return 0.0;
        }
        return std::clamp(0.5 * (fm - fp) / curv, -0.5, 0.5) * g.spacing();
    };
    const double f0 = std::abs(u(bi, bj));
    if (bi > 0 && bi + 1 < n) {
        z.x1 += refine(std::abs(u(bi - 1, bj)), f0, std::abs(u(bi + 1, bj)));
    }
    if (bj > 0 && bj + 1 < n) {
        z.x2 += refine(std::abs(u(bi, bj - 1)), f0, std::abs(u(bi, bj + 1)));
    }
    return z;
}

cplx interpolate(const ComplexField& u, Point x)
{
    const GridSpec& g = u.grid();
    const double s1 = (x.x1 + g.half_width()) / g.spacing();
    const double s2 = (x.x2 + g.half_width()) / g.spacing();
    const double last = static_cast<double>(g.n() - 1);
    if (!(s1 >= 0.0 && s1 <= last && s2 >= 0.0 && s2 <= last)) {
        return {};
    }
    const auto i = std::min(static_cast<std::size_t>(s1), g.n() - 2);
    const auto j = std::min(static_cast<std::size_t>(s2), g.n() - 2);
    const double a = s1 - static_cast<double>(i);
    const double b = s2 - static_cast<double>(j);
    return (1.0 - a) * (1.0 - b) * u(i, j) + a * (1.0 - b) * u(i + 1, j) + (1.0 - a) * b * u(i, j + 1)
         + a * b * u(i + 1, j + 1);
}

namespace {

// Full width at half maximum of |u| along x1 through the grid maximizer, in nodes.
double peak_width_nodes(const ComplexField& u)
{
    const GridSpec& g = u.grid();
    std::size_t bi = 0;
    std::size_t bj = 0;
    double peak = -1.0;
    for (std::size_t j = 0; j < g.n(); ++j) {
        for (std::size_t i = 0; i < g.n(); ++i) {
            if (std::abs(u(i, j)) > peak) {
                peak = std::abs(u(i, j));
                bi = i;
                bj = j;
            }
        }
    }
    std::size_t lo = bi;
    while (lo > 0 && std::abs(u(lo, bj)) >= 0.5 * peak) {
        --lo;
    }
    std::size_t hi = bi;
    while (hi + 1 < g.n() && std::abs(u(hi, bj)) >= 0.5 * peak) {
        ++hi;
    }
    return static_cast<double>(hi - lo);
}

ComplexField reference_profile(const RadialProfile& profile, const GridSpec& grid)
{
    const double amp = 1.0 / std::sqrt(profile.a_star);
    return ComplexField::sample(grid, [&](Point x) { return amp * profile(x.norm()); });
}

} // namespace

RescaledMinimizer rescale_minimizer(const ComplexField& u, double eps, Point z, double omega,
                                    const RadialProfile& profile, const GridSpec& target)
{
    if (!(eps > 0.0)) {
        throw std::invalid_argument("rescale needs eps > 0");
    }
    if (peak_width_nodes(u) < 12.0) {
        throw std::runtime_error("rescale under-resolved");
    }
    ComplexField raw = ComplexField::sample(target, [&](Point x) {
        const double phase = 0.5 * eps * omega * dot(x, z.perp());
        return eps * interpolate(u, eps * x + z) * std::polar(1.0, -phase);
    });
    const ComplexField ref = reference_profile(profile, target);
    PhaseAlignment al = phase_align(raw, ref);
    RescaledMinimizer out{std::move(al.aligned), al.theta, al.gauge_undetermined, 0.0};
    double cross = 0.0;
    for (std::size_t k = 0; k < ref.values().size(); ++k) {
        cross += ref[k].real() * out.w_rho[k].imag();
    }
    cross *= target.cell_area();
    out.orthogonality = std::abs(cross) / (l2_norm(ref) * l2_norm(out.w_rho));
    return out;
}

DiscreteLimit discrete_limit(const SolveConfig& config, const RadialProfile& profile, double p)
{
    SolveConfig c = config;
    c.init = InitKind::rescaled_w;
    c.init_eps = 1.0;
    c.relax_every = 0;
    const Physics limit{std::sqrt(profile.a_star), p, 0.0};
    const GroundState gs = solve_ground_state(c, PotentialSpec::harmonic(0.0), limit, &profile);
    return {gs.energy.total, gs.mu, gs.u, gs.converged};
}

BlowupReport blowup_report(const GroundState& gs, const RadialProfile& profile, const Physics& phys,
                           const DiscreteLimit& limit)
{
    BlowupReport r;
    r.rho = phys.rho;
    r.eps = epsilon_rho(phys.rho, profile.a_star, phys.p);
    r.I_hat_formula = hat_I_of_rho(phys.rho, profile.a_star, phys.p);
    r.I_hat = limit.hat_energy / (r.eps * r.eps);
    r.I = gs.physical_energy().total;
    r.gap = r.I - r.I_hat;
    r.mu_eps2 = gs.physical_mu() * r.eps * r.eps;
    r.residual = gs.residual;
    r.converged = gs.converged;

    // Work in solve coordinates: there ε, z and Ω become ε/ℓ, z/ℓ and ℓ²Ω.
    const double ell = gs.length_scale;
    const double eps_s = r.eps / ell;
    const Point z_s = max_point(gs.u);
    r.z = ell * z_s;
    r.z_over_eps = (1.0 / r.eps) * r.z;
    const GridSpec& ug = gs.u.grid();
    const GridSpec target = eps_s == 1.0 ? ug : GridSpec(ug.half_width() / eps_s, ug.n());
    const RescaledMinimizer rm = rescale_minimizer(gs.u, eps_s, z_s, gs.solved.omega, profile, target);
    r.gauge_undetermined = rm.gauge_undetermined;
    r.orthogonality = rm.orthogonality;

    const ComplexField ref = reference_profile(profile, target);
    double sup = 0.0;
    for (std::size_t k = 0; k < ref.values().size(); ++k) {
        sup = std::max(sup, std::abs(rm.w_rho[k] - ref[k]));
    }
    r.profile_sup_dist = sup;
    const ComplexField im = to_complex(imag_part(rm.w_rho));
    r.imag_h1 = norms(im).h1;
    r.imag_sup = sup_norm(im);
    return r;
}

std::vector<BlowupReport> asymptotic_sweep(const SolveConfig& config, const PotentialSpec& V, double omega, double p,
                                           const std::vector<double>& rhos, const RadialProfile& profile,
                                           unsigned workers)
{
    std::vector<double> sorted = rhos;
    std::ranges::sort(sorted);
    const DiscreteLimit limit = discrete_limit(config, profile, p);
    std::vector<std::optional<BlowupReport>> out(sorted.size());
    run_pool(sorted.size(), workers, [&](std::size_t k) {
        const Physics phys{sorted[k], p, omega};
        const double eps = epsilon_rho(phys.rho, profile.a_star, p);
        const GroundState gs = solve_scaled(config, V, phys, eps, &profile);
        out[k] = blowup_report(gs, profile, phys, limit);
    });
    std::vector<BlowupReport> reports;
    for (auto& r : out) {
        reports.push_back(*r);
    }
    return reports;
}

void write_report_csv_header(std::ostream& os)
{
    os << "rho,eps,I_hat,I,gap,mu_eps2,z1,z2,z_over_eps1,z_over_eps2,profile_sup_dist,imag_h1,imag_sup\n";
}

void write_report_csv_row(std::ostream& os, const BlowupReport& r)
{
    os << std::setprecision(17) << r.rho << ',' << r.eps << ',' << r.I_hat << ',' << r.I << ',' << r.gap << ','
       << r.mu_eps2 << ',' << r.z.x1 << ',' << r.z.x2 << ',' << r.z_over_eps.x1 << ',' << r.z_over_eps.x2 << ','
       << r.profile_sup_dist << ',' << r.imag_h1 << ',' << r.imag_sup << '\n';
}

ConcentrationTrack concentration_track(const std::vector<BlowupReport>& reports, const HomogeneousFn& h,
                                       const RadialProfile& profile)
{
    if (reports.size() < 3) {
        throw std::invalid_argument("concentration_track needs at least 3 reports");
    }
    const auto last = std::ranges::max_element(reports, {}, &BlowupReport::rho);
    ConcentrationTrack t;
    t.y0_est = last->z_over_eps;
    t.y0_ref = minimize_H(h, profile).y0;
    t.err = (t.y0_est - t.y0_ref).norm();
    return t;
}

UniquenessResult uniqueness_probe(const SolveConfig& config, const PotentialSpec& V, const Physics& phys,
                                  std::size_t n_starts, std::uint64_t seed, const RadialProfile& profile,
                                  unsigned workers)
{
    if (n_starts < 2) {
        throw std::invalid_argument("uniqueness probe needs n_starts >= 2");
    }
    const double eps = epsilon_rho(phys.rho, profile.a_star, phys.p);
    std::vector<std::optional<GroundState>> runs(n_starts);
    run_pool(n_starts, workers, [&](std::size_t k) {
        SolveConfig c = config;
        constexpr InitKind order[] = {InitKind::gaussian, InitKind::rescaled_w, InitKind::vortex};
        if (k < 3) {
            c.init = order[k];
        } else {
            c.init = InitKind::random;
            c.seed = seed + (k - 3);
        }
        c.init_eps = 1.0;
        runs[k] = solve_scaled(c, V, phys, eps, &profile);
    });

    UniquenessResult res;
    // Residuals above this leave run-to-run differences larger than the tested bound.
    res.conclusive = config.tol_residual <= 1e-6;
    double best = INFINITY;
    for (const auto& r : runs) {
        res.energies.push_back(r->energy.total);
        res.converged.push_back(r->converged);
        res.conclusive = res.conclusive && r->converged;
        if (r->converged) {
            best = std::min(best, r->energy.total);
        }
    }
    std::vector<const GroundState*> kept;
    for (const auto& r : runs) {
        if (r->converged && std::abs(r->energy.total - best) <= 1e-6 * std::abs(best)) {
            kept.push_back(&*r);
        }
    }
    res.qualifying = kept.size();
    if (kept.size() < 2) {
        throw std::runtime_error("insufficient converged runs");
    }
    const GroundState* lowest = *std::ranges::min_element(kept, {}, [](const GroundState* g) { return g->energy.total; });
    const double scale = sup_norm(lowest->u);
    for (std::size_t a = 0; a < kept.size(); ++a) {
        for (std::size_t b = a + 1; b < kept.size(); ++b) {
            const PhaseAlignment al = phase_align(kept[a]->u, kept[b]->u);
            double d = 0.0;
            for (std::size_t k = 0; k < al.aligned.values().size(); ++k) {
                d = std::max(d, std::abs(al.aligned[k] - kept[b]->u[k]));
            }
            res.max_pair_dist = std::max(res.max_pair_dist, d / scale);
        }
    }
    return res;
}

} // namespace rgs
