#include "rgs/validate.hpp"

#include "rgs/asymptotics.hpp"
#include "rgs/energy.hpp"
#include "rgs/kernels.hpp"
#include "rgs/minimize.hpp"
#include "rgs/potentials.hpp"
#include "rgs/scalar_ground.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <random>

namespace rgs {

namespace {

class Suite
{
  public:
    void check(std::string module, std::string name, double value, double bound, std::string note = {})
    {
        const bool pass = std::isfinite(value) && value <= bound;
        results_.push_back({std::move(module), std::move(name), value, bound, pass, std::move(note)});
    }

    /// Runs `body`; an exception becomes a failed row.
    template <class Fn>
    void guarded(const std::string& module, const std::string& name, Fn&& body)
    {
        try {
            body();
        } catch (const std::exception& e) {
            results_.push_back({module, name, NAN, 0.0, false, e.what()});
        }
    }

    std::vector<CheckResult> take() { return std::move(results_); }

  private:
    std::vector<CheckResult> results_;
};

// Smooth Dirichlet test field: a few complex Gaussians at random centers.
ComplexField random_bumps(const GridSpec& grid, std::mt19937_64& rng, int count = 3)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    struct Bump
    {
        Point c;
        cplx a;
        double s;
    };
    std::vector<Bump> bumps;
    const double L = grid.half_width();
    for (int k = 0; k < count; ++k) {
        bumps.push_back({{0.3 * L * unit(rng), 0.3 * L * unit(rng)}, {unit(rng), unit(rng)}, 0.5 + 0.4 * (unit(rng) + 1.0)});
    }
    return ComplexField::sample(grid, [&](Point x) {
        cplx v{};
        for (const auto& b : bumps) {
            const Point d = x - b.c;
            v += b.a * std::exp(-dot(d, d) / (b.s * b.s)) * std::polar(1.0, 0.3 * x.x1);
        }
        return v;
    });
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void core_grid_checks(Suite& s, std::mt19937_64& rng)
{
    const GridSpec grid(8.0, 96);
    const auto g = kernels::Layout::of(grid);
    const ComplexField f = random_bumps(grid, rng);
    const ComplexField h = random_bumps(grid, rng);

    const double lhs = inner_re(h, laplacian(f));
    const double rhs = inner_re(laplacian(h), f);
    s.check("core_grid", "laplacian symmetry (rel)", rel(lhs, rhs), 1e-10);

    std::vector<cplx> ang(grid.size());
    kernels::angular(g, f.values(), ang);
    const cplx fa = kernels::inner(g, f.values(), ang);
    s.check("core_grid", "momentum term real (rel)", std::abs(fa.real()) / l2_norm(f) / l2_norm(f), 1e-12);

    RealField dens(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        dens[k] = std::norm(f[k]);
    }
    std::vector<cplx> ang_dens(grid.size());
    const ComplexField cd = to_complex(dens);
    kernels::angular(g, cd.values(), ang_dens);
    double div = 0.0;
    for (const cplx& v : ang_dens) {
        div += v.real();
    }
    s.check("core_grid", "rotation field divergence-free", std::abs(div * grid.cell_area()) / integrate(dens), 1e-10);

    RealField a = real_part(f);
    RealField b = imag_part(h);
    RealField comb(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        comb[k] = 2.5 * a[k] - 0.75 * b[k];
    }
    s.check("core_grid", "integrate linear (rel)", rel(integrate(comb), 2.5 * integrate(a) - 0.75 * integrate(b)), 1e-12);
    RealField bigger = dens;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        bigger[k] += std::norm(h[k]);
    }
    s.check("core_grid", "integrate monotone (deficit)", std::max(0.0, integrate(dens) - integrate(bigger)), 0.0);

    const ComplexField n1 = normalize(f);
    const ComplexField n2 = normalize(n1);
    ComplexField scaled = f;
    for (auto& v : scaled.values()) {
        v *= 3.7;
    }
    const ComplexField n3 = normalize(scaled);
    double idem = 0.0;
    double hom = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        idem = std::max(idem, std::abs(n2[k] - n1[k]));
        hom = std::max(hom, std::abs(n3[k] - n1[k]));
    }
    s.check("core_grid", "normalize idempotent (sup)", idem / sup_norm(n1), 1e-14);
    s.check("core_grid", "normalize degree-0 homogeneous (sup)", hom / sup_norm(n1), 1e-14);

    std::vector<cplx> lo(grid.size());
    std::vector<cplx> ls(grid.size());
    kernels::laplacian(g, f.values(), lo);
    kernels::serial::laplacian(g, f.values(), ls);
    double kdiff = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        kdiff = std::max(kdiff, std::abs(lo[k] - ls[k]));
    }
    kdiff += rel(kernels::dirichlet_form(g, f.values()), kernels::serial::dirichlet_form(g, f.values()));
    kdiff += rel(kernels::momentum(g, f.values()), kernels::serial::momentum(g, f.values()));
    kdiff += rel(kernels::power_integral(g, f.values(), 3.0), kernels::serial::power_integral(g, f.values(), 3.0));
    s.check("core_grid", "openmp kernels match serial", kdiff, 1e-12);
}

void scalar_ground_checks(Suite& s, const RadialProfile& w2)
{
    for (double p : {1.5, 2.0, 2.5}) {
        char name[64];
        std::snprintf(name, sizeof name, "identities r1,r2 at p=%.1f", p);
        s.guarded("scalar_ground", name, [&] {
            const RadialProfile w = p == 2.0 ? w2 : solve_w(p);
            const IdentityResidual r = identities_residual(w);
            s.check("scalar_ground", name, std::max(r.r1, r.r2), 1e-4);
        });
    }

    const bool over = classify_shot(2.0, w2.w0 * (1.0 + 1e-6), w2.h, 2.0 * w2.r_max) == ShotKind::overshoot;
    const bool under = classify_shot(2.0, w2.w0 * (1.0 - 1e-6), w2.h, 2.0 * w2.r_max) == ShotKind::undershoot;
    s.check("scalar_ground", "shots bracket w0 at 1e-6", over && under ? 0.0 : 1.0, 0.0);

    s.guarded("scalar_ground", "refinement: a* under h/2 (rel)", [&] {
        ShootingOptions fine;
        fine.h = 0.5 * w2.h;
        const RadialProfile wf = solve_w(2.0, 1e-4, fine);
        s.check("scalar_ground", "refinement: a* under h/2 (rel)", rel(wf.a_star, w2.a_star), 1e-4);
    });

    // log w + r + ½ log r should be flat on the tail.
    const double r0 = 0.5 * w2.r_max;
    const double r1 = 0.9 * w2.r_max;
    const auto phi = [&](double r) { return std::log(w2(r)) + r + 0.5 * std::log(r); };
    s.check("scalar_ground", "tail slope of log w + r + log(r)/2", std::abs((phi(r1) - phi(r0)) / (r1 - r0)), 1e-2);
}

void potential_checks(Suite& s, const RadialProfile& w)
{
    const PotentialSpec specs[] = {PotentialSpec::harmonic(1.0), PotentialSpec::anisotropic(1.0, 4.0),
                                   PotentialSpec::homogeneous_plus(1.0, 1.0, 0.5, 1.5)};
    double defect = 0.0;
    for (const auto& V : specs) {
        defect = std::max(defect, homogeneity_defect(homogeneous_core(V, 1.0)));
    }
    s.check("potentials", "core homogeneity defect", defect, 1e-10);

    double rise = 0.0;
    for (const auto& V : specs) {
        for (int k = 0; k < 64; ++k) {
            const double t = 0.1 * (k + 1);
            const Point x{t * std::cos(0.7 * k), t * std::sin(0.7 * k)};
            double prev = EffectivePotential{V, 0.0}(x);
            for (int m = 1; m <= 12; ++m) {
                const double cur = EffectivePotential{V, 0.25 * m}(x);
                rise = std::max(rise, cur - prev);
                prev = cur;
            }
        }
    }
    s.check("potentials", "V_Omega nonincreasing in Omega", rise, 0.0);

    double spread = 0.0;
    double lowest = INFINITY;
    for (const auto& V : {specs[0], specs[1]}) {
        for (int d = 0; d < 16; ++d) {
            const Point e{std::cos(d * M_PI / 8.0), std::sin(d * M_PI / 8.0)};
            const EffectivePotential vo{V, 1.0};
            const double q10 = vo(10.0 * e) / 100.0;
            for (double R : {20.0, 40.0}) {
                const double q = vo(R * e) / (R * R);
                spread = std::max(spread, rel(q, q10));
                lowest = std::min(lowest, q);
            }
        }
    }
    s.check("potentials", "V_Omega/|x|^2 constant along rays (rel)", spread, 1e-10);
    s.check("potentials", "V_Omega/|x|^2 positive (-min)", -lowest, 0.0);

    s.guarded("potentials", "H translation consistency", [&] {
        const HomogeneousFn h = homogeneous_core(PotentialSpec::anisotropic(1.0, 4.0), 1.0);
        const GridSpec grid = concentration_grid(w);
        const Point shift{3.0 * grid.spacing(), -2.0 * grid.spacing()};
        RealField base = sample_to_grid(w, grid).field;
        RealField moved = sample_to_grid(w, grid, shift).field;
        for (auto& v : base.values()) {
            v *= v;
        }
        for (auto& v : moved.values()) {
            v *= v;
        }
        const Point y_base = minimize_H(ConcentrationFunctional(h, std::move(base))).y0;
        const Point y_moved = minimize_H(ConcentrationFunctional(h, std::move(moved))).y0;
        s.check("potentials", "H translation consistency", (y_moved - y_base + shift).norm(), 0.1 * grid.spacing());
    });
}

void energy_checks(Suite& s, std::mt19937_64& rng)
{
    const GridSpec grid(8.0, 96);
    const ComplexField u = normalize(random_bumps(grid, rng));
    const RealField V = sample_potential(PotentialSpec::harmonic(1.0), grid);
    const Physics phys{3.0, 2.2, 0.8};

    ComplexField turned = u;
    for (auto& v : turned.values()) {
        v *= std::polar(1.0, 1.1);
    }
    const EnergyBreakdown e0 = gp_energy(u, V, phys);
    const EnergyBreakdown e1 = gp_energy(turned, V, phys);
    s.check("energy", "phase gauge invariance (rel)", rel(e1.total, e0.total), 1e-13);

    ComplexField conj = u;
    for (auto& v : conj.values()) {
        v = std::conj(v);
    }
    const EnergyBreakdown ec = gp_energy(conj, V, phys);
    s.check("energy", "momentum odd under conjugation (rel)", std::abs(ec.momentum + e0.momentum) / std::abs(e0.momentum), 1e-12);

    const RealField ur = modulus(u);
    const ComplexField real_u = to_complex(ur);
    const Physics still{phys.rho, phys.p, 0.0};
    const double er = gp_energy(real_u, V, still).total;
    double vm = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        vm += V[k] * ur[k] * ur[k];
    }
    vm *= grid.cell_area();
    s.check("energy", "real reduction to hat energy (rel)", rel(er, hat_energy(ur, phys.rho, phys.p) + vm), 1e-12);

    const double mu = lagrange_multiplier(u, e0.total, phys.rho, phys.p);
    const double r0 = el_residual(u, mu, V, phys);
    const double r1 = el_residual(turned, mu, V, phys);
    s.check("energy", "el residual gauge invariance (rel)", rel(r1, r0), 1e-12);
}

struct SmallSolve
{
    RadialProfile profile;
    SolveConfig config;
    PotentialSpec V = PotentialSpec::harmonic(1.0);
    Physics phys;
    double eps{1.0};
};

void minimize_checks(Suite& s, const SmallSolve& sm, const GroundState& gs)
{
    s.check("minimize", "small solve converged", gs.converged ? 0.0 : 1.0, 0.0, gs.message);
    s.check("minimize", "final mass |1 - ||u|||", std::abs(1.0 - l2_norm(gs.u)), 1e-10);

    // Fresh flow steps from a rough start.
    {
        const ScaledProblem sp = rescale_problem(sm.V, sm.phys, sm.eps);
        const RealField V = sample_potential(sp.V, sm.config.grid);
        ComplexField u = initial_guess(InitKind::vortex, sm.config.grid, &sm.profile, 1.0);
        double worst = std::abs(1.0 - l2_norm(u));
        for (int k = 0; k < 10; ++k) {
            u = flow_step(u, V, sp.phys, 0.05);
            worst = std::max(worst, std::abs(1.0 - l2_norm(u)));
        }
        s.check("minimize", "every iterate normalized", worst, 1e-10);
    }

    double increase = 0.0;
    for (std::size_t k = 1; k < gs.history.size(); ++k) {
        const double d = gs.history[k].energy - gs.history[k - 1].energy;
        increase = std::max(increase, d / std::abs(gs.history[k - 1].energy));
    }
    s.check("minimize", "accepted energies nonincreasing (rel rise)", increase, 1e-13);

    const RealField V = sample_potential(rescale_problem(sm.V, sm.phys, sm.eps).V, sm.config.grid);
    const RealField m = modulus(gs.u);
    const double w = gs.solved.omega;
    double vo = 0.0;
    for (std::size_t j = 0; j < m.grid().n(); ++j) {
        for (std::size_t i = 0; i < m.grid().n(); ++i) {
            const Point x = m.grid().node(i, j);
            vo += (V(i, j) - 0.25 * w * w * dot(x, x)) * m(i, j) * m(i, j);
        }
    }
    vo *= m.grid().cell_area();
    const double lower = hat_energy(m, gs.solved.rho, gs.solved.p) + vo;
    const double dx = m.grid().spacing();
    s.check("minimize", "diamagnetic lower bound (deficit)", std::max(0.0, lower - gs.energy.total),
            10.0 * dx * dx * std::max(1.0, std::abs(gs.energy.total)));
    s.check("energy", "diamagnetic pointwise violation", diamagnetic_check(gs.u, w).max_violation, 1e-10);

    SolveConfig turned = sm.config;
    turned.init_phase = 0.9;
    const GroundState g2 = solve_scaled(turned, sm.V, sm.phys, sm.eps, &sm.profile);
    const PhaseAlignment al = phase_align(g2.u, gs.u);
    s.check("minimize", "gauge equivariance (L2 after align)", al.distance, 10.0 * sm.config.tol_residual);
}

void asymptotic_checks(Suite& s, const SmallSolve& sm, const GroundState& gs)
{
    double prev = INFINITY;
    double worst_id = 0.0;
    bool decreasing = true;
    for (double p : {1.5, 2.0, 2.5}) {
        prev = INFINITY;
        for (double t = 1.0; t <= 64.0; t *= 2.0) {
            const double rho = t * std::sqrt(sm.profile.a_star);
            const double e = epsilon_rho(rho, sm.profile.a_star, p);
            decreasing = decreasing && e < prev;
            prev = e;
            worst_id = std::max(worst_id, std::abs(e * e * hat_I_of_rho(rho, sm.profile.a_star, p) + 0.5 * (3.0 - p)));
        }
    }
    s.check("asymptotics", "eps strictly decreasing in rho", decreasing ? 0.0 : 1.0, 0.0);
    s.check("asymptotics", "eps^2 * I_hat identity", worst_id, 1e-12);

    s.guarded("asymptotics", "gap lower bound", [&] {
        const DiscreteLimit limit = discrete_limit(sm.config, sm.profile, sm.phys.p);
        const BlowupReport r = blowup_report(gs, sm.profile, sm.phys, limit);
        s.check("asymptotics", "gap lower bound (-gap)", -r.gap, 1e-3);
        s.check("asymptotics", "gauge orthogonality", r.orthogonality, 1e-8);
    });

    s.guarded("asymptotics", "rescaled mass", [&] {
        const Point z = max_point(gs.u);
        const RescaledMinimizer rm = rescale_minimizer(gs.u, 1.0, z, gs.solved.omega, sm.profile, gs.u.grid());
        s.check("asymptotics", "rescaled mass |1 - ||w_rho|||", std::abs(1.0 - l2_norm(rm.w_rho)), 1e-3);
    });

    s.guarded("asymptotics", "z/eps under grid refinement", [&] {
        SolveConfig fine = sm.config;
        fine.grid = GridSpec(sm.config.grid.half_width(), 2 * sm.config.grid.n() - 1);
        const GroundState gf = solve_scaled(fine, sm.V, sm.phys, sm.eps, &sm.profile);
        const Point zc = (gs.length_scale / sm.eps) * max_point(gs.u);
        const Point zf = (gf.length_scale / sm.eps) * max_point(gf.u);
        s.check("asymptotics", "z/eps under grid refinement", (zc - zf).norm(), 0.1);
    });
}

void determinism_checks(Suite& s, const RadialProfile& w)
{
    SolveConfig c;
    c.grid = GridSpec(8.0, 64);
    c.init = InitKind::random;
    c.seed = 11;
    c.max_iter = 300;
    c.tol_residual = 1e-7;
    const Physics phys{2.0, 2.0, 0.5};
    const GroundState a = solve_ground_state(c, PotentialSpec::harmonic(1.0), phys, &w);
    const GroundState b = solve_ground_state(c, PotentialSpec::harmonic(1.0), phys, &w);
    bool same = a.energy.total == b.energy.total && a.iterations == b.iterations;
    for (std::size_t k = 0; same && k < a.u.values().size(); ++k) {
        same = a.u[k] == b.u[k];
    }
    s.check("cli", "repeat solve bit-identical", same ? 0.0 : 1.0, 0.0);
}

} // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& options)
{
    Suite s;
    std::mt19937_64 rng(options.seed);
    core_grid_checks(s, rng);

    const RadialProfile w = solve_w(2.0);
    scalar_ground_checks(s, w);
    potential_checks(s, w);
    energy_checks(s, rng);

    SmallSolve sm;
    sm.profile = w;
    sm.config.grid = GridSpec(12.0, 128);
    sm.config.init = InitKind::rescaled_w;
    sm.phys = Physics{10.0 * std::sqrt(w.a_star), 2.0, 1.0};
    sm.eps = epsilon_rho(sm.phys.rho, w.a_star, 2.0);
    std::optional<GroundState> gs;
    s.guarded("minimize", "small solve", [&] { gs = solve_scaled(sm.config, sm.V, sm.phys, sm.eps, &w); });
    if (gs) {
        s.guarded("minimize", "solver invariants", [&] { minimize_checks(s, sm, *gs); });
        asymptotic_checks(s, sm, *gs);
    }
    s.guarded("cli", "repeat solve bit-identical", [&] { determinism_checks(s, w); });
    return s.take();
}

void print_check_table(std::ostream& os, const std::vector<CheckResult>& results)
{
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %-46s %12s %12s  %s\n", "module", "check", "value", "bound", "result");
    os << line;
    for (const auto& r : results) {
        std::snprintf(line, sizeof line, "%-12s %-46s %12.3e %12.3e  %s", r.module.c_str(), r.name.c_str(), r.value,
                      r.bound, r.pass ? "PASS" : "FAIL");
        os << line;
        if (!r.pass && !r.note.empty()) {
            os << "  (" << r.note << ')';
        }
        os << '\n';
    }
    const auto failed = std::ranges::count_if(results, [](const CheckResult& r) { return !r.pass; });
    os << results.size() - static_cast<std::size_t>(failed) << '/' << results.size() << " checks passed\n";
}

bool all_passed(const std::vector<CheckResult>& results)
{
    return std::ranges::all_of(results, [](const CheckResult& r) { return r.pass; });
}

} // namespace rgs
