#include "oracles.hpp"

#include "rgs/energy.hpp"
#include "rgs/minimize.hpp"
#include "rgs/scalar_ground.hpp"

#include <doctest.h>

using namespace rgs;

namespace {

const RadialProfile& w2()
{
    static const RadialProfile w = solve_w(2.0);
    return w;
}

double l2_distance(const ComplexField& a, const ComplexField& b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.values().size(); ++k) {
        s += std::norm(a[k] - b[k]);
    }
    return std::sqrt(s * a.grid().cell_area());
}

double max_imag(const ComplexField& u)
{
    double m = 0.0;
    for (const cplx& v : u.values()) {
        m = std::max(m, std::abs(v.imag()));
    }
    return m;
}

SolveConfig small_config()
{
    SolveConfig c;
    c.grid = GridSpec(6.0, 64);
    c.tol_residual = 1e-10;
    c.tol_energy = 1e-13;
    return c;
}

} // namespace

TEST_CASE("initial guesses are normalized")
{
    const GridSpec g(6.0, 96);
    for (InitKind kind : {InitKind::gaussian, InitKind::rescaled_w, InitKind::vortex, InitKind::random}) {
        const ComplexField u = initial_guess(kind, g, &w2(), 0.7, 3);
        CHECK(std::abs(l2_norm(u) - 1.0) < 1e-10);
    }
    CHECK_THROWS(initial_guess(InitKind::rescaled_w, g, nullptr, 1.0));
    CHECK(parse_init_kind(to_string(InitKind::vortex)) == InitKind::vortex);
}

TEST_CASE("random start is reproducible")
{
    const GridSpec g(5.0, 48);
    const ComplexField a = initial_guess(InitKind::random, g, nullptr, 1.0, 17);
    const ComplexField b = initial_guess(InitKind::random, g, nullptr, 1.0, 17);
    const ComplexField c = initial_guess(InitKind::random, g, nullptr, 1.0, 18);
    CHECK(l2_distance(a, b) == 0.0);
    CHECK(l2_distance(a, c) > 1e-3);
}

TEST_CASE("rescaled profile start has the limiting hat energy")
{
    const double rho = 40.0 * std::sqrt(w2().a_star);
    const double eps = 1.0 / 40.0;
    const ComplexField u = initial_guess(InitKind::rescaled_w, GridSpec(12.0 * eps, 256), &w2(), eps);
    // Î = -(3-p)/2 · ε⁻² at p = 2.
    CHECK(hat_energy(modulus(u), rho, 2.0) == doctest::Approx(-0.5 / (eps * eps)).epsilon(0.02));
}

TEST_CASE("flow step")
{
    const SolveConfig c = small_config();
    const PotentialSpec V = PotentialSpec::harmonic(1.0);
    const RealField Vs = sample_potential(V, c.grid);

    SUBCASE("fixed point")
    {
        const Physics phys{2.0, 2.0, 0.5};
        const GroundState gs = solve_ground_state(c, V, phys);
        REQUIRE(gs.converged);
        CHECK(l2_distance(flow_step(gs.u, Vs, phys, 0.1), gs.u) < 1e-8);
    }
    SUBCASE("descent for a small step")
    {
        const Physics phys{3.0, 2.0, 0.8};
        const ComplexField u = initial_guess(InitKind::random, c.grid, nullptr, 1.0, 4);
        const ComplexField next = flow_step(u, Vs, phys, 1e-3);
        CHECK(gp_energy(next, Vs, phys).total < gp_energy(u, Vs, phys).total);
        CHECK(std::abs(l2_norm(next) - 1.0) < 1e-10);
    }
    SUBCASE("no rotation keeps real fields real")
    {
        const Physics phys{3.0, 2.0, 0.0};
        ComplexField u = initial_guess(InitKind::gaussian, c.grid, nullptr, 1.0);
        for (int k = 0; k < 5; ++k) {
            u = flow_step(u, Vs, phys, 0.1);
        }
        CHECK(max_imag(u) < 1e-12);
    }
    SUBCASE("inner solver budget")
    {
        const GridSpec fine(6.0, 257);
        const RealField Vf = sample_potential(V, fine);
        const ComplexField u = initial_guess(InitKind::random, fine, nullptr, 1.0, 2);
        CHECK_THROWS_WITH(flow_step(u, Vf, Physics{1.0, 2.0, 0.5}, 1e9), "inner solver stalled");
    }
}

TEST_CASE("weak coupling reaches the linear ground energy")
{
    SolveConfig c = small_config();
    c.grid = GridSpec(6.0, 96);
    const RealField V = sample_potential(PotentialSpec::harmonic(1.0), c.grid);
    const double lambda = oracle::lowest_eigenvalue(c.grid, std::vector<double>(V.values().begin(), V.values().end()));
    const GroundState gs = solve_ground_state(c, PotentialSpec::harmonic(1.0), Physics{1e-4, 2.0, 0.0});
    CHECK(gs.converged);
    CHECK(gs.energy.total == doctest::Approx(2.0).epsilon(0.02));
    CHECK(gs.energy.total == doctest::Approx(lambda).epsilon(1e-3));
}

TEST_CASE("solver contract")
{
    const SolveConfig c = small_config();
    const PotentialSpec V = PotentialSpec::harmonic(1.0);
    const Physics phys{4.0, 2.0, 1.0};
    const GroundState gs = solve_ground_state(c, V, phys);
    REQUIRE(gs.converged);
    CHECK(gs.residual < c.tol_residual);
    CHECK(std::abs(l2_norm(gs.u) - 1.0) < 1e-10);
    double prev = INFINITY;
    for (const HistoryEntry& h : gs.history) {
        CHECK(h.energy <= prev + 1e-13 * std::abs(prev));
        prev = h.energy;
    }
    const RealField VO = sample_potential(EffectivePotential{V, phys.omega}, c.grid);
    const RealField m = modulus(gs.u);
    double vo = 0.0;
    for (std::size_t k = 0; k < m.values().size(); ++k) {
        vo += VO[k] * m[k] * m[k];
    }
    vo *= c.grid.cell_area();
    const double dx = c.grid.spacing();
    CHECK(gs.energy.total >= hat_energy(m, phys.rho, phys.p) + vo - 10.0 * dx * dx * std::max(1.0, std::abs(gs.energy.total)));

    SolveConfig turned = c;
    turned.init_phase = 0.9;
    const GroundState gt = solve_ground_state(turned, V, phys);
    REQUIRE(gt.converged);
    const PhaseAlignment a = phase_align(gt.u, gs.u);
    CHECK(std::abs(std::remainder(a.theta + 0.9, 2.0 * M_PI)) < 1e-6);
    CHECK(a.distance < 10.0 * c.tol_residual);
}

TEST_CASE("rotation above the critical speed is unbounded")
{
    SolveConfig c;
    c.grid = GridSpec(8.0, 128);
    CHECK_THROWS_WITH(solve_ground_state(c, PotentialSpec::harmonic(1.0), Physics{2.0, 2.0, 3.0}),
                      "energy unbounded (Ω ≥ Ω*?)");
    CHECK_THROWS_WITH(solve_ground_state(c, PotentialSpec::harmonic(1.0), Physics{2.0, 2.0, 2.0}),
                      "energy unbounded (Ω ≥ Ω*?)");
    // Allowed anyway: the mass runs to the edge of the box.
    c.allow_supercritical = true;
    CHECK_THROWS_WITH(solve_ground_state(c, PotentialSpec::harmonic(1.0), Physics{2.0, 2.0, 3.0}),
                      "energy unbounded (Ω ≥ Ω*?)");
}

TEST_CASE("scaled solve reports physical energies")
{
    SolveConfig c = small_config();
    c.grid = GridSpec(8.0, 64);
    const Physics phys{3.0, 2.0, 0.5};
    const GroundState plain = solve_ground_state(c, PotentialSpec::harmonic(1.0), phys);
    SolveConfig sc = c;
    sc.grid = GridSpec(8.0 / 0.5, 64);
    const GroundState scaled = solve_scaled(sc, PotentialSpec::harmonic(1.0), phys, 0.5);
    REQUIRE(plain.converged);
    REQUIRE(scaled.converged);
    CHECK(scaled.length_scale == 0.5);
    // Same physical grid, so the same discrete problem.
    CHECK(scaled.physical_energy().total == doctest::Approx(plain.energy.total).epsilon(1e-8));
    CHECK(scaled.physical_mu() == doctest::Approx(plain.mu).epsilon(1e-8));
}

TEST_CASE("phase alignment")
{
    const GridSpec g(5.0, 64);
    const ComplexField ref = initial_guess(InitKind::vortex, g, nullptr, 1.0);
    ComplexField u = ref;
    for (auto& v : u.values()) {
        v *= std::polar(1.0, 0.7);
    }
    const PhaseAlignment a = phase_align(u, ref);
    CHECK(std::abs(std::remainder(a.theta + 0.7, 2.0 * M_PI)) < 1e-12);
    CHECK(a.distance < 1e-12);

    const ComplexField real = initial_guess(InitKind::gaussian, g, nullptr, 1.0);
    ComplexField neg = real;
    for (auto& v : neg.values()) {
        v = -v;
    }
    CHECK(std::abs(phase_align(real, real).theta) < 1e-15);
    CHECK(std::abs(std::abs(phase_align(neg, real).theta) - M_PI) < 1e-15);

    const ComplexField noisy = initial_guess(InitKind::random, g, nullptr, 1.0, 9);
    const PhaseAlignment b = phase_align(noisy, real);
    double overlap = 0.0;
    for (std::size_t k = 0; k < real.values().size(); ++k) {
        overlap += real[k].real() * b.aligned[k].imag();
    }
    CHECK(std::abs(overlap * g.cell_area()) < 1e-10);

    const PhaseAlignment none = phase_align(ComplexField(g), real);
    CHECK(none.gauge_undetermined);
    CHECK(none.theta == 0.0);
}

TEST_CASE("magnetic translation")
{
    const GridSpec g(8.0, 161);
    const ComplexField u = initial_guess(InitKind::vortex, g, nullptr, 1.0);
    const ComplexField there = magnetic_translate(u, {0.7, -0.4}, 1.3);
    const ComplexField back = magnetic_translate(there, {-0.7, 0.4}, 1.3);
    CHECK(l2_distance(back, u) < 1e-3);
    // |(∇ - iA)u|² is invariant, so is the energy with V = Ω²|x|²/4 (V_Ω ≡ 0).
    const Physics phys{1.0, 2.0, 1.3};
    const RealField flat = RealField::sample(g, [&](Point x) { return 0.25 * phys.omega * phys.omega * dot(x, x); });
    CHECK(gp_energy(there, flat, phys).total == doctest::Approx(gp_energy(u, flat, phys).total).epsilon(1e-3));
}

TEST_CASE("nonexistence probe")
{
    const GridSpec g(8.0, 401);
    const std::vector<double> taus{1.0, 2.0, 4.0};
    const ProbeTable above =
        nonexistence_probe(PotentialSpec::harmonic(1.0), Physics{2.0, 2.0, 3.0}, w2(), taus, g);
    REQUIRE(above.rows.size() == 3);
    CHECK(above.conclusive);
    for (std::size_t k = 1; k < above.rows.size(); ++k) {
        CHECK(above.rows[k].energy.total < above.rows[k - 1].energy.total);
        CHECK(above.rows[k].v_omega <= -(2.0 - 1.0) * taus[k] * taus[k]);
    }
    const ProbeTable below =
        nonexistence_probe(PotentialSpec::harmonic(1.0), Physics{2.0, 2.0, 1.0}, w2(), taus, g);
    CHECK_FALSE(below.conclusive);
    CHECK_THROWS_WITH(
        nonexistence_probe(PotentialSpec::harmonic(1.0), Physics{2.0, 2.0, 3.0}, w2(), {0.0, 1.0}, g),
        "probe needs tau > 0");
    CHECK_THROWS_WITH(nonexistence_probe(PotentialSpec::harmonic(1.0), Physics{2.0, 2.0, 3.0}, w2(), {40.0},
                                         GridSpec(2.0, 64)),
                      "grid too small for probe");
}
