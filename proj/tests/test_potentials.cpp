#include "oracles.hpp"

#include "rgs/potentials.hpp"
#include "rgs/scalar_ground.hpp"

#include <doctest.h>

using namespace rgs;

namespace {

const RadialProfile& w2()
{
    static const RadialProfile w = solve_w(2.0);
    return w;
}

HomogeneousFn quad(double a1, double a2)
{
    return {[a1, a2](Point x) { return a1 * x.x1 * x.x1 + a2 * x.x2 * x.x2; }, 2.0, "quad"};
}

// ∫|x|²w² = 2π ∫ r³ w² dr by the trapezoid rule on the stored samples.
double second_moment_oracle(const RadialProfile& w)
{
    double acc = 0.0;
    for (std::size_t k = 1; k < w.values.size(); ++k) {
        const double r0 = static_cast<double>(k - 1) * w.h;
        const double r1 = static_cast<double>(k) * w.h;
        acc += 0.5 * w.h * (r0 * r0 * r0 * w.values[k - 1] * w.values[k - 1] + r1 * r1 * r1 * w.values[k] * w.values[k]);
    }
    return 2.0 * M_PI * acc;
}

} // namespace

TEST_CASE("potential evaluation")
{
    CHECK(PotentialSpec::harmonic(1.0)({1.0, 1.0}) == 2.0);
    CHECK(PotentialSpec::anisotropic(1.0, 4.0)({0.0, 1.0}) == 4.0);
    const EffectivePotential flat{PotentialSpec::harmonic(1.0), 2.0};
    for (Point x : {Point{1.0, 2.0}, Point{-3.0, 0.5}, Point{7.0, -7.0}}) {
        CHECK(flat(x) == doctest::Approx(0.0).scale(1.0));
    }
    const PotentialSpec hp = PotentialSpec::homogeneous_plus(1.0, 2.0, 0.5, 1.5);
    CHECK(hp({2.0, -1.0}) == doctest::Approx(4.0 + 2.0 + 0.5 * (std::pow(2.0, 1.5) + 1.0)));
}

TEST_CASE("rescaled potential is l^2 V(l x)")
{
    const PotentialSpec V = PotentialSpec::anisotropic(1.0, 3.0).rescaled(0.5);
    CHECK(V({2.0, 4.0}) == doctest::Approx(0.25 * (1.0 + 3.0 * 4.0)));
}

TEST_CASE("potential invariants")
{
    CHECK_THROWS_WITH(PotentialSpec::harmonic(-1.0), doctest::Contains("potential invariant violated"));
    CHECK_THROWS_WITH(PotentialSpec::homogeneous_plus(1.0, 1.0, 1.0, 2.5), doctest::Contains("degree s"));
    CHECK_THROWS(parse_potential_kind("quartic"));
    CHECK(parse_potential_kind("anisotropic") == PotentialKind::anisotropic);
}

TEST_CASE("critical rotation speed")
{
    CHECK(omega_star(PotentialSpec::harmonic(1.0)).value == doctest::Approx(2.0));
    CHECK(omega_star(PotentialSpec::anisotropic(1.0, 4.0)).value == doctest::Approx(2.0));
    CHECK(omega_star(PotentialSpec::harmonic(3.0)).value == doctest::Approx(2.0 * std::sqrt(3.0)));
    CHECK_FALSE(omega_star(PotentialSpec::harmonic(3.0)).estimated);

    const OmegaStar est = omega_star(PotentialSpec::homogeneous_plus(1.0, 2.0, 0.7, 1.5));
    CHECK(est.estimated);
    CHECK(est.value == doctest::Approx(2.0).epsilon(1e-3));

    CHECK_THROWS_WITH(omega_star(PotentialSpec::homogeneous_plus(0.0, 0.0, 1.0, 1.5)),
                      doctest::Contains("growth condition violated"));
}

TEST_CASE("homogeneous core of V_Omega")
{
    const HomogeneousFn h = homogeneous_core(PotentialSpec::harmonic(1.0), 1.0);
    CHECK(h.degree == 2.0);
    CHECK(h({1.0, 1.0}) == doctest::Approx(2.0 * 0.75));
    CHECK(homogeneity_defect(h) < 1e-10);

    const HomogeneousFn hs = homogeneous_core(PotentialSpec::homogeneous_plus(1.0, 1.0, 2.0, 1.5), 1.0);
    CHECK(hs.degree == 1.5);
    CHECK(homogeneity_defect(hs) < 1e-10);
    // Remainder x²-terms are o(|x|^s) near the origin.
    const auto ratios = remainder_ratios(PotentialSpec::homogeneous_plus(1.0, 1.0, 2.0, 1.5), 1.0, {1e-1, 1e-2, 1e-3});
    CHECK(ratios[1] < ratios[0]);
    CHECK(ratios[2] < ratios[1]);

    const HomogeneousFn shifted{[](Point x) { return dot(x - Point{1.0, 0.0}, x - Point{1.0, 0.0}); }, 2.0, "shifted"};
    CHECK(homogeneity_defect(shifted) > 1e-3);
    CHECK_THROWS(minimize_H(shifted, w2()));
}

TEST_CASE("V_Omega is nonincreasing in Omega and quadratic along rays")
{
    const PotentialSpec V = PotentialSpec::anisotropic(1.0, 4.0);
    for (int k = 0; k < 16; ++k) {
        const Point e{std::cos(k * M_PI / 8.0), std::sin(k * M_PI / 8.0)};
        double prev = INFINITY;
        for (double om = 0.0; om <= 3.0; om += 0.5) {
            const double v = EffectivePotential{V, om}(2.0 * e);
            CHECK(v <= prev);
            prev = v;
        }
        const EffectivePotential vo{V, 1.0};
        const double q10 = vo(10.0 * e) / 100.0;
        CHECK(q10 > 0.0);
        CHECK(vo(40.0 * e) / 1600.0 == doctest::Approx(q10).epsilon(1e-12));
    }
}

TEST_CASE("concentration functional for |x|^2")
{
    const RadialProfile& w = w2();
    const ConcentrationFunctional H(quad(1.0, 1.0), w);
    const double h0 = H({0.0, 0.0});
    CHECK(h0 == doctest::Approx(second_moment_oracle(w)).epsilon(1e-4));
    for (Point y : {Point{0.5, 0.0}, Point{-1.0, 2.0}}) {
        CHECK(H(y) == doctest::Approx(h0 + dot(y, y) * w.a_star).epsilon(1e-4));
    }
    const ConcentrationFunctional zero(HomogeneousFn{[](Point) { return 0.0; }, 2.0, "zero"}, w);
    CHECK(zero({0.0, 0.0}) == 0.0);
}

TEST_CASE("minimize_H on even cores")
{
    for (const HomogeneousFn& h : {quad(1.0, 1.0), quad(1.0, 2.0), homogeneous_core(PotentialSpec::anisotropic(1.0, 4.0), 1.0)}) {
        const HMinimum m = minimize_H(h, w2());
        CHECK(m.y0.norm() < 1e-6);
        CHECK(m.grad_norm < 1e-6);
    }
}

TEST_CASE("minimize_H follows a translated density")
{
    const RadialProfile& w = w2();
    const GridSpec grid = concentration_grid(w);
    const Point c{5.0 * grid.spacing(), 3.0 * grid.spacing()};
    RealField moved = sample_to_grid(w, grid, c).field;
    for (auto& v : moved.values()) {
        v *= v;
    }
    const HMinimum m = minimize_H(ConcentrationFunctional(quad(1.0, 2.0), std::move(moved)));
    CHECK((m.y0 + c).norm() < 1e-6);
}

TEST_CASE("flat core has no unique minimum")
{
    const HomogeneousFn zero{[](Point) { return 0.0; }, 2.0, "zero"};
    CHECK_THROWS_WITH(minimize_H(zero, w2()), "minimum not unique at tolerance");
}

TEST_CASE("non-degeneracy matrix")
{
    const RadialProfile& w = w2();
    const Nondegeneracy iso = nondegeneracy(quad(1.0, 1.0), w, {0.0, 0.0});
    // ∫ 2x_j ∂_l w² = -2 δ_jl ∫ w²
    CHECK(iso.m[0][0] == doctest::Approx(-2.0 * w.a_star).epsilon(1e-3));
    CHECK(iso.m[1][1] == doctest::Approx(-2.0 * w.a_star).epsilon(1e-3));
    CHECK(std::abs(iso.m[0][1]) < 1e-6 * w.a_star);
    CHECK(iso.det == doctest::Approx(4.0 * w.a_star * w.a_star).epsilon(2e-3));
    CHECK_FALSE(iso.degenerate);

    const Nondegeneracy an = nondegeneracy(quad(1.0, 2.0), w, {0.0, 0.0});
    CHECK(an.m[0][0] == doctest::Approx(-2.0 * w.a_star).epsilon(1e-3));
    CHECK(an.m[1][1] == doctest::Approx(-4.0 * w.a_star).epsilon(1e-3));
    CHECK(an.det > 0.0);

    const Nondegeneracy flat = nondegeneracy(HomogeneousFn{[](Point) { return 0.0; }, 2.0, "zero"}, w, {0.0, 0.0});
    CHECK(flat.det == 0.0);
    CHECK(flat.degenerate);
}
