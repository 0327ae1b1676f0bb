#include "rgs/asymptotics.hpp"

#include <doctest.h>

#include <sstream>

using namespace rgs;

namespace {

const RadialProfile& w2()
{
    static const RadialProfile w = solve_w(2.0);
    return w;
}

} // namespace

TEST_CASE("blow-up scale and limiting energy")
{
    const double a = w2().a_star;
    CHECK(epsilon_rho(std::sqrt(a), a, 2.0) == doctest::Approx(1.0));
    CHECK(epsilon_rho(10.0 * std::sqrt(a), a, 2.0) == doctest::Approx(0.1));
    CHECK(epsilon_rho(4.0 * std::sqrt(a), a, 2.5) == doctest::Approx(0.015625));
    CHECK(hat_I_of_rho(10.0 * std::sqrt(a), a, 2.0) == doctest::Approx(-50.0));
    CHECK(hat_I_of_rho(std::sqrt(a), a, 2.5) == doctest::Approx(-0.25));

    double prev = INFINITY;
    for (double k : {1.0, 2.0, 5.0, 10.0, 100.0}) {
        const double e = epsilon_rho(k * std::sqrt(a), a, 1.5);
        CHECK(e < prev);
        prev = e;
        for (double p : {1.5, 2.0, 2.5}) {
            const double ep = epsilon_rho(k * std::sqrt(a), a, p);
            CHECK(ep * ep * hat_I_of_rho(k * std::sqrt(a), a, p) == doctest::Approx(-(3.0 - p) / 2.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("max point")
{
    const GridSpec g(5.0, 101);
    const RadialProfile& w = w2();
    const ComplexField shifted = ComplexField::sample(g, [&](Point x) { return w((x - Point{1.0, 0.0}).norm()); });
    CHECK((max_point(shifted) - Point{1.0, 0.0}).norm() < g.spacing());

    // Equal bumps at (±2, 0): the tie goes to the smaller x1.
    const ComplexField twin = ComplexField::sample(g, [](Point x) {
        const Point a = x - Point{2.0, 0.0};
        const Point b = x - Point{-2.0, 0.0};
        return std::exp(-4.0 * dot(a, a)) + std::exp(-4.0 * dot(b, b));
    });
    const Point z = max_point(twin);
    CHECK(z.x1 == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(max_point(twin).x1 == z.x1);

    SolveConfig c;
    c.grid = GridSpec(6.0, 64);
    const GroundState gs = solve_ground_state(c, PotentialSpec::harmonic(1.0), Physics{3.0, 2.0, 0.0});
    REQUIRE(gs.converged);
    CHECK(max_point(gs.u).norm() < gs.u.grid().spacing());
}

TEST_CASE("rescale round trip")
{
    const RadialProfile& w = w2();
    const double eps = 0.2;
    const double omega = 1.0;
    const Point z{0.3, -0.2};
    const double theta = 0.4;
    const GridSpec physical(3.0, 401);
    const ComplexField u = ComplexField::sample(physical, [&](Point y) {
        const Point x = (1.0 / eps) * (y - z);
        return w(x.norm()) / (eps * std::sqrt(w.a_star)) * std::polar(1.0, 0.5 * omega * dot(y, z.perp()) + theta);
    });
    const GridSpec target(10.0, 201);
    const RescaledMinimizer r = rescale_minimizer(u, eps, z, omega, w, target);
    CHECK(std::abs(std::remainder(r.theta + theta, 2.0 * M_PI)) < 1e-6);
    double worst = 0.0;
    double mass = 0.0;
    for (std::size_t j = 0; j < target.n(); ++j) {
        for (std::size_t i = 0; i < target.n(); ++i) {
            const Point x = target.node(i, j);
            if (!target.on_boundary(i, j)) {
                worst = std::max(worst, std::abs(r.w_rho(i, j) - w(x.norm()) / std::sqrt(w.a_star)));
            }
            mass += std::norm(r.w_rho(i, j));
        }
    }
    // Bilinear interpolation: |error| <= (h²/8)(|∂₁²f| + |∂₂²f|) with h = Δ/ε, largest at the peak where w'' = (w0 - w0²)/2.
    const double h = physical.spacing() / eps;
    const double bound = 0.25 * h * h * std::abs(0.5 * (w.w0 - w.w0 * w.w0)) / std::sqrt(w.a_star);
    CHECK(worst < bound);
    CHECK(mass * target.cell_area() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.orthogonality < 1e-8);

    const ComplexField coarse = ComplexField::sample(GridSpec(3.0, 31), [&](Point y) { return w(y.norm() / eps); });
    CHECK_THROWS_WITH(rescale_minimizer(coarse, eps, {0.0, 0.0}, omega, w, target), "rescale under-resolved");
}

TEST_CASE("real minimizer without rotation has a real rescaled profile")
{
    SolveConfig c;
    c.grid = GridSpec(4.0, 161);
    const double a = w2().a_star;
    const double rho = 3.0 * std::sqrt(a);
    const GroundState gs = solve_ground_state(c, PotentialSpec::harmonic(1.0), Physics{rho, 2.0, 0.0});
    REQUIRE(gs.converged);
    const double eps = epsilon_rho(rho, a, 2.0);
    const RescaledMinimizer r = rescale_minimizer(gs.u, eps, max_point(gs.u), 0.0, w2(), GridSpec(8.0, 101));
    CHECK(std::abs(std::sin(r.theta)) < 1e-12);
    double imag = 0.0;
    for (const cplx& v : r.w_rho.values()) {
        imag = std::max(imag, std::abs(v.imag()));
    }
    CHECK(imag < 1e-12);
}

TEST_CASE("concentration track")
{
    const HomogeneousFn h = homogeneous_core(PotentialSpec::harmonic(1.0), 1.0);
    std::vector<BlowupReport> reports(3);
    for (std::size_t k = 0; k < 3; ++k) {
        reports[k].rho = 10.0 * static_cast<double>(k + 1);
        reports[k].z_over_eps = {0.1 / static_cast<double>(k + 1), 0.0};
    }
    const ConcentrationTrack t = concentration_track(reports, h, w2());
    CHECK(t.y0_est.x1 == doctest::Approx(0.1 / 3.0));
    CHECK(t.y0_ref.norm() < 1e-6);
    CHECK(t.err == doctest::Approx(0.1 / 3.0).epsilon(1e-4));

    CHECK_THROWS(concentration_track({reports[0], reports[1]}, h, w2()));
    const HomogeneousFn zero{[](Point) { return 0.0; }, 2.0, "zero"};
    CHECK_THROWS(concentration_track(reports, zero, w2()));
}

TEST_CASE("report csv")
{
    std::ostringstream os;
    write_report_csv_header(os);
    BlowupReport r;
    r.rho = 2.0;
    r.eps = 0.5;
    write_report_csv_row(os, r);
    std::istringstream is(os.str());
    std::string header;
    std::string row;
    std::getline(is, header);
    std::getline(is, row);
    CHECK(header == "rho,eps,I_hat,I,gap,mu_eps2,z1,z2,z_over_eps1,z_over_eps2,profile_sup_dist,imag_h1,imag_sup");
    CHECK(std::count(row.begin(), row.end(), ',') == 12);
    CHECK(row.rfind("2,0.5,", 0) == 0);
}

TEST_CASE("identical solves coincide")
{
    SolveConfig c;
    c.grid = GridSpec(6.0, 64);
    c.init = InitKind::random;
    c.seed = 21;
    const Physics phys{3.0, 2.0, 1.0};
    const GroundState a = solve_ground_state(c, PotentialSpec::harmonic(1.0), phys);
    const GroundState b = solve_ground_state(c, PotentialSpec::harmonic(1.0), phys);
    CHECK(phase_align(a.u, b.u).distance == 0.0);
}

TEST_CASE("uniqueness probe")
{
    const double a = w2().a_star;
    const double rho = 4.0 * std::sqrt(a);
    const double eps = epsilon_rho(rho, a, 2.0);
    SolveConfig c;
    c.grid = GridSpec(10.0, 96);
    c.init_eps = 1.0;
    c.tol_residual = 1e-9;
    const ScaledProblem sp = rescale_problem(PotentialSpec::harmonic(1.0), Physics{rho, 2.0, 1.0}, eps);
    const UniquenessResult tight = uniqueness_probe(c, sp.V, sp.phys, 3, 5, w2());
    CHECK(tight.conclusive);
    CHECK(tight.qualifying == 3);
    CHECK(tight.max_pair_dist < 1e-4);

    c.tol_residual = 1e-4;
    const UniquenessResult loose = uniqueness_probe(c, sp.V, sp.phys, 3, 5, w2());
    CHECK_FALSE(loose.conclusive);
    CHECK(loose.max_pair_dist >= 0.0);

    CHECK_THROWS(uniqueness_probe(c, sp.V, sp.phys, 1, 5, w2()));
}
