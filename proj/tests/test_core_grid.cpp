#include "rgs/field_io.hpp"
#include "rgs/grid.hpp"

#include <doctest.h>

#include <sstream>

using namespace rgs;

namespace {

double gauss(Point x) { return std::exp(-0.5 * dot(x, x)); }

double max_interior(const GridSpec& g, auto&& fn)
{
    double m = 0.0;
    for (std::size_t j = 1; j + 1 < g.n(); ++j) {
        for (std::size_t i = 1; i + 1 < g.n(); ++i) {
            m = std::max(m, fn(i, j));
        }
    }
    return m;
}

} // namespace

TEST_CASE("grid spec rejects degenerate grids")
{
    CHECK_THROWS(GridSpec(1.0, 15));
    CHECK_THROWS(GridSpec(0.0, 64));
    const GridSpec g(8.0, 17);
    CHECK(g.spacing() == doctest::Approx(1.0));
    CHECK(g.coord(0) == -8.0);
    CHECK(g.coord(16) == doctest::Approx(8.0));
}

TEST_CASE("laplacian of zero is zero")
{
    const ComplexField f(GridSpec(4.0, 32));
    const ComplexField lf = laplacian(f);
    for (const auto& v : lf.values()) {
        CHECK(v == cplx{});
    }
}

static double gaussian_laplacian_error(const GridSpec& g, bool subtract_leading_term)
{
    const ComplexField f = ComplexField::sample(g, gauss);
    const ComplexField lf = laplacian(f);
    const double dx = g.spacing();
    return max_interior(g, [&](std::size_t i, std::size_t j) {
        const Point x = g.node(i, j);
        double expected = (dot(x, x) - 2.0) * gauss(x);
        if (subtract_leading_term) {
            // Five-point stencil: Δ_h f = Δf + (Δ²/12)(∂₁⁴f + ∂₂⁴f) + O(Δ⁴), ∂⁴ e^{-s²/2} = (s⁴ - 6s² + 3) e^{-s²/2}.
            auto d4 = [](double s) { return s * s * s * s - 6.0 * s * s + 3.0; };
            expected += dx * dx / 12.0 * (d4(x.x1) + d4(x.x2)) * gauss(x);
        }
        return std::abs(lf(i, j) - expected);
    });
}

// At L = 8, n = 256 the leading truncation term alone is 0.5Δ² ≈ 2.0e-3 at the origin.
TEST_CASE("laplacian of a gaussian matches the analytic value within 1e-3" * doctest::should_fail())
{
    CHECK(gaussian_laplacian_error(GridSpec(8.0, 256), false) < 1e-3);
}

TEST_CASE("laplacian of a gaussian: error is the five-point truncation term")
{
    const GridSpec g(8.0, 256);
    const double dx = g.spacing();
    const double err = gaussian_laplacian_error(g, false);
    CHECK(err == doctest::Approx(0.5 * dx * dx).epsilon(0.02));
    CHECK(gaussian_laplacian_error(g, true) < 0.02 * err);
    CHECK(gaussian_laplacian_error(GridSpec(8.0, 512), false) < 1e-3);
}

TEST_CASE("laplacian annihilates a linear function on the interior")
{
    const GridSpec g(3.0, 33);
    const ComplexField f = ComplexField::sample(g, [](Point x) { return x.x1; }, false);
    const ComplexField lf = laplacian(f);
    const double err = max_interior(g, [&](std::size_t i, std::size_t j) { return std::abs(lf(i, j)); });
    CHECK(err < 1e-12);
    CHECK(lf(0, 5) == cplx{});
}

TEST_CASE("rotation term on a radial field is at stencil level")
{
    const GridSpec g(8.0, 256);
    const ComplexField f = ComplexField::sample(g, [](Point x) { return std::exp(-dot(x, x)); });
    const ComplexField r = rotation_term(f, 1.0);
    // x⊥·∇ of a radial function vanishes; the centered stencil leaves O(Δ²) terms.
    const double dx = g.spacing();
    CHECK(sup_norm(r) < dx * dx);
    CHECK(sup_norm(rotation_term(f, 0.0)) == 0.0);
}

static double vortex_rotation_error(std::size_t n, double omega)
{
    const GridSpec g(4.0, n);
    const ComplexField f = ComplexField::sample(g, [](Point x) { return std::polar(1.0, std::atan2(x.x2, x.x1)); });
    const ComplexField r = rotation_term(f, omega);
    // iΩ ∂_φ e^{iφ} = -Ω e^{iφ}; compare away from the core and the boundary ring.
    double err = 0.0;
    for (std::size_t j = 1; j + 1 < g.n(); ++j) {
        for (std::size_t i = 1; i + 1 < g.n(); ++i) {
            const double rad = g.node(i, j).norm();
            if (rad > 0.5 && rad < 3.5) {
                err = std::max(err, std::abs(r(i, j) + omega * f(i, j)));
            }
        }
    }
    return err;
}

TEST_CASE("rotation term on a vortex phase")
{
    const double coarse = vortex_rotation_error(401, 1.5);
    const double fine = vortex_rotation_error(801, 1.5);
    CHECK(coarse < 2e-3);
    // Second-order stencil: halving Δ divides the error by about four.
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("integrate is the rectangle rule")
{
    const GridSpec g(1.0, 21);
    const RealField one = RealField::sample(g, [](Point) { return 1.0; });
    const double dx = g.spacing();
    CHECK(integrate(one) == doctest::Approx(19.0 * 19.0 * dx * dx).epsilon(1e-14));
    CHECK(integrate(one) < 4.0);
}

TEST_CASE("laplacian is symmetric on Dirichlet fields")
{
    const GridSpec g(6.0, 80);
    const ComplexField f = ComplexField::sample(g, [](Point x) { return gauss(x - Point{0.5, -1.0}) * cplx(1.0, x.x2); });
    const ComplexField h = ComplexField::sample(g, [](Point x) { return gauss(x) * std::polar(1.0, x.x1); });
    const double a = inner_re(h, laplacian(f));
    const double b = inner_re(laplacian(h), f);
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
}

TEST_CASE("normalize")
{
    const GridSpec g(6.0, 64);
    const ComplexField f = ComplexField::sample(g, [](Point x) { return 3.0 * gauss(x) * cplx(1.0, 0.2); });
    const ComplexField n = normalize(f);
    CHECK(l2_norm(n) == doctest::Approx(1.0).epsilon(1e-14));
    const ComplexField nn = normalize(n);
    for (std::size_t k = 0; k < n.values().size(); ++k) {
        CHECK(std::abs(nn[k] - n[k]) < 1e-15);
    }
    CHECK_THROWS(normalize(ComplexField(g)));
}

TEST_CASE("norms of a gaussian")
{
    const GridSpec g(10.0, 401);
    const ComplexField f = ComplexField::sample(g, gauss);
    const Norms n = norms(f, 4.0);
    // ∫e^{-|x|²} = π, ∫e^{-2|x|²} = π/2, ∫|∇f|² = ∫|x|²e^{-|x|²} = π.
    CHECK(n.l2 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-6));
    CHECK(n.lq == doctest::Approx(std::pow(M_PI / 2.0, 0.25)).epsilon(1e-6));
    CHECK(n.h1 == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-3));
}

TEST_CASE("field dump round trip")
{
    const GridSpec g(5.0, 20);
    const ComplexField f = ComplexField::sample(g, [](Point x) { return cplx(x.x1, x.x2 * x.x2); });
    std::stringstream ss;
    write_field(ss, f);
    const std::string bytes = ss.str();
    CHECK(bytes.substr(0, 4) == "RGS1");
    CHECK(bytes.size() == 4 + 8 + 8 + 20 * 20 * 16);
    const ComplexField back = read_complex_field(ss);
    CHECK(back.grid() == g);
    for (std::size_t k = 0; k < f.values().size(); ++k) {
        CHECK(back[k] == f[k]);
    }

    const RealField r = real_part(f);
    std::stringstream rs;
    write_field(rs, r);
    CHECK(rs.str().substr(0, 4) == "RGR1");
    const RealField rb = read_real_field(rs);
    CHECK(rb[17] == r[17]);

    std::stringstream wrong(bytes);
    CHECK_THROWS(read_real_field(wrong));
}
