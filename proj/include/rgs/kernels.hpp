#pragma once

// Nodewise grid kernels. The default namespace holds the OpenMP versions used by
// every solver; kernels::serial holds plain loop versions kept as the reference
// for tests and benchmarks.
//
// Reductions in the OpenMP versions accumulate one partial per grid row and sum
// the rows in order, so results do not depend on the thread count.

#include <complex>
#include <cstddef>
#include <span>

namespace rgs {
class GridSpec;
}

namespace rgs::kernels {

using cplx = std::complex<double>;

struct Layout
{
    std::size_t n;
    double spacing;
    double half_width;

    static Layout of(const GridSpec& grid);
    double coord(std::size_t i) const { return -half_width + static_cast<double>(i) * spacing; }
};

/// out = Δ_h in on interior nodes, 0 on the boundary ring.
void laplacian(const Layout& g, std::span<const cplx> in, std::span<cplx> out);
/// out = in - dt Δ_h in on interior nodes, 0 on the boundary ring.
void shifted_laplacian(const Layout& g, double dt, std::span<const cplx> in, std::span<cplx> out);
/// out = x⊥ · ∇_h in (centered differences), 0 on the boundary ring.
void angular(const Layout& g, std::span<const cplx> in, std::span<cplx> out);
/// Centered differences (∂1, ∂2), 0 on the boundary ring.
void gradient(const Layout& g, std::span<const cplx> in, std::span<cplx> d1, std::span<cplx> d2);

/// h^2 Σ v
double integral(const Layout& g, std::span<const double> v);
/// h^2 Σ Re(conj(a) b)
double inner_re(const Layout& g, std::span<const cplx> a, std::span<const cplx> b);
/// h^2 Σ conj(a) b
cplx inner(const Layout& g, std::span<const cplx> a, std::span<const cplx> b);
/// Σ over grid edges |f_a - f_b|^2; equals -Re <f, Δ_h f> for Dirichlet fields.
double dirichlet_form(const Layout& g, std::span<const cplx> f);
/// h^2 Σ x⊥ · Im(conj(f) ∇_h f)
double momentum(const Layout& g, std::span<const cplx> f);
/// h^2 Σ |f|^q, with |f| < 1e-30 contributing 0.
double power_integral(const Layout& g, std::span<const cplx> f, double q);
/// h^2 Σ v |f|^2
double weighted_mass(const Layout& g, std::span<const double> v, std::span<const cplx> f);

/// y += a x
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
/// y = x + b y
void xpby(std::span<const cplx> x, double b, std::span<cplx> y);

namespace serial {
void laplacian(const Layout& g, std::span<const cplx> in, std::span<cplx> out);
void shifted_laplacian(const Layout& g, double dt, std::span<const cplx> in, std::span<cplx> out);
void angular(const Layout& g, std::span<const cplx> in, std::span<cplx> out);
void gradient(const Layout& g, std::span<const cplx> in, std::span<cplx> d1, std::span<cplx> d2);
double integral(const Layout& g, std::span<const double> v);
double inner_re(const Layout& g, std::span<const cplx> a, std::span<const cplx> b);
cplx inner(const Layout& g, std::span<const cplx> a, std::span<const cplx> b);
double dirichlet_form(const Layout& g, std::span<const cplx> f);
double momentum(const Layout& g, std::span<const cplx> f);
double power_integral(const Layout& g, std::span<const cplx> f, double q);
double weighted_mass(const Layout& g, std::span<const double> v, std::span<const cplx> f);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void xpby(std::span<const cplx> x, double b, std::span<cplx> y);
} // namespace serial

/// |z|^q guarded at |z| < 1e-30.
inline double abs_pow(cplx z, double q)
{
    const double a = std::abs(z);
    return a < 1e-30 ? 0.0 : std::exp(q * std::log(a));
}

} // namespace rgs::kernels
