#include "rgs/grid.hpp"

#include "rgs/kernels.hpp"

#include <algorithm>
#include <string>

namespace rgs {

GridSpec::GridSpec(double half_width, std::size_t n)
    : half_width_(half_width)
    , n_(n)
    , spacing_(n > 1 ? 2.0 * half_width / static_cast<double>(n - 1) : 0.0)
{
    if (n < 16) {
        throw std::invalid_argument("grid needs n >= 16 points per axis, got " + std::to_string(n));
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw std::invalid_argument("grid half-width must be positive and finite");
    }
}

ComplexField to_complex(const RealField& f)
{
    ComplexField out(f.grid());
    std::ranges::transform(f.values(), out.values().begin(), [](double x) { return cplx{x, 0.0}; });
    return out;
}

RealField real_part(const ComplexField& f)
{
    RealField out(f.grid());
    std::ranges::transform(f.values(), out.values().begin(), [](cplx z) { return z.real(); });
    return out;
}

RealField imag_part(const ComplexField& f)
{
    RealField out(f.grid());
    std::ranges::transform(f.values(), out.values().begin(), [](cplx z) { return z.imag(); });
    return out;
}

RealField modulus(const ComplexField& f)
{
    RealField out(f.grid());
    std::ranges::transform(f.values(), out.values().begin(), [](cplx z) { return std::abs(z); });
    return out;
}

ComplexField laplacian(const ComplexField& f)
{
    ComplexField out(f.grid());
    kernels::laplacian(kernels::Layout::of(f.grid()), f.values(), out.values());
    return out;
}

ComplexField rotation_term(const ComplexField& f, double omega)
{
    if (omega < 0.0) {
        throw std::invalid_argument("rotation speed must be nonnegative");
    }
    ComplexField out(f.grid());
    if (omega == 0.0) {
        return out;
    }
    kernels::angular(kernels::Layout::of(f.grid()), f.values(), out.values());
    const cplx factor{0.0, omega};
    for (auto& z : out.values()) {
        z *= factor;
    }
    return out;
}

Gradient gradient(const ComplexField& f)
{
    Gradient g{ComplexField(f.grid()), ComplexField(f.grid())};
    kernels::gradient(kernels::Layout::of(f.grid()), f.values(), g.d1.values(), g.d2.values());
    return g;
}

double integrate(const RealField& f)
{
    return kernels::integral(kernels::Layout::of(f.grid()), f.values());
}

double inner_re(const ComplexField& a, const ComplexField& b)
{
    return kernels::inner_re(kernels::Layout::of(a.grid()), a.values(), b.values());
}

cplx inner(const ComplexField& a, const ComplexField& b)
{
    return kernels::inner(kernels::Layout::of(a.grid()), a.values(), b.values());
}

double l2_norm(const ComplexField& f)
{
    return std::sqrt(std::max(0.0, inner_re(f, f)));
}

double sup_norm(const ComplexField& f)
{
    double m = 0.0;
    for (const cplx& z : f.values()) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

Norms norms(const ComplexField& f, double q)
{
    if (q < 1.0) {
        throw std::invalid_argument("Lq norm needs q >= 1");
    }
    const auto layout = kernels::Layout::of(f.grid());
    Norms out;
    const double mass = kernels::inner_re(layout, f.values(), f.values());
    out.l2 = std::sqrt(mass);
    out.lq = std::pow(kernels::power_integral(layout, f.values(), q), 1.0 / q);
    const Gradient g = gradient(f);
    const double grad2 = kernels::inner_re(layout, g.d1.values(), g.d1.values())
                       + kernels::inner_re(layout, g.d2.values(), g.d2.values());
    out.h1 = std::sqrt(grad2 + mass);
    return out;
}

ComplexField normalize(const ComplexField& f)
{
    const double nrm = l2_norm(f);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
        throw std::domain_error("cannot normalize zero field");
    }
    ComplexField out = f;
    for (auto& z : out.values()) {
        z /= nrm;
    }
    return out;
}

} // namespace rgs
