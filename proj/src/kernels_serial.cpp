#include "rgs/kernels.hpp"

#include <cmath>
#include <vector>

namespace rgs::kernels::serial {

namespace {
bool interior(std::size_t i, std::size_t j, std::size_t n)
{
    return i > 0 && j > 0 && i + 1 < n && j + 1 < n;
}
} // namespace

void laplacian(const Layout& g, std::span<const cplx> in, std::span<cplx> out)
{
    const auto n = g.n;
    const double h2 = g.spacing * g.spacing;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = j * n + i;
            if (!interior(i, j, n)) {
                out[k] = 0.0;
                continue;
            }
            out[k] = (in[k + 1] + in[k - 1] + in[k + n] + in[k - n] - 4.0 * in[k]) / h2;
        }
    }
}

void shifted_laplacian(const Layout& g, double dt, std::span<const cplx> in, std::span<cplx> out)
{
    const auto n = g.n;
    const double h2 = g.spacing * g.spacing;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = j * n + i;
            if (!interior(i, j, n)) {
                out[k] = 0.0;
                continue;
            }
            const cplx lap = (in[k + 1] + in[k - 1] + in[k + n] + in[k - n] - 4.0 * in[k]) / h2;
            out[k] = in[k] - dt * lap;
        }
    }
}

void angular(const Layout& g, std::span<const cplx> in, std::span<cplx> out)
{
    const auto n = g.n;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = j * n + i;
            if (!interior(i, j, n)) {
                out[k] = 0.0;
                continue;
            }
            const cplx d1 = (in[k + 1] - in[k - 1]) / (2.0 * g.spacing);
            const cplx d2 = (in[k + n] - in[k - n]) / (2.0 * g.spacing);
            out[k] = -g.coord(j) * d1 + g.coord(i) * d2;
        }
    }
}

void gradient(const Layout& g, std::span<const cplx> in, std::span<cplx> d1, std::span<cplx> d2)
{
    const auto n = g.n;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = j * n + i;
            if (!interior(i, j, n)) {
                d1[k] = 0.0;
                d2[k] = 0.0;
                continue;
            }
            d1[k] = (in[k + 1] - in[k - 1]) / (2.0 * g.spacing);
            d2[k] = (in[k + n] - in[k - n]) / (2.0 * g.spacing);
        }
    }
}

double integral(const Layout& g, std::span<const double> v)
{
    double acc = 0.0;
    for (double x : v) {
        acc += x;
    }
    return acc * g.spacing * g.spacing;
}

double inner_re(const Layout& g, std::span<const cplx> a, std::span<const cplx> b)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += (std::conj(a[k]) * b[k]).real();
    }
    return acc * g.spacing * g.spacing;
}

cplx inner(const Layout& g, std::span<const cplx> a, std::span<const cplx> b)
{
    cplx acc{};
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc * (g.spacing * g.spacing);
}

double dirichlet_form(const Layout& g, std::span<const cplx> f)
{
    const auto n = g.n;
    double acc = 0.0;
    // horizontal edges, then vertical edges
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            acc += std::norm(f[j * n + i + 1] - f[j * n + i]);
        }
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            acc += std::norm(f[(j + 1) * n + i] - f[j * n + i]);
        }
    }
    return acc;
}

double momentum(const Layout& g, std::span<const cplx> f)
{
    const auto n = g.n;
    std::vector<cplx> d1(f.size()), d2(f.size());
    serial::gradient(g, f, d1, d2);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = j * n + i;
            const double x1 = g.coord(i);
            const double x2 = g.coord(j);
            const cplx c = std::conj(f[k]);
            acc += -x2 * (c * d1[k]).imag() + x1 * (c * d2[k]).imag();
        }
    }
    return acc * g.spacing * g.spacing;
}

double power_integral(const Layout& g, std::span<const cplx> f, double q)
{
    double acc = 0.0;
    for (const cplx& z : f) {
        const double a = std::abs(z);
        if (a >= 1e-30) {
            acc += std::pow(a, q);
        }
    }
    return acc * g.spacing * g.spacing;
}

double weighted_mass(const Layout& g, std::span<const double> v, std::span<const cplx> f)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        acc += v[k] * std::norm(f[k]);
    }
    return acc * g.spacing * g.spacing;
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y)
{
    for (std::size_t k = 0; k < x.size(); ++k) {
        y[k] += a * x[k];
    }
}

void xpby(std::span<const cplx> x, double b, std::span<cplx> y)
{
    for (std::size_t k = 0; k < x.size(); ++k) {
        y[k] = x[k] + b * y[k];
    }
}

} // namespace rgs::kernels::serial
