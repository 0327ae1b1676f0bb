#include "rgs/kernels.hpp"

#include "rgs/grid.hpp"

#include <numeric>
#include <vector>

namespace rgs::kernels {

Layout Layout::of(const GridSpec& grid)
{
    return {grid.n(), grid.spacing(), grid.half_width()};
}

namespace {

using index_t = std::ptrdiff_t;

// One partial per row, summed in row order.
template <class RowFn>
double reduce_rows(std::size_t rows, RowFn&& row)
{
    std::vector<double> partial(rows, 0.0);
    const auto m = static_cast<index_t>(rows);
#pragma omp parallel for schedule(static)
    for (index_t j = 0; j < m; ++j) {
        partial[j] = row(static_cast<std::size_t>(j));
    }
    return std::accumulate(partial.begin(), partial.end(), 0.0);
}

template <class RowFn>
cplx reduce_rows_complex(std::size_t rows, RowFn&& row)
{
    std::vector<cplx> partial(rows, cplx{});
    const auto m = static_cast<index_t>(rows);
#pragma omp parallel for schedule(static)
    for (index_t j = 0; j < m; ++j) {
        partial[j] = row(static_cast<std::size_t>(j));
    }
    return std::accumulate(partial.begin(), partial.end(), cplx{});
}

void zero_ring(const Layout& g, std::span<cplx> out)
{
    const auto n = g.n;
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = 0.0;
        out[(n - 1) * n + k] = 0.0;
        out[k * n] = 0.0;
        out[k * n + n - 1] = 0.0;
    }
}

} // namespace

void laplacian(const Layout& g, std::span<const cplx> in, std::span<cplx> out)
{
    const auto n = g.n;
    const double inv_h2 = 1.0 / (g.spacing * g.spacing);
    const auto last = static_cast<index_t>(n - 1);
#pragma omp parallel for schedule(static)
    for (index_t j = 1; j < last; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * n;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const std::size_t k = row + i;
            out[k] = (in[k + 1] + in[k - 1] + in[k + n] + in[k - n] - 4.0 * in[k]) * inv_h2;
        }
    }
    zero_ring(g, out);
}

void shifted_laplacian(const Layout& g, double dt, std::span<const cplx> in, std::span<cplx> out)
{
    const auto n = g.n;
    const double c = dt / (g.spacing * g.spacing);
    const auto last = static_cast<index_t>(n - 1);
#pragma omp parallel for schedule(static)
    for (index_t j = 1; j < last; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * n;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const std::size_t k = row + i;
            out[k] = (1.0 + 4.0 * c) * in[k] - c * (in[k + 1] + in[k - 1] + in[k + n] + in[k - n]);
        }
    }
    zero_ring(g, out);
}

void angular(const Layout& g, std::span<const cplx> in, std::span<cplx> out)
{
    const auto n = g.n;
    const double inv_2h = 0.5 / g.spacing;
    const auto last = static_cast<index_t>(n - 1);
#pragma omp parallel for schedule(static)
    for (index_t j = 1; j < last; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * n;
        const double x2 = g.coord(static_cast<std::size_t>(j));
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const std::size_t k = row + i;
            const double x1 = g.coord(i);
            const cplx d1 = (in[k + 1] - in[k - 1]) * inv_2h;
            const cplx d2 = (in[k + n] - in[k - n]) * inv_2h;
            out[k] = -x2 * d1 + x1 * d2;
        }
    }
    zero_ring(g, out);
}

void gradient(const Layout& g, std::span<const cplx> in, std::span<cplx> d1, std::span<cplx> d2)
{
    const auto n = g.n;
    const double inv_2h = 0.5 / g.spacing;
    const auto last = static_cast<index_t>(n - 1);
#pragma omp parallel for schedule(static)
    for (index_t j = 1; j < last; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * n;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const std::size_t k = row + i;
            d1[k] = (in[k + 1] - in[k - 1]) * inv_2h;
            d2[k] = (in[k + n] - in[k - n]) * inv_2h;
        }
    }
    zero_ring(g, d1);
    zero_ring(g, d2);
}

double integral(const Layout& g, std::span<const double> v)
{
    const auto n = g.n;
    const double s = reduce_rows(n, [&](std::size_t j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += v[j * n + i];
        }
        return acc;
    });
    return s * g.spacing * g.spacing;
}

double inner_re(const Layout& g, std::span<const cplx> a, std::span<const cplx> b)
{
    const auto n = g.n;
    const double s = reduce_rows(n, [&](std::size_t j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = j * n + i;
            acc += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
        }
        return acc;
    });
    return s * g.spacing * g.spacing;
}

cplx inner(const Layout& g, std::span<const cplx> a, std::span<const cplx> b)
{
    const auto n = g.n;
    const cplx s = reduce_rows_complex(n, [&](std::size_t j) {
        cplx acc{};
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = j * n + i;
            acc += std::conj(a[k]) * b[k];
        }
        return acc;
    });
    return s * (g.spacing * g.spacing);
}

double dirichlet_form(const Layout& g, std::span<const cplx> f)
{
    const auto n = g.n;
    return reduce_rows(n, [&](std::size_t j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = j * n + i;
            if (i + 1 < n) {
                acc += std::norm(f[k + 1] - f[k]);
            }
            if (j + 1 < n) {
                acc += std::norm(f[k + n] - f[k]);
            }
        }
        return acc;
    });
}

double momentum(const Layout& g, std::span<const cplx> f)
{
    const auto n = g.n;
    const double inv_2h = 0.5 / g.spacing;
    const double s = reduce_rows(n, [&](std::size_t j) {
        if (j == 0 || j + 1 == n) {
            return 0.0;
        }
        const double x2 = g.coord(j);
        double acc = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const std::size_t k = j * n + i;
            const double x1 = g.coord(i);
            const cplx d1 = (f[k + 1] - f[k - 1]) * inv_2h;
            const cplx d2 = (f[k + n] - f[k - n]) * inv_2h;
            const cplx ang = -x2 * d1 + x1 * d2;
            acc += (std::conj(f[k]) * ang).imag();
        }
        return acc;
    });
    return s * g.spacing * g.spacing;
}

double power_integral(const Layout& g, std::span<const cplx> f, double q)
{
    const auto n = g.n;
    const double s = reduce_rows(n, [&](std::size_t j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += abs_pow(f[j * n + i], q);
        }
        return acc;
    });
    return s * g.spacing * g.spacing;
}

double weighted_mass(const Layout& g, std::span<const double> v, std::span<const cplx> f)
{
    const auto n = g.n;
    const double s = reduce_rows(n, [&](std::size_t j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = j * n + i;
            acc += v[k] * std::norm(f[k]);
        }
        return acc;
    });
    return s * g.spacing * g.spacing;
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y)
{
    const auto m = static_cast<index_t>(x.size());
#pragma omp parallel for schedule(static)
    for (index_t k = 0; k < m; ++k) {
        y[k] += a * x[k];
    }
}

void xpby(std::span<const cplx> x, double b, std::span<cplx> y)
{
    const auto m = static_cast<index_t>(x.size());
#pragma omp parallel for schedule(static)
    for (index_t k = 0; k < m; ++k) {
        y[k] = x[k] + b * y[k];
    }
}

} // namespace rgs::kernels
