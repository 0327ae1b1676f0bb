#include "rgs/potentials.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rgs {

namespace {

constexpr int n_directions = 16;

Point direction(int k, int count)
{
    const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    return {std::cos(th), std::sin(th)};
}

double raw_value(const PotentialSpec& V, Point x)
{
    switch (V.kind) {
    case PotentialKind::harmonic:
        return V.a1 * (x.x1 * x.x1 + x.x2 * x.x2);
    case PotentialKind::anisotropic:
        return V.a1 * x.x1 * x.x1 + V.a2 * x.x2 * x.x2;
    case PotentialKind::homogeneous_plus:
        return V.a1 * x.x1 * x.x1 + V.a2 * x.x2 * x.x2
             + V.c * (std::pow(std::abs(x.x1), V.s) + std::pow(std::abs(x.x2), V.s));
    }
    return 0.0;
}

// Quadratic coefficients of V along x1 and x2 (before length rescaling).
std::array<double, 2> quadratic_part(const PotentialSpec& V)
{
    switch (V.kind) {
    case PotentialKind::harmonic:
        return {V.a1, V.a1};
    case PotentialKind::anisotropic:
        return {V.a1, V.a2};
    case PotentialKind::homogeneous_plus:
        if (V.s == 2.0) {
            return {V.a1 + V.c, V.a2 + V.c};
        }
        return {V.a1, V.a2};
    }
    return {0.0, 0.0};
}

// Standard Nelder–Mead in the plane.
struct NmResult
{
    Point x;
    double f;
};

template <class F>
NmResult nelder_mead(F&& f, Point start, double size, int max_iter = 4000)
{
    std::array<Point, 3> p{start, start + Point{size, 0.0}, start + Point{0.0, size}};
    std::array<double, 3> v{f(p[0]), f(p[1]), f(p[2])};
    for (int it = 0; it < max_iter; ++it) {
        std::array<int, 3> o{0, 1, 2};
        std::ranges::sort(o, [&](int a, int b) { return v[a] < v[b]; });
        const Point best = p[o[0]];
        const Point worst = p[o[2]];
        const double spread = std::abs(v[o[2]] - v[o[0]]);
        const double diam = std::max((p[o[1]] - best).norm(), (worst - best).norm());
        if (diam < 1e-11 && spread <= 1e-15 * (1.0 + std::abs(v[o[0]]))) {
            break;
        }
        const Point centroid = 0.5 * (best + p[o[1]]);
        const Point refl = centroid + (centroid - worst);
        const double fr = f(refl);
        if (fr < v[o[0]]) {
            const Point exp = centroid + 2.0 * (centroid - worst);
            const double fe = f(exp);
            if (fe < fr) {
                p[o[2]] = exp;
                v[o[2]] = fe;
            } else {
                p[o[2]] = refl;
                v[o[2]] = fr;
            }
            continue;
        }
        if (fr < v[o[1]]) {
            p[o[2]] = refl;
            v[o[2]] = fr;
            continue;
        }
        const Point con = fr < v[o[2]] ? centroid + 0.5 * (refl - centroid) : centroid + 0.5 * (worst - centroid);
        const double fc = f(con);
        if (fc < std::min(fr, v[o[2]])) {
            p[o[2]] = con;
            v[o[2]] = fc;
            continue;
        }
        for (int k : {o[1], o[2]}) {
            p[k] = best + 0.5 * (p[k] - best);
            v[k] = f(p[k]);
        }
    }
    const auto k = static_cast<std::size_t>(std::ranges::min_element(v) - v.begin());
    return {p[k], v[k]};
}

template <class F>
double fd_grad_norm(F&& f, Point y, double step)
{
    const double g1 = (f(y + Point{step, 0.0}) - f(y - Point{step, 0.0})) / (2.0 * step);
    const double g2 = (f(y + Point{0.0, step}) - f(y - Point{0.0, step})) / (2.0 * step);
    return std::hypot(g1, g2);
}

// Newton steps with a finite-difference gradient and Hessian; kept only while the gradient shrinks.
template <class F>
Point newton_polish(F&& f, Point y, double step, int steps = 4)
{
    for (int it = 0; it < steps; ++it) {
        const double f0 = f(y);
        const double fp1 = f(y + Point{step, 0.0});
        const double fm1 = f(y - Point{step, 0.0});
        const double fp2 = f(y + Point{0.0, step});
        const double fm2 = f(y - Point{0.0, step});
        const double g1 = (fp1 - fm1) / (2.0 * step);
        const double g2 = (fp2 - fm2) / (2.0 * step);
        const double h11 = (fp1 - 2.0 * f0 + fm1) / (step * step);
        const double h22 = (fp2 - 2.0 * f0 + fm2) / (step * step);
        const double h12 = (f(y + Point{step, step}) - f(y + Point{step, -step}) - f(y + Point{-step, step})
                            + f(y - Point{step, step}))
                           / (4.0 * step * step);
        const double det = h11 * h22 - h12 * h12;
        if (!(det > 0.0 && h11 > 0.0)) {
            break;
        }
        const Point next{y.x1 - (h22 * g1 - h12 * g2) / det, y.x2 - (h11 * g2 - h12 * g1) / det};
        if (fd_grad_norm(f, next, 1e-5) >= fd_grad_norm(f, y, 1e-5)) {
            break;
        }
        y = next;
    }
    return y;
}

} // namespace

std::string to_string(PotentialKind kind)
{
    switch (kind) {
    case PotentialKind::harmonic:
        return "harmonic";
    case PotentialKind::anisotropic:
        return "anisotropic";
    case PotentialKind::homogeneous_plus:
        return "homogeneous_plus";
    }
    return "unknown";
}

PotentialKind parse_potential_kind(const std::string& name)
{
    if (name == "harmonic") {
        return PotentialKind::harmonic;
    }
    if (name == "anisotropic") {
        return PotentialKind::anisotropic;
    }
    if (name == "homogeneous_plus") {
        return PotentialKind::homogeneous_plus;
    }
    throw std::invalid_argument("unknown potential kind '" + name + "'");
}

PotentialSpec PotentialSpec::harmonic(double a)
{
    PotentialSpec v;
    v.kind = PotentialKind::harmonic;
    v.a1 = v.a2 = a;
    v.validate();
    return v;
}

PotentialSpec PotentialSpec::anisotropic(double a1, double a2)
{
    PotentialSpec v;
    v.kind = PotentialKind::anisotropic;
    v.a1 = a1;
    v.a2 = a2;
    v.validate();
    return v;
}

PotentialSpec PotentialSpec::homogeneous_plus(double a1, double a2, double c, double s)
{
    PotentialSpec v;
    v.kind = PotentialKind::homogeneous_plus;
    v.a1 = a1;
    v.a2 = a2;
    v.c = c;
    v.s = s;
    v.validate();
    return v;
}

void PotentialSpec::validate() const
{
    if (!(a1 >= 0.0) || !(a2 >= 0.0) || !(c >= 0.0)) {
        throw std::invalid_argument("potential invariant violated: V >= 0 needs nonnegative coefficients");
    }
    if (kind == PotentialKind::homogeneous_plus && !(s > 1.0 && s <= 2.0)) {
        throw std::invalid_argument("potential invariant violated: degree s must lie in (1,2]");
    }
    if (!(length_scale > 0.0)) {
        throw std::invalid_argument("potential invariant violated: length scale must be positive");
    }
    const HomogeneousFn h = homogeneous_core(*this, 0.0);
    if (homogeneity_defect(h) > 1e-10) {
        throw std::invalid_argument("potential invariant violated: core is not homogeneous of degree s");
    }
    for (double R : {0.5, 1.0, 4.0, 16.0}) {
        for (int k = 0; k < n_directions; ++k) {
            if (!((*this)(R * direction(k, n_directions)) >= 0.0)) {
                throw std::invalid_argument("potential invariant violated: V(x) < 0 at a sampled point");
            }
        }
    }
}

double PotentialSpec::operator()(Point x) const
{
    const double ell = length_scale;
    return ell * ell * raw_value(*this, ell * x);
}

PotentialSpec PotentialSpec::rescaled(double ell) const
{
    PotentialSpec v = *this;
    v.length_scale *= ell;
    return v;
}

double EffectivePotential::operator()(Point x) const
{
    return base(x) - 0.25 * omega * omega * dot(x, x);
}

HomogeneousFn homogeneous_core(const PotentialSpec& V, double omega)
{
    const double ell = V.length_scale;
    const double ell2 = ell * ell;
    const double shift = 0.25 * omega * omega;
    if (V.kind == PotentialKind::homogeneous_plus && V.s < 2.0 && V.c > 0.0) {
        // c(|x1|^s + |x2|^s) dominates the quadratic terms near the origin.
        const double c = V.c * ell2 * std::pow(ell, V.s);
        const double s = V.s;
        return {[c, s](Point x) { return c * (std::pow(std::abs(x.x1), s) + std::pow(std::abs(x.x2), s)); }, s,
                "c(|x1|^s+|x2|^s)"};
    }
    const auto q = quadratic_part(V);
    const double q1 = q[0] * ell2 * ell2 - shift;
    const double q2 = q[1] * ell2 * ell2 - shift;
    std::ostringstream name;
    name << q1 << " x1^2 + " << q2 << " x2^2";
    return {[q1, q2](Point x) { return q1 * x.x1 * x.x1 + q2 * x.x2 * x.x2; }, 2.0, name.str()};
}

double homogeneity_defect(const HomogeneousFn& h)
{
    double worst = 0.0;
    for (double t : {0.5, 2.0, 3.0}) {
        for (int k = 0; k < n_directions; ++k) {
            for (double r : {0.3, 1.0, 1.7}) {
                const Point x = r * direction(k, n_directions);
                const double lhs = h(t * x);
                const double rhs = std::pow(t, h.degree) * h(x);
                const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
                if (lhs == rhs) {
                    continue;
                }
                worst = std::max(worst, std::abs(lhs - rhs) / scale);
            }
        }
    }
    return worst;
}

std::vector<double> remainder_ratios(const PotentialSpec& V, double omega, const std::vector<double>& radii)
{
    const EffectivePotential vo{V, omega};
    const HomogeneousFn h = homogeneous_core(V, omega);
    std::vector<double> out;
    for (double r : radii) {
        double worst = 0.0;
        for (int k = 0; k < n_directions; ++k) {
            const Point x = r * direction(k, n_directions);
            worst = std::max(worst, std::abs(vo(x) - h(x)) / std::pow(r, h.degree));
        }
        out.push_back(worst);
    }
    return out;
}

OmegaStar omega_star(const PotentialSpec& V)
{
    const double ell2 = V.length_scale * V.length_scale;
    switch (V.kind) {
    case PotentialKind::harmonic:
        return {2.0 * std::sqrt(V.a1 * ell2 * ell2), false};
    case PotentialKind::anisotropic:
        return {2.0 * std::sqrt(std::min(V.a1, V.a2) * ell2 * ell2), false};
    case PotentialKind::homogeneous_plus:
        break;
    }
    // Quadratic growth coefficient V(Rθ)/R² per direction; the two radii remove a
    // lower-degree term of degree s by extrapolation.
    constexpr int count = 360;
    constexpr double R1 = 64.0;
    constexpr double R2 = 128.0;
    const double q = std::pow(2.0, V.s - 2.0);
    double lowest = INFINITY;
    double highest = 0.0;
    for (int k = 0; k < count; ++k) {
        const Point d = direction(k, count);
        const double r1 = V(R1 * d) / (R1 * R1);
        const double r2 = V(R2 * d) / (R2 * R2);
        const double lead = q < 1.0 ? (r2 - q * r1) / (1.0 - q) : r1;
        lowest = std::min(lowest, lead);
        highest = std::max(highest, r1);
    }
    if (!(lowest > 1e-12 * std::max(1.0, highest))) {
        throw std::invalid_argument("Ω* = 0 or undefined: growth condition violated (V grows sub-quadratically)");
    }
    return {2.0 * std::sqrt(lowest), true};
}

RealField sample_potential(const PotentialSpec& V, const GridSpec& grid)
{
    return RealField::sample(grid, [&](Point x) { return V(x); }, false);
}

RealField sample_potential(const EffectivePotential& V, const GridSpec& grid)
{
    return RealField::sample(grid, [&](Point x) { return V(x); }, false);
}

GridSpec concentration_grid(const RadialProfile& profile)
{
    const double L = std::max(12.0, profile.r_max);
    const auto n = static_cast<std::size_t>(std::ceil(2.0 * L / 0.1)) + 1;
    return GridSpec(L, n);
}

ConcentrationFunctional::ConcentrationFunctional(HomogeneousFn h, const RadialProfile& profile)
    : h_(std::move(h))
    , density_(RealField::sample(concentration_grid(profile), [&](Point x) {
        const double w = profile(x.norm());
        return w * w;
    }))
{
}

ConcentrationFunctional::ConcentrationFunctional(HomogeneousFn h, RealField density)
    : h_(std::move(h))
    , density_(std::move(density))
{
}

double ConcentrationFunctional::operator()(Point y) const
{
    const GridSpec& g = density_.grid();
    const auto n = g.n();
    const auto rows = static_cast<std::ptrdiff_t>(n);
    std::vector<double> partial(n, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < rows; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = density_(i, jj);
            if (d != 0.0) {
                acc += h_(g.node(i, jj) + y) * d;
            }
        }
        partial[jj] = acc;
    }
    double sum = 0.0;
    for (double v : partial) {
        sum += v;
    }
    return sum * g.cell_area();
}

HMinimum minimize_H(const ConcentrationFunctional& H)
{
    const double defect = homogeneity_defect(H.core());
    if (defect > 1e-10) {
        std::ostringstream msg;
        msg << "h is not homogeneous of degree " << H.core().degree << " (defect " << defect << ")";
        throw std::invalid_argument(msg.str());
    }
    std::vector<NmResult> runs;
    for (double s1 : {-2.0, 0.0, 2.0}) {
        for (double s2 : {-2.0, 0.0, 2.0}) {
            NmResult r = nelder_mead(H, {s1, s2}, 0.5);
            // Restart once from the result to shake off a collapsed simplex.
            r = nelder_mead(H, r.x, 1e-2);
            runs.push_back(r);
        }
    }
    const auto best = *std::ranges::min_element(runs, {}, &NmResult::f);
    for (const NmResult& r : runs) {
        if ((r.x - best.x).norm() > 1e-3 && std::abs(r.f - best.f) <= 1e-8 * std::max(1.0, std::abs(best.f))) {
            throw std::runtime_error("minimum not unique at tolerance");
        }
    }
    const Point y0 = newton_polish(H, best.x, 1e-3);
    HMinimum out{y0, H(y0), fd_grad_norm(H, y0, 1e-5)};
    return out;
}

HMinimum minimize_H(const HomogeneousFn& h, const RadialProfile& profile)
{
    return minimize_H(ConcentrationFunctional(h, profile));
}

Nondegeneracy nondegeneracy(const HomogeneousFn& h, const RadialProfile& profile, Point y0)
{
    const GridSpec g = concentration_grid(profile);
    const auto n = g.n();
    Nondegeneracy out;
    double m[2][2]{};
    for (std::size_t j = 1; j + 1 < n; ++j) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const Point x = g.node(i, j);
            const double r = x.norm();
            if (r == 0.0) {
                continue; // ∂w² vanishes at the origin
            }
            // ∂_l w² = 2 w w'(r) x_l / r
            const double radial = 2.0 * profile(r) * profile.derivative(r) / r;
            if (radial == 0.0) {
                continue;
            }
            const double dw[2] = {radial * x.x1, radial * x.x2};
            const Point z = x + y0;
            const double step = 1e-4 * (1.0 + z.norm());
            const double dh[2] = {(h(z + Point{step, 0.0}) - h(z - Point{step, 0.0})) / (2.0 * step),
                                  (h(z + Point{0.0, step}) - h(z - Point{0.0, step})) / (2.0 * step)};
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    m[a][b] += dh[a] * dw[b];
                }
            }
        }
    }
    double frob2 = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            out.m[a][b] = m[a][b] * g.cell_area();
            frob2 += out.m[a][b] * out.m[a][b];
        }
    }
    out.det = out.m[0][0] * out.m[1][1] - out.m[0][1] * out.m[1][0];
    out.degenerate = std::abs(out.det) <= 1e-8 * frob2;
    return out;
}

} // namespace rgs
