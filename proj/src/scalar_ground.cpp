#include "rgs/scalar_ground.hpp"

#include "rgs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rgs {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double natural_scale(double p)
{
    // Profiles widen like (p-1)^{-1/2} as p -> 1.
    return std::max(1.0, 0.5 / std::sqrt(p - 1.0));
}

double nonlinearity(double w, double p)
{
    return w - std::pow(std::max(w, 0.0), p);
}

struct Trajectory
{
    ShotKind kind{ShotKind::unresolved};
    std::vector<double> w;
    std::vector<double> wp;
};

// Integrates w'' = -w'/r + w - w^p from r = 0 with step h, stopping at the
// first zero crossing or upturn. Index k holds r = k h.
Trajectory shoot(double p, double w0, double h, double r_limit, bool keep)
{
    Trajectory t;
    auto rhs = [p](double rr, double y0, double y1) { return -y1 / rr + nonlinearity(y0, p); };
    auto rk4 = [&](double& r, double& w, double& wp, double step) {
        const double k1w = wp;
        const double k1v = rhs(r, w, wp);
        const double k2w = wp + 0.5 * step * k1v;
        const double k2v = rhs(r + 0.5 * step, w + 0.5 * step * k1w, wp + 0.5 * step * k1v);
        const double k3w = wp + 0.5 * step * k2v;
        const double k3v = rhs(r + 0.5 * step, w + 0.5 * step * k2w, wp + 0.5 * step * k2v);
        const double k4w = wp + step * k3v;
        const double k4v = rhs(r + step, w + step * k3w, wp + step * k3v);
        w += step / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        wp += step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        r += step;
    };

    // Series start at r0 small enough that the quadratic term is a 1e-4 correction.
    const double a = nonlinearity(w0, p) / 4.0;
    const double b = (1.0 - p * std::pow(w0, p - 1.0)) * a / 16.0;
    const double r_series = std::sqrt(1e-4 * w0 / std::max(std::abs(a), 1e-300));
    const auto sub = static_cast<std::size_t>(std::clamp(std::ceil(h / r_series), 1.0, 1e5));
    const double hs = h / static_cast<double>(sub);
    double r = hs;
    double w = w0 + a * hs * hs + b * hs * hs * hs * hs;
    double wp = 2.0 * a * hs + 4.0 * b * hs * hs * hs;
    for (std::size_t s = 1; s < sub; ++s) {
        rk4(r, w, wp, hs);
    }
    r = h;
    if (keep) {
        t.w = {w0, w};
        t.wp = {0.0, wp};
    }
    const auto steps = static_cast<std::size_t>(std::ceil(r_limit / h));
    for (std::size_t k = 1; k < steps; ++k) {
        if (!(w > 0.0) || !std::isfinite(wp)) {
            t.kind = ShotKind::overshoot;
            return t;
        }
        if (wp > 0.0) {
            t.kind = ShotKind::undershoot;
            return t;
        }
        rk4(r, w, wp, h);
        if (keep) {
            t.w.push_back(w);
            t.wp.push_back(wp);
        }
    }
    return t;
}

// log K0(z) and K1(z)/K0(z); large-z asymptotic series avoids underflow.
double log_k0(double z)
{
    if (z < 500.0) {
        return std::log(std::cyl_bessel_k(0.0, z));
    }
    const double s = 1.0 - 1.0 / (8.0 * z) + 9.0 / (128.0 * z * z);
    return 0.5 * std::log(std::numbers::pi / (2.0 * z)) - z + std::log(s);
}

double k1_over_k0(double z)
{
    if (z < 500.0) {
        return std::cyl_bessel_k(1.0, z) / std::cyl_bessel_k(0.0, z);
    }
    const double s0 = 1.0 - 1.0 / (8.0 * z) + 9.0 / (128.0 * z * z);
    const double s1 = 1.0 + 3.0 / (8.0 * z) - 15.0 / (128.0 * z * z);
    return s1 / s0;
}

// Decay rate κ of the tail c K0(κ r) whose log-derivative at r_c equals `slope`.
double match_decay_rate(double r_c, double slope)
{
    double lo = 1e-8;
    double hi = 50.0;
    auto g = [&](double kappa) { return -kappa * k1_over_k0(kappa * r_c) - slope; };
    if (g(lo) < 0.0 || g(hi) > 0.0) {
        throw std::runtime_error("shooting failed: cannot match the exponential tail");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double trapezoid_radial(const RadialProfile& prof, auto&& integrand)
{
    // 2π ∫ f(r) r dr; the r = 0 endpoint carries zero weight.
    double acc = 0.0;
    const std::size_t m = prof.values.size();
    for (std::size_t k = 1; k < m; ++k) {
        const double r = static_cast<double>(k) * prof.h;
        const double weight = (k + 1 == m) ? 0.5 : 1.0;
        acc += weight * integrand(k) * r;
    }
    return two_pi * acc * prof.h;
}

} // namespace

ShotKind classify_shot(double p, double w0, double h, double r_limit)
{
    return shoot(p, w0, h, r_limit, false).kind;
}

double RadialProfile::operator()(double r) const
{
    if (r < 0.0) {
        r = -r;
    }
    if (values.empty() || r >= r_max) {
        return 0.0;
    }
    const double s = r / h;
    const auto k = std::min(static_cast<std::size_t>(s), values.size() - 2);
    const double t = s - static_cast<double>(k);
    if (derivs.size() != values.size()) {
        return (1.0 - t) * values[k] + t * values[k + 1];
    }
    // Cubic Hermite on (w, w').
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * values[k] + (t3 - 2.0 * t2 + t) * h * derivs[k]
           + (-2.0 * t3 + 3.0 * t2) * values[k + 1] + (t3 - t2) * h * derivs[k + 1];
}

double RadialProfile::derivative(double r) const
{
    if (r < 0.0) {
        return -derivative(-r);
    }
    if (derivs.empty() || r >= r_max) {
        return 0.0;
    }
    const double s = r / h;
    const auto k = std::min(static_cast<std::size_t>(s), derivs.size() - 2);
    const double t = s - static_cast<double>(k);
    return (1.0 - t) * derivs[k] + t * derivs[k + 1];
}

double RadialProfile::half_width() const
{
    const double target = 0.5 * w0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (values[k] <= target) {
            const double t = (values[k - 1] - target) / (values[k - 1] - values[k]);
            return (static_cast<double>(k - 1) + t) * h;
        }
    }
    return r_max;
}

RadialProfile solve_w(double p, double tol, const ShootingOptions& options)
{
    if (!(p > 1.0 && p <= 3.0)) {
        throw std::invalid_argument("p out of range (1,3]");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("tolerance must be positive");
    }
    const double scale = natural_scale(p);
    double r_max = options.r_max > 0.0 ? options.r_max : 20.0 * scale;
    const double h = options.h > 0.0 ? options.h : r_max * 1e-4;
    if (h > 1e-3 * r_max) {
        throw std::invalid_argument("radial step must satisfy h <= 1e-3 r_max");
    }
    const double r_limit = 2.0 * r_max;

    double lo = options.bracket_lo;
    double hi = options.bracket_hi;
    if (classify_shot(p, lo, h, r_limit) != ShotKind::undershoot
        || classify_shot(p, hi, h, r_limit) != ShotKind::overshoot) {
        throw std::runtime_error("no ground-state bracket");
    }
    while (hi - lo > options.rel_bracket_tol * 0.5 * (lo + hi)) {
        const double mid = 0.5 * (lo + hi);
        const ShotKind kind = classify_shot(p, mid, h, r_limit);
        if (kind == ShotKind::overshoot) {
            hi = mid;
        } else if (kind == ShotKind::undershoot) {
            lo = mid;
        } else {
            lo = hi = mid;
            break;
        }
    }

    const Trajectory under = shoot(p, lo, h, r_limit, true);
    const Trajectory over = shoot(p, hi, h, r_limit, true);

    // Both runs bracket the true profile; keep their mean while they agree to 1e-3.
    std::size_t cut = 1;
    const std::size_t common = std::min(under.w.size(), over.w.size());
    while (cut + 1 < common) {
        const double a = under.w[cut + 1];
        const double b = over.w[cut + 1];
        if (a <= 0.0 || b <= 0.0 || under.wp[cut + 1] >= 0.0 || over.wp[cut + 1] >= 0.0
            || std::abs(a - b) > 1e-3 * 0.5 * (a + b)) {
            break;
        }
        ++cut;
    }
    if (cut < 10) {
        throw std::runtime_error("shooting failed: trajectories separate immediately");
    }

    RadialProfile prof;
    prof.p = p;
    prof.h = h;
    prof.w0 = 0.5 * (lo + hi);
    const double r_c = static_cast<double>(cut) * h;
    const double w_c = 0.5 * (under.w[cut] + over.w[cut]);
    const double wp_c = 0.5 * (under.wp[cut] + over.wp[cut]);
    const double kappa = match_decay_rate(r_c, wp_c / w_c);
    prof.r_matched = r_c;

    auto tail = [&](double r) {
        const double w = w_c * std::exp(log_k0(kappa * r) - log_k0(kappa * r_c));
        return std::pair{w, -kappa * k1_over_k0(kappa * r) * w};
    };
    // Extend the range until the profile has decayed below 1e-8 w0.
    while (r_max > r_c && tail(r_max).first >= 1e-8 * prof.w0) {
        r_max *= 1.5;
    }
    prof.r_max = r_max;

    const auto m = static_cast<std::size_t>(std::llround(r_max / h)) + 1;
    prof.values.resize(m);
    prof.derivs.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (k <= cut) {
            prof.values[k] = 0.5 * (under.w[k] + over.w[k]);
            prof.derivs[k] = 0.5 * (under.wp[k] + over.wp[k]);
        } else {
            const auto [w, wp] = tail(static_cast<double>(k) * h);
            prof.values[k] = w;
            prof.derivs[k] = wp;
        }
    }
    for (std::size_t k = 1; k < m; ++k) {
        if (!(prof.values[k] > 0.0) || !(prof.values[k] < prof.values[k - 1])) {
            throw std::runtime_error("shooting failed: profile not positive and decreasing");
        }
    }
    prof.a_star = trapezoid_radial(prof, [&](std::size_t k) { return prof.values[k] * prof.values[k]; });
    if (p - 1.0 < 0.01) {
        std::ostringstream msg;
        msg << "p = " << p << " is close to 1: the profile is wide (r_max = " << r_max
            << ") and the shooting problem is stiff";
        prof.warnings.push_back(msg.str());
    }

    const IdentityResidual res = identities_residual(prof);
    if (std::max(res.r1, res.r2) > tol) {
        std::ostringstream msg;
        msg << "shooting failed: identity residuals r1 = " << res.r1 << ", r2 = " << res.r2 << " exceed " << tol;
        throw std::runtime_error(msg.str());
    }
    return prof;
}

RadialIntegrals radial_integrals(const RadialProfile& prof)
{
    RadialIntegrals out;
    out.kinetic = trapezoid_radial(prof, [&](std::size_t k) { return prof.derivs[k] * prof.derivs[k]; });
    out.mass = trapezoid_radial(prof, [&](std::size_t k) { return prof.values[k] * prof.values[k]; });
    out.power = trapezoid_radial(prof, [&](std::size_t k) { return std::pow(prof.values[k], prof.p + 1.0); });
    out.second_moment = trapezoid_radial(prof, [&](std::size_t k) {
        const double r = static_cast<double>(k) * prof.h;
        return r * r * prof.values[k] * prof.values[k];
    });
    return out;
}

IdentityResidual identities_residual(const RadialProfile& prof)
{
    const RadialIntegrals I = radial_integrals(prof);
    const double p = prof.p;
    return {std::abs(I.kinetic - (p - 1.0) / (p + 1.0) * I.power) / I.kinetic,
            std::abs(I.kinetic - (p - 1.0) / 2.0 * I.mass) / I.kinetic};
}

GnConstant gn_constant(const RadialProfile& prof)
{
    const double p = prof.p;
    GnConstant out;
    out.value = 0.5 * (p + 1.0) * std::pow(2.0 / (p - 1.0), 0.5 * (p - 1.0)) / std::pow(prof.a_star, 0.5 * (p - 1.0));
    const RadialIntegrals I = radial_integrals(prof);
    const double lhs = I.power;
    const double rhs = out.value * std::pow(I.kinetic, 0.5 * (p - 1.0)) * I.mass;
    out.equality_error = std::abs(lhs - rhs) / lhs;
    return out;
}

double gn_ratio(const RealField& u, double p, double constant)
{
    const ComplexField z = to_complex(u);
    const auto layout = kernels::Layout::of(u.grid());
    const double lhs = kernels::power_integral(layout, z.values(), p + 1.0);
    const double kinetic = kernels::dirichlet_form(layout, z.values());
    const double mass = kernels::inner_re(layout, z.values(), z.values());
    return lhs / (constant * std::pow(kinetic, 0.5 * (p - 1.0)) * mass);
}

SampledProfile sample_to_grid(const RadialProfile& prof, const GridSpec& grid, Point center, double scale)
{
    if (!(scale > 0.0)) {
        throw std::invalid_argument("sampling scale must be positive");
    }
    SampledProfile out{RealField::sample(grid, [&](Point x) { return prof(scale * (x - center).norm()); }), false};
    // Support: where w has dropped below 1e-6 w0.
    double support = prof.r_max;
    for (std::size_t k = 0; k < prof.values.size(); ++k) {
        if (prof.values[k] < 1e-6 * prof.w0) {
            support = static_cast<double>(k) * prof.h;
            break;
        }
    }
    const double reach = support / scale;
    const double L = grid.half_width();
    out.truncated = std::abs(center.x1) + reach > L || std::abs(center.x2) + reach > L;
    return out;
}

void write_profile_csv(std::ostream& os, const RadialProfile& prof)
{
    os << "r,w\n" << std::setprecision(17);
    for (std::size_t k = 0; k < prof.values.size(); ++k) {
        os << static_cast<double>(k) * prof.h << ',' << prof.values[k] << '\n';
    }
}

} // namespace rgs
