#pragma once

// Positive radial ground state of  -Δw + w - w^p = 0  in the plane.

#include "rgs/grid.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rgs {

/// Sampled radial profile w(r_k), r_k = k h, with its derivative and derived constants.
struct RadialProfile
{
    double p{0.0};
    double r_max{0.0};
    double h{0.0};
    std::vector<double> values;
    std::vector<double> derivs;
    double w0{0.0};
    /// ||w||_2^2 = 2π ∫ w^2 r dr
    double a_star{0.0};
    /// Radius past which values come from the matched Bessel tail instead of the shooting run.
    double r_matched{0.0};
    std::vector<std::string> warnings;

    /// Cubic Hermite interpolation in r; 0 beyond r_max.
    double operator()(double r) const;
    double derivative(double r) const;
    /// Radius where w = w0 / 2.
    double half_width() const;
};

struct ShootingOptions
{
    /// 0 selects the default (20 in the natural length scale of p).
    double r_max{0.0};
    /// 0 selects r_max / 10^4.
    double h{0.0};
    double bracket_lo{1e-3};
    double bracket_hi{1e3};
    /// Bisection stops once the bracket is below this fraction of w0.
    double rel_bracket_tol{1e-12};
};

/// Outcome of one shooting run from w(0) = w0.
enum class ShotKind
{
    overshoot,  ///< crosses zero: w0 too large
    undershoot, ///< turns upward while positive: w0 too small
    unresolved  ///< neither before the integration limit
};

ShotKind classify_shot(double p, double w0, double h, double r_limit);

/// Shoots on w(0) with RK4 and bisection. Throws std::runtime_error with
/// "no ground-state bracket" or "shooting failed".
RadialProfile solve_w(double p, double tol = 1e-4, const ShootingOptions& options = {});

struct IdentityResidual
{
    double r1{0.0};
    double r2{0.0};
};

/// Relative residuals of ∫|∇w|^2 = (p-1)/(p+1) ∫w^{p+1} = (p-1)/2 ∫w^2.
IdentityResidual identities_residual(const RadialProfile& profile);

/// Radial integrals 2π ∫ f r dr of the profile.
struct RadialIntegrals
{
    double kinetic{0.0};  ///< ∫|∇w|^2
    double mass{0.0};     ///< ∫w^2
    double power{0.0};    ///< ∫w^{p+1}
    double second_moment{0.0}; ///< ∫|x|^2 w^2
};
RadialIntegrals radial_integrals(const RadialProfile& profile);

struct GnConstant
{
    /// ((p+1)/2) (2/(p-1))^{(p-1)/2} / ||w||_2^{p-1}
    double value{0.0};
    /// |lhs - rhs| / lhs of the inequality evaluated at u = w.
    double equality_error{0.0};
};
GnConstant gn_constant(const RadialProfile& profile);

/// lhs / rhs of the Gagliardo–Nirenberg inequality for a real grid function;
/// the gradient term uses the grid Dirichlet form.
double gn_ratio(const RealField& u, double p, double constant);

struct SampledProfile
{
    RealField field;
    /// Set when the disc of radius r_max around the center leaves the grid.
    bool truncated{false};
};

/// Nodewise w(scale |x - center|), boundary ring zeroed.
SampledProfile sample_to_grid(const RadialProfile& profile, const GridSpec& grid, Point center = {}, double scale = 1.0);

void write_profile_csv(std::ostream& os, const RadialProfile& profile);

} // namespace rgs
