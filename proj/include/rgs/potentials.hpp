#pragma once

// Trapping potentials, the rotating-frame potential V_Ω, the critical speed Ω*,
// and the concentration functional H(y) = ∫ h(x+y) w²(x) dx.

#include "rgs/grid.hpp"
#include "rgs/scalar_ground.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rgs {

enum class PotentialKind
{
    harmonic,        ///< a |x|²
    anisotropic,     ///< a1 x1² + a2 x2²
    homogeneous_plus ///< a1 x1² + a2 x2² + c (|x1|^s + |x2|^s)
};

std::string to_string(PotentialKind kind);
PotentialKind parse_potential_kind(const std::string& name);

struct PotentialSpec
{
    PotentialKind kind{PotentialKind::harmonic};
    double a1{1.0};
    double a2{1.0};
    double c{0.0};
    double s{2.0};
    /// Evaluates ℓ² V(ℓ x): the potential seen in coordinates rescaled by ℓ.
    double length_scale{1.0};

    static PotentialSpec harmonic(double a);
    static PotentialSpec anisotropic(double a1, double a2);
    static PotentialSpec homogeneous_plus(double a1, double a2, double c, double s);

    /// Throws std::invalid_argument naming the violated invariant.
    void validate() const;
    double operator()(Point x) const;
    PotentialSpec rescaled(double ell) const;
};

struct EffectivePotential
{
    PotentialSpec base;
    double omega{0.0};

    /// V(x) - Ω²|x|²/4
    double operator()(Point x) const;
};

/// A function declared homogeneous of some degree: h(tx) = t^degree h(x).
struct HomogeneousFn
{
    std::function<double(Point)> fn;
    double degree{2.0};
    std::string name;

    double operator()(Point x) const { return fn(x); }
};

/// Leading homogeneous part of V_Ω at the origin.
HomogeneousFn homogeneous_core(const PotentialSpec& V, double omega);

/// Largest |h(tx) - t^s h(x)| / max(|h(tx)|, tiny) over t ∈ {0.5, 2, 3} and 16 directions.
double homogeneity_defect(const HomogeneousFn& h);

/// max over directions of |V_Ω(x) - h(x)| / |x|^s at the given radii.
std::vector<double> remainder_ratios(const PotentialSpec& V, double omega, const std::vector<double>& radii);

struct OmegaStar
{
    double value{0.0};
    /// True when obtained by directional sampling rather than a closed form.
    bool estimated{false};
};

OmegaStar omega_star(const PotentialSpec& V);

RealField sample_potential(const PotentialSpec& V, const GridSpec& grid);
RealField sample_potential(const EffectivePotential& V, const GridSpec& grid);

/// H(y) = ∫ h(x+y) ρ(x) dx by the grid rectangle rule, with density ρ = w² by default.
class ConcentrationFunctional
{
public:
    ConcentrationFunctional(HomogeneousFn h, const RadialProfile& profile);
    ConcentrationFunctional(HomogeneousFn h, RealField density);

    double operator()(Point y) const;
    const RealField& density() const { return density_; }
    const HomogeneousFn& core() const { return h_; }

private:
    HomogeneousFn h_;
    RealField density_;
};

/// Rectangle-rule grid used for H: half-width max(12, r_max), spacing about 0.1.
GridSpec concentration_grid(const RadialProfile& profile);

struct HMinimum
{
    Point y0;
    double value{0.0};
    double grad_norm{0.0};
};

/// Nelder–Mead from a 3×3 grid of starts in [-2,2]². Throws if h fails the
/// homogeneity check or two distinct minima tie.
HMinimum minimize_H(const ConcentrationFunctional& H);
HMinimum minimize_H(const HomogeneousFn& h, const RadialProfile& profile);

struct Nondegeneracy
{
    /// m[j][l] = ∫ ∂_j h(x+y0) ∂_l w²(x) dx
    double m[2][2]{};
    double det{0.0};
    bool degenerate{false};
};

Nondegeneracy nondegeneracy(const HomogeneousFn& h, const RadialProfile& profile, Point y0);

} // namespace rgs
