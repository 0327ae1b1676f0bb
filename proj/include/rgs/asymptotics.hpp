#pragma once

// Large-ρ diagnostics: blow-up scale, limiting energy, rescaled profile,
// multiplier, imaginary part and concentration point.

#include "rgs/minimize.hpp"

#include <iosfwd>
#include <vector>

namespace rgs {

/// ε_ρ = (ρ/√a*)^{-(p-1)/(3-p)}
double epsilon_rho(double rho, double a_star, double p);
/// Î(ρ) = -(3-p)/2 ε_ρ^{-2}
double hat_I_of_rho(double rho, double a_star, double p);

/// Grid maximizer of |u| refined by per-axis quadratic fits. Ties (to 1e-12
/// relative) go to the smallest |x|, then the smallest x1, then the smallest x2.
Point max_point(const ComplexField& u);

/// Bilinear interpolation; 0 outside the grid.
cplx interpolate(const ComplexField& u, Point x);

struct RescaledMinimizer
{
    ComplexField w_rho;
    double theta{0.0};
    bool gauge_undetermined{false};
    /// |∫ w Im(w_ρ)| / (||w||_2 ||w_ρ||_2)
    double orthogonality{0.0};
};

/// w_ρ(x) = ε u(εx + z) exp(-i((εΩ/2) x·z⊥ - θ)) on `target`, θ minimizing ||w_ρ - w/√a*||_2.
/// Throws std::runtime_error("rescale under-resolved") when the peak of |u| spans fewer than 12 nodes.
RescaledMinimizer rescale_minimizer(const ComplexField& u, double eps, Point z, double omega,
                                    const RadialProfile& profile, const GridSpec& target);

/// The ρ → ∞ limit problem on a given rescaled grid: min Ê at ρ̃ = √a* with V = 0, Ω = 0.
struct DiscreteLimit
{
    double hat_energy{0.0};
    double mu{0.0};
    ComplexField field;
    bool converged{false};
};
DiscreteLimit discrete_limit(const SolveConfig& config, const RadialProfile& profile, double p);

struct BlowupReport
{
    double rho{0.0};
    double eps{0.0};
    /// ε^{-2} times the minimum of Ê on the solve grid.
    double I_hat{0.0};
    double I{0.0};
    double gap{0.0};
    double mu_eps2{0.0};
    Point z;
    Point z_over_eps;
    double profile_sup_dist{0.0};
    double imag_h1{0.0};
    double imag_sup{0.0};

    /// Closed-form Î(ρ) for comparison with I_hat.
    double I_hat_formula{0.0};
    double orthogonality{0.0};
    bool gauge_undetermined{false};
    double residual{0.0};
    bool converged{false};
};

BlowupReport blowup_report(const GroundState& gs, const RadialProfile& profile, const Physics& phys,
                           const DiscreteLimit& limit);

/// Solves at each ρ in coordinates rescaled by ε_ρ and assembles reports in ρ order.
/// `workers` bounds the number of concurrent solves.
std::vector<BlowupReport> asymptotic_sweep(const SolveConfig& config, const PotentialSpec& V, double omega, double p,
                                           const std::vector<double>& rhos, const RadialProfile& profile,
                                           unsigned workers = 1);

void write_report_csv_header(std::ostream& os);
void write_report_csv_row(std::ostream& os, const BlowupReport& r);

struct ConcentrationTrack
{
    Point y0_est;
    Point y0_ref;
    double err{0.0};
};

/// y0_est = z/ε at the largest ρ; y0_ref minimizes H for the core of V_Ω.
ConcentrationTrack concentration_track(const std::vector<BlowupReport>& reports, const HomogeneousFn& h,
                                       const RadialProfile& profile);

struct UniquenessResult
{
    /// max over qualifying pairs of ||e^{iθ}u_a - u_b||_∞ / ||u_best||_∞
    double max_pair_dist{0.0};
    std::size_t qualifying{0};
    std::vector<double> energies;
    std::vector<bool> converged;
    /// False when some run stopped short of its tolerance or the tolerance is loose (> 1e-6).
    bool conclusive{true};
};

/// Multi-start solves (gaussian, rescaled_w, vortex, then random seeds) at ρ, kept when
/// converged and within 1e-6 relative energy of the best. Throws "insufficient converged runs".
UniquenessResult uniqueness_probe(const SolveConfig& config, const PotentialSpec& V, const Physics& phys,
                                  std::size_t n_starts, std::uint64_t seed, const RadialProfile& profile,
                                  unsigned workers = 1);

} // namespace rgs
