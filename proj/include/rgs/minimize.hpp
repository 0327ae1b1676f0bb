#pragma once

// Constrained minimization of the rotating GP energy by a normalized,
// semi-implicit gradient flow.

#include "rgs/energy.hpp"
#include "rgs/grid.hpp"
#include "rgs/potentials.hpp"
#include "rgs/scalar_ground.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rgs {

enum class InitKind
{
    gaussian,
    rescaled_w,
    vortex,
    random
};

std::string to_string(InitKind kind);
InitKind parse_init_kind(const std::string& name);

struct SolveConfig
{
    GridSpec grid{12.0, 256};
    double dt{0.2};
    std::size_t max_iter{20000};
    double tol_energy{1e-12};
    double tol_residual{1e-8};
    InitKind init{InitKind::gaussian};
    /// Width ε for the rescaled_w start, in grid coordinates.
    double init_eps{1.0};
    std::uint64_t seed{1};
    /// Constant phase e^{iθ} applied to the initial guess.
    double init_phase{0.0};
    double backtrack{0.5};
    double grow{1.2};
    std::size_t grow_after{20};
    std::size_t stagnation_window{50};
    /// Newton step on the two translation modes every this many accepted steps (0 disables).
    std::size_t relax_every{10};
    /// Run even when Ω > 0 reaches Ω*(V); otherwise the solver refuses with "energy unbounded (Ω ≥ Ω*?)".
    bool allow_supercritical{false};

    void validate() const;
};

struct HistoryEntry
{
    double energy{0.0};
    double residual{0.0};
    double dt{0.0};
    /// true for a translation-relax step, false for a flow step
    bool relax{false};
};

struct GroundState
{
    ComplexField u;
    EnergyBreakdown energy;
    double mu{0.0};
    double residual{0.0};
    std::size_t iterations{0};
    bool converged{false};
    std::vector<HistoryEntry> history;
    std::string message;

    /// Solve coordinates are x_solve = x / length_scale; energies scale by length_scale^{-2}.
    double length_scale{1.0};
    /// Parameters of the problem actually solved (rescaled when length_scale != 1).
    Physics solved;

    EnergyBreakdown physical_energy() const;
    double physical_mu() const;
};

/// Normalized start field. rescaled_w needs a profile.
ComplexField initial_guess(InitKind kind, const GridSpec& grid, const RadialProfile* profile, double eps,
                           std::uint64_t seed = 1);

struct FlowStepInfo
{
    std::size_t cg_iterations{0};
    double mu_hat{0.0};
};

/// One step: solve (1 - dt Δ_h) u* = u + dt (μ̂u - V u - iΩ x⊥·∇u + ρ^{p-1}|u|^{p-1}u) by CG, then normalize.
/// Throws std::runtime_error("inner solver stalled") after 500 CG iterations.
ComplexField flow_step(const ComplexField& u, const RealField& V, const Physics& phys, double dt,
                       FlowStepInfo* info = nullptr);

/// Largest explicit step the flow accepts for the current iterate.
double stable_dt(const ComplexField& u, const RealField& V, const Physics& phys, double mu_hat);

/// Runs the flow with backtracking. Throws std::runtime_error("energy unbounded (Ω ≥ Ω*?)") when Ω ≥ Ω*(V)
/// and, for supercritical runs that were allowed, when the energy drops below -1e12 or the mass escapes
/// to the edge of the box.
GroundState solve_ground_state(const SolveConfig& config, const PotentialSpec& V, const Physics& phys,
                               const RadialProfile* profile = nullptr, const ComplexField* start = nullptr);

/// The problem seen in coordinates x = ell y: V -> ell² V(ell y), Ω -> ell² Ω, ρ^{p-1} -> ρ^{p-1} ell^{3-p}.
struct ScaledProblem
{
    PotentialSpec V;
    Physics phys;
    double ell{1.0};
};
ScaledProblem rescale_problem(const PotentialSpec& V, const Physics& phys, double ell);

/// Solves in coordinates rescaled by ell; the result carries length_scale = ell.
GroundState solve_scaled(const SolveConfig& config, const PotentialSpec& V, const Physics& phys, double ell,
                         const RadialProfile* profile = nullptr);

/// (T_a u)(x) = e^{i(Ω/2)(a1 x2 - a2 x1)} u(x - a), by separable cubic interpolation.
/// Commutes with the magnetic kinetic term; used to relax the slow translation modes.
ComplexField magnetic_translate(const ComplexField& u, Point a, double omega);

struct PhaseAlignment
{
    double theta{0.0};
    ComplexField aligned;
    double distance{0.0};
    bool gauge_undetermined{false};
};

/// θ = arg ∫ ref conj(u), aligned = e^{iθ} u.
PhaseAlignment phase_align(const ComplexField& u, const ComplexField& ref);

struct ProbeRow
{
    double tau{0.0};
    Point x_tau;
    double v_omega{0.0};
    EnergyBreakdown energy;
};

struct ProbeTable
{
    std::vector<ProbeRow> rows;
    /// False when V_Ω stays nonnegative on the grid: the probe has nothing to show.
    bool conclusive{true};
};

/// Energies of the concentrating trial family w_τ centered where V_Ω(x_τ) <= -(p-1) τ².
ProbeTable nonexistence_probe(const PotentialSpec& V, const Physics& phys, const RadialProfile& profile,
                              const std::vector<double>& taus, const GridSpec& grid);

} // namespace rgs
