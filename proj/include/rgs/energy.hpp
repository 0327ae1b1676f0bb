#pragma once

// Rotating Gross–Pitaevskii energy on a grid, its multiplier and residual.
//
//   E(u) = ∫|∇u|² + V|u|² - (2 g/(p+1)) ∫|u|^{p+1} - Ω ∫ x⊥·Im(ū ∇u),   g = ρ^{p-1}
//
// The kinetic part is the grid Dirichlet form Σ_edges |u_a - u_b|², which equals
// -Re<u, Δ_h u>; the momentum part uses the same centered stencil as
// rotation_term. With these choices the discrete gradient of E is exactly
// 2(-Δ_h u + V u + iΩ x⊥·∇_h u - g |u|^{p-1} u).

#include "rgs/grid.hpp"
#include "rgs/potentials.hpp"

#include <iosfwd>

namespace rgs {

struct Physics
{
    double rho{1.0};
    double p{2.0};
    double omega{0.0};

    double coupling() const { return std::pow(rho, p - 1.0); }
};

struct EnergyBreakdown
{
    double kinetic{0.0};
    double potential{0.0};
    double interaction{0.0};
    double momentum{0.0};
    double total{0.0};
};

/// Throws std::runtime_error("non-finite energy") on NaN/Inf parts.
EnergyBreakdown gp_energy(const ComplexField& u, const RealField& V, const Physics& phys);
EnergyBreakdown gp_energy(const ComplexField& u, const PotentialSpec& V, const Physics& phys);

/// ∫|∇v|² - (2ρ^{p-1}/(p+1)) ∫|v|^{p+1}
double hat_energy(const RealField& v, double rho, double p);

/// E - (p-1)/(p+1) ρ^{p-1} ∫|u|^{p+1}
double lagrange_multiplier(const ComplexField& u, double energy_total, double rho, double p);

/// -Δ_h u + V u + iΩ x⊥·∇_h u - ρ^{p-1}|u|^{p-1}u (the Hamiltonian part of the EL operator).
ComplexField apply_hamiltonian(const ComplexField& u, const RealField& V, const Physics& phys);

/// ||H u - μ u||_2 / ||Δ_h u||_2
double el_residual(const ComplexField& u, double mu, const RealField& V, const Physics& phys);

struct DiamagneticReport
{
    /// max over nodes of | |G|² - Ω x⊥·Im(ū G) + Ω²|x|²|u|²/4 - |(G - iA)u|² |, G the centered gradient
    double identity_error{0.0};
    /// max over nodes of (|∇|u||² - |(∇ - iA)u|²)_+
    double max_violation{0.0};
    /// |(∇ - iA)u|² - |∇|u||² per node
    RealField gap;
};

/// A = Ω x⊥ / 2. ∇|u| is taken as Re(ū G)/|u|, the chain rule on the same stencil.
DiamagneticReport diamagnetic_check(const ComplexField& u, double omega);

void write_energy_csv_header(std::ostream& os);
void write_energy_csv_row(std::ostream& os, const Physics& phys, const EnergyBreakdown& e, double mu, double residual);

} // namespace rgs
