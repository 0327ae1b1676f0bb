#include "rgs/energy.hpp"

#include "rgs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace rgs {

EnergyBreakdown gp_energy(const ComplexField& u, const RealField& V, const Physics& phys)
{
    if (!(phys.p > 1.0 && phys.p <= 3.0) || !(phys.rho > 0.0) || !(phys.omega >= 0.0)) {
        throw std::invalid_argument("gp_energy needs 1 < p <= 3, rho > 0, Omega >= 0");
    }
    const auto g = kernels::Layout::of(u.grid());
    EnergyBreakdown e;
    e.kinetic = kernels::dirichlet_form(g, u.values());
    e.potential = kernels::weighted_mass(g, V.values(), u.values());
    e.interaction = 2.0 * phys.coupling() / (phys.p + 1.0) * kernels::power_integral(g, u.values(), phys.p + 1.0);
    e.momentum = phys.omega == 0.0 ? 0.0 : phys.omega * kernels::momentum(g, u.values());
    e.total = e.kinetic + e.potential - e.interaction - e.momentum;
    if (!std::isfinite(e.total) || !std::isfinite(e.kinetic) || !std::isfinite(e.potential)
        || !std::isfinite(e.interaction) || !std::isfinite(e.momentum)) {
        throw std::runtime_error("non-finite energy");
    }
    return e;
}

EnergyBreakdown gp_energy(const ComplexField& u, const PotentialSpec& V, const Physics& phys)
{
    return gp_energy(u, sample_potential(V, u.grid()), phys);
}

double hat_energy(const RealField& v, double rho, double p)
{
    const ComplexField z = to_complex(v);
    const auto g = kernels::Layout::of(v.grid());
    const double coupling = std::pow(rho, p - 1.0);
    return kernels::dirichlet_form(g, z.values())
         - 2.0 * coupling / (p + 1.0) * kernels::power_integral(g, z.values(), p + 1.0);
}

double lagrange_multiplier(const ComplexField& u, double energy_total, double rho, double p)
{
    const auto g = kernels::Layout::of(u.grid());
    return energy_total - (p - 1.0) / (p + 1.0) * std::pow(rho, p - 1.0) * kernels::power_integral(g, u.values(), p + 1.0);
}

ComplexField apply_hamiltonian(const ComplexField& u, const RealField& V, const Physics& phys)
{
    const auto g = kernels::Layout::of(u.grid());
    const auto n = u.grid().size();
    ComplexField out(u.grid());
    std::vector<cplx> ang(n);
    kernels::laplacian(g, u.values(), out.values());
    kernels::angular(g, u.values(), ang);
    const double coupling = phys.coupling();
    const double q = phys.p - 1.0;
    const cplx iw{0.0, phys.omega};
    auto o = out.values();
    const auto uv = u.values();
    const auto vv = V.values();
    const auto m = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < m; ++k) {
        o[k] = -o[k] + vv[k] * uv[k] + iw * ang[k] - coupling * kernels::abs_pow(uv[k], q) * uv[k];
    }
    out.zero_boundary();
    return out;
}

double el_residual(const ComplexField& u, double mu, const RealField& V, const Physics& phys)
{
    ComplexField r = apply_hamiltonian(u, V, phys);
    kernels::axpy(-mu, u.values(), r.values());
    const double lap = l2_norm(laplacian(u));
    if (!(lap > 0.0)) {
        return l2_norm(r);
    }
    return l2_norm(r) / lap;
}

DiamagneticReport diamagnetic_check(const ComplexField& u, double omega)
{
    const GridSpec& grid = u.grid();
    const Gradient G = gradient(u);
    DiamagneticReport rep{0.0, 0.0, RealField(grid)};
    const auto n = grid.n();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = grid.index(i, j);
            const Point x = grid.node(i, j);
            const cplx f = u[k];
            const cplx g1 = G.d1[k];
            const cplx g2 = G.d2[k];
            const Point A = (0.5 * omega) * x.perp();
            const double grad2 = std::norm(g1) + std::norm(g2);
            const double mom = A.x1 * (std::conj(f) * g1).imag() + A.x2 * (std::conj(f) * g2).imag();
            const double lhs = grad2 - 2.0 * mom + dot(A, A) * std::norm(f);
            const cplx c1 = g1 - cplx{0.0, A.x1} * f;
            const cplx c2 = g2 - cplx{0.0, A.x2} * f;
            const double covariant = std::norm(c1) + std::norm(c2);
            rep.identity_error = std::max(rep.identity_error, std::abs(lhs - covariant));
            const double mod = std::abs(f);
            double grad_mod2 = 0.0;
            if (mod > 0.0) {
                const double m1 = (std::conj(f) * g1).real() / mod;
                const double m2 = (std::conj(f) * g2).real() / mod;
                grad_mod2 = m1 * m1 + m2 * m2;
            }
            rep.gap[k] = covariant - grad_mod2;
            rep.max_violation = std::max(rep.max_violation, -rep.gap[k]);
        }
    }
    return rep;
}

void write_energy_csv_header(std::ostream& os)
{
    os << "rho,Omega,p,kinetic,potential,interaction,momentum,total,mu,residual\n";
}

void write_energy_csv_row(std::ostream& os, const Physics& phys, const EnergyBreakdown& e, double mu, double residual)
{
    os << std::setprecision(17) << phys.rho << ',' << phys.omega << ',' << phys.p << ',' << e.kinetic << ','
       << e.potential << ',' << e.interaction << ',' << e.momentum << ',' << e.total << ',' << mu << ','
       << residual << '\n';
}

} // namespace rgs
