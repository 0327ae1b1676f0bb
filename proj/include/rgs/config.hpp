#pragma once

// Run configuration: a small TOML-like format.
//
//   [physics]   p, Omega, and one of rho | rho_over_sqrt_a_star
//   [potential] kind, coefficients = [..], s
//   [grid]      half_width, n, rescaled
//   [solver]    dt, max_iter, tol_energy, tol_residual, init, init_eps, seed, relax_every
//   [sweep]     rhos = [..] (multiples of √a*), omegas = [..], starts
//   [probe]     taus = [..], half_width, n
//   [output]    dir
//
// p and Omega have no defaults.

#include "rgs/minimize.hpp"
#include "rgs/potentials.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgs {

class ConfigError : public std::runtime_error
{
  public:
    ConfigError(const std::string& key, std::size_t line, const std::string& what);
    const std::string& key() const { return key_; }
    std::size_t line() const { return line_; }

  private:
    std::string key_;
    std::size_t line_;
};

struct RunConfig
{
    double p{0.0};
    double omega{0.0};
    std::optional<double> rho;
    std::optional<double> rho_over_sqrt_a_star;
    PotentialSpec potential;
    SolveConfig solver;
    /// Solve in coordinates rescaled by ε_ρ.
    bool rescaled{true};

    std::vector<double> sweep_rhos;   ///< multiples of √a*
    std::vector<double> sweep_omegas;
    std::size_t starts{5};

    std::vector<double> taus{1.0, 2.0, 4.0, 8.0};
    GridSpec probe_grid{12.0, 1201};

    std::string out_dir{"out"};
    /// Normalized "section.key = value" lines for the manifest.
    std::vector<std::string> echo;

    /// Absolute ρ; needs a* when given as a multiple of √a*.
    double resolve_rho(double a_star) const;
    bool has_rho() const { return rho.has_value() || rho_over_sqrt_a_star.has_value(); }
};

/// Throws ConfigError naming the key and line.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Parses "10,20,40" into numbers; throws ConfigError with key `flag`.
std::vector<double> parse_number_list(const std::string& text, const std::string& flag);

} // namespace rgs
