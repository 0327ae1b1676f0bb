#include "rgs/asymptotics.hpp"
#include "rgs/config.hpp"
#include "rgs/field_io.hpp"
#include "rgs/minimize.hpp"
#include "rgs/parallel.hpp"
#include "rgs/potentials.hpp"
#include "rgs/scalar_ground.hpp"
#include "rgs/validate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#ifndef RGS_VERSION
#define RGS_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace rgs;

namespace {

enum Exit : int
{
    ok = 0,
    failure = 1,
    config_error = 2,
    not_converged = 3,
    validate_failed = 4,
};

const char* const csv_help = R"(
Outputs:
  profile.csv     r, w
  summary.json    p, w0, a_star, r1, r2, r_max, warnings
  energy.csv      rho, Omega, p, kinetic, potential, interaction, momentum, total, mu, residual
                  (physical units; the field dump u.rgs is in solve coordinates, scaled by length_scale)
  history.csv     iteration, energy, residual, dt, relax
  report.csv      rho, eps, I_hat, I, gap, mu_eps2, z1, z2, z_over_eps1, z_over_eps2,
                  profile_sup_dist, imag_h1, imag_sup
  probe.csv       tau, x_tau1, x_tau2, v_omega, energy
  manifest.json   config echo, code version, threads, seed, wall time
Exit codes: 0 ok, 1 other error, 2 config error, 3 solver did not converge, 4 validate failure.
Threads: --threads, else RGS_THREADS, else all logical cores. Results are bit-reproducible at 1 thread.)";

struct Common
{
    std::string config;
    std::string out;
    std::string rhos;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
};

unsigned resolve_threads(const Common& c)
{
    if (c.threads) {
        return std::max(1u, *c.threads);
    }
    if (const char* env = std::getenv("RGS_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception&) {
        }
        throw ConfigError("RGS_THREADS", 0, std::string("expected a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

class Run
{
  public:
    Run(std::string command, const Common& c)
        : command_(std::move(command))
        , threads_(resolve_threads(c))
        , start_(std::chrono::steady_clock::now())
    {
        omp_set_num_threads(static_cast<int>(threads_));
        manifest_["command"] = command_;
        manifest_["version"] = RGS_VERSION;
        manifest_["threads"] = threads_;
    }

    unsigned threads() const { return threads_; }
    json& manifest() { return manifest_; }

    void echo(const RunConfig& cfg, const std::string& path)
    {
        manifest_["config_path"] = path;
        manifest_["config"] = cfg.echo;
    }

    void output(const fs::path& p) { manifest_["outputs"].push_back(p.string()); }

    void write(const fs::path& dir)
    {
        manifest_["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        fs::create_directories(dir);
        std::ofstream os(dir / "manifest.json");
        os << manifest_.dump(2) << '\n';
    }

  private:
    std::string command_;
    unsigned threads_;
    std::chrono::steady_clock::time_point start_;
    json manifest_;
};

RunConfig load(const Common& c)
{
    if (c.config.empty()) {
        throw ConfigError("--config", 0, "required");
    }
    RunConfig cfg = load_config(c.config);
    if (c.seed) {
        cfg.solver.seed = *c.seed;
    }
    return cfg;
}

fs::path out_dir(const Common& c, const RunConfig& cfg)
{
    return c.out.empty() ? fs::path(cfg.out_dir) : fs::path(c.out);
}

void check_p(double p)
{
    if (!(p > 1.0 && p < 3.0)) {
        throw ConfigError("p", 0, "p out of range (1,3)");
    }
}

/// Length scale of the solve: ε_ρ when the config asks for rescaled coordinates.
double solve_scale(const RunConfig& cfg, double rho, const RadialProfile& w)
{
    return cfg.rescaled ? epsilon_rho(rho, w.a_star, cfg.p) : 1.0;
}

void write_history(const fs::path& path, const GroundState& gs)
{
    std::ofstream os(path);
    os << "iteration,energy,residual,dt,relax\n" << std::setprecision(17);
    for (std::size_t k = 0; k < gs.history.size(); ++k) {
        const auto& h = gs.history[k];
        os << k << ',' << h.energy << ',' << h.residual << ',' << h.dt << ',' << (h.relax ? 1 : 0) << '\n';
    }
}

json summarize(const GroundState& gs)
{
    return {{"converged", gs.converged},     {"iterations", gs.iterations}, {"residual", gs.residual},
            {"energy", gs.physical_energy().total}, {"mu", gs.physical_mu()}, {"length_scale", gs.length_scale},
            {"message", gs.message}};
}

/// Writes u.rgs, energy.csv and history.csv for one solve.
void write_solve(const fs::path& dir, const GroundState& gs, const Physics& phys, Run& run)
{
    fs::create_directories(dir);
    save_field(dir / "u.rgs", gs.u);
    std::ofstream e(dir / "energy.csv");
    write_energy_csv_header(e);
    write_energy_csv_row(e, phys, gs.physical_energy(), gs.physical_mu(), gs.residual);
    write_history(dir / "history.csv", gs);
    for (const char* f : {"u.rgs", "energy.csv", "history.csv"}) {
        run.output(dir / f);
    }
}

int cmd_solve_w(double p, const Common& c)
{
    check_p(p);
    Run run("solve-w", c);
    const RadialProfile w = solve_w(p);
    const IdentityResidual r = identities_residual(w);
    for (const auto& msg : w.warnings) {
        std::cerr << "warning: " << msg << '\n';
    }
    const fs::path dir = c.out.empty() ? fs::path("out") : fs::path(c.out);
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "profile.csv");
        write_profile_csv(os, w);
    }
    const json summary{{"p", p},           {"w0", w.w0}, {"a_star", w.a_star}, {"r1", r.r1},
                       {"r2", r.r2},       {"r_max", w.r_max}, {"warnings", w.warnings}};
    std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
    run.output(dir / "profile.csv");
    run.output(dir / "summary.json");
    run.manifest()["p"] = p;
    run.write(dir);
    std::cout << std::setprecision(10) << "p = " << p << "  w0 = " << w.w0 << "  a* = " << w.a_star
              << "  r1 = " << r.r1 << "  r2 = " << r.r2 << '\n';
    return r.r1 < 1e-4 && r.r2 < 1e-4 ? ok : failure;
}

int cmd_solve(const Common& c)
{
    const RunConfig cfg = load(c);
    Run run("solve", c);
    run.echo(cfg, c.config);
    const RadialProfile w = solve_w(cfg.p);
    const double rho = cfg.resolve_rho(w.a_star);
    const Physics phys{rho, cfg.p, cfg.omega};
    const GroundState gs = solve_scaled(cfg.solver, cfg.potential, phys, solve_scale(cfg, rho, w), &w);
    const fs::path dir = out_dir(c, cfg);
    write_solve(dir, gs, phys, run);
    run.manifest()["result"] = summarize(gs);
    run.write(dir);
    std::cout << std::setprecision(12) << "E = " << gs.physical_energy().total << "  mu = " << gs.physical_mu()
              << "  residual = " << gs.residual << "  iterations = " << gs.iterations
              << (gs.converged ? "  converged\n" : "  NOT converged: " + gs.message + "\n");
    return gs.converged ? ok : not_converged;
}

int cmd_sweep(const Common& c)
{
    const RunConfig cfg = load(c);
    Run run("sweep", c);
    run.echo(cfg, c.config);
    const RadialProfile w = solve_w(cfg.p);

    struct Job
    {
        double rho;
        double omega;
    };
    std::vector<Job> jobs;
    if (!cfg.sweep_omegas.empty()) {
        for (double om : cfg.sweep_omegas) {
            jobs.push_back({cfg.resolve_rho(w.a_star), om});
        }
    } else if (!cfg.sweep_rhos.empty()) {
        for (double r : cfg.sweep_rhos) {
            jobs.push_back({r * std::sqrt(w.a_star), cfg.omega});
        }
    } else {
        throw ConfigError("sweep", 0, "give sweep.omegas or sweep.rhos");
    }

    std::vector<std::optional<GroundState>> results(jobs.size());
    run_pool(jobs.size(), run.threads(), [&](std::size_t k) {
        const Physics phys{jobs[k].rho, cfg.p, jobs[k].omega};
        results[k] = solve_scaled(cfg.solver, cfg.potential, phys, solve_scale(cfg, jobs[k].rho, w), &w);
    });

    const fs::path dir = out_dir(c, cfg);
    fs::create_directories(dir);
    std::ofstream all(dir / "sweep.csv");
    write_energy_csv_header(all);
    bool every = true;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        const GroundState& gs = *results[k];
        const Physics phys{jobs[k].rho, cfg.p, jobs[k].omega};
        std::ostringstream name;
        name << "run_" << std::setw(3) << std::setfill('0') << k;
        write_solve(dir / name.str(), gs, phys, run);
        write_energy_csv_row(all, phys, gs.physical_energy(), gs.physical_mu(), gs.residual);
        run.manifest()["runs"].push_back(summarize(gs));
        every = every && gs.converged;
    }
    run.output(dir / "sweep.csv");
    run.write(dir);
    std::cout << jobs.size() << " runs written to " << (dir / "sweep.csv").string() << '\n';
    return every ? ok : not_converged;
}

int cmd_asymptotics(const Common& c)
{
    const RunConfig cfg = load(c);
    Run run("asymptotics", c);
    run.echo(cfg, c.config);
    if (!cfg.rescaled) {
        throw ConfigError("grid.rescaled", 0, "asymptotics runs solve in rescaled coordinates");
    }
    std::vector<double> multiples = c.rhos.empty() ? cfg.sweep_rhos : parse_number_list(c.rhos, "--rhos");
    if (multiples.empty()) {
        throw ConfigError("--rhos", 0, "give --rhos or sweep.rhos");
    }
    const RadialProfile w = solve_w(cfg.p);
    std::vector<double> rhos;
    for (double m : multiples) {
        rhos.push_back(m * std::sqrt(w.a_star));
    }
    const auto reports = asymptotic_sweep(cfg.solver, cfg.potential, cfg.omega, cfg.p, rhos, w, run.threads());

    const fs::path path = c.out.empty() ? fs::path(cfg.out_dir) / "report.csv" : fs::path(c.out);
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir);
    {
        std::ofstream os(path);
        write_report_csv_header(os);
        for (const auto& r : reports) {
            write_report_csv_row(os, r);
        }
    }
    run.output(path);
    bool every = true;
    for (const auto& r : reports) {
        run.manifest()["runs"].push_back({{"rho", r.rho},
                                          {"converged", r.converged},
                                          {"residual", r.residual},
                                          {"I_hat_formula", r.I_hat_formula},
                                          {"orthogonality", r.orthogonality},
                                          {"gauge_undetermined", r.gauge_undetermined}});
        every = every && r.converged;
    }
    if (reports.size() >= 3) {
        const ConcentrationTrack t = concentration_track(reports, homogeneous_core(cfg.potential, cfg.omega), w);
        run.manifest()["concentration"] = {{"y0_est", {t.y0_est.x1, t.y0_est.x2}},
                                           {"y0_ref", {t.y0_ref.x1, t.y0_ref.x2}},
                                           {"err", t.err}};
    }
    run.write(dir);
    std::cout << reports.size() << " rows written to " << path.string() << '\n';
    return every ? ok : not_converged;
}

int cmd_nonexistence(const Common& c)
{
    const RunConfig cfg = load(c);
    Run run("nonexistence", c);
    run.echo(cfg, c.config);
    const RadialProfile w = solve_w(cfg.p);
    const Physics phys{cfg.resolve_rho(w.a_star), cfg.p, cfg.omega};
    const ProbeTable t = nonexistence_probe(cfg.potential, phys, w, cfg.taus, cfg.probe_grid);
    const fs::path dir = out_dir(c, cfg);
    fs::create_directories(dir);
    std::ofstream os(dir / "probe.csv");
    os << "tau,x_tau1,x_tau2,v_omega,energy\n" << std::setprecision(17);
    std::cout << "   tau        x_tau           V_Omega(x_tau)        energy\n";
    for (const auto& r : t.rows) {
        os << r.tau << ',' << r.x_tau.x1 << ',' << r.x_tau.x2 << ',' << r.v_omega << ',' << r.energy.total << '\n';
        std::cout << std::setprecision(6) << std::setw(6) << r.tau << "  (" << std::setw(8) << r.x_tau.x1 << ", "
                  << std::setw(8) << r.x_tau.x2 << ")  " << std::setw(14) << r.v_omega << "  " << std::setw(14)
                  << r.energy.total << '\n';
    }
    if (!t.conclusive) {
        std::cout << "V_Omega is bounded below on the grid: no conclusion\n";
    }
    run.output(dir / "probe.csv");
    run.manifest()["conclusive"] = t.conclusive;
    run.write(dir);
    return ok;
}

int cmd_check_potential(const Common& c)
{
    const RunConfig cfg = load(c);
    Run run("check-potential", c);
    run.echo(cfg, c.config);
    const OmegaStar os = omega_star(cfg.potential);
    std::cout << std::setprecision(10) << "potential: " << to_string(cfg.potential.kind) << '\n'
              << "Omega* = " << os.value << (os.estimated ? " (estimated)" : "") << '\n';
    json result{{"omega_star", os.value}, {"omega_star_estimated", os.estimated}};
    if (cfg.omega >= os.value) {
        std::cout << "Omega = " << cfg.omega << " >= Omega*: no minimizer expected\n";
    } else {
        const RadialProfile w = solve_w(cfg.p);
        const HomogeneousFn h = homogeneous_core(cfg.potential, cfg.omega);
        const HMinimum m = minimize_H(h, w);
        const Nondegeneracy nd = nondegeneracy(h, w, m.y0);
        std::cout << "core h = " << h.name << " (degree " << h.degree << ")\n"
                  << "y0 = (" << m.y0.x1 << ", " << m.y0.x2 << ")  H(y0) = " << m.value << '\n'
                  << "matrix = [[" << nd.m[0][0] << ", " << nd.m[0][1] << "], [" << nd.m[1][0] << ", " << nd.m[1][1]
                  << "]]\n"
                  << "det = " << nd.det << "  det/a*^2 = " << nd.det / (w.a_star * w.a_star)
                  << (nd.degenerate ? "  DEGENERATE" : "") << '\n';
        result["y0"] = {m.y0.x1, m.y0.x2};
        result["H_min"] = m.value;
        result["matrix"] = {{nd.m[0][0], nd.m[0][1]}, {nd.m[1][0], nd.m[1][1]}};
        result["det"] = nd.det;
        result["a_star"] = w.a_star;
        result["degenerate"] = nd.degenerate;
    }
    run.manifest()["result"] = result;
    if (!c.out.empty()) {
        run.write(c.out);
    }
    return ok;
}

int cmd_validate(const Common& c)
{
    Run run("validate", c);
    ValidateOptions opt;
    if (c.seed) {
        opt.seed = *c.seed;
    }
    const auto results = run_validation(opt);
    print_check_table(std::cout, results);
    if (!c.out.empty()) {
        const fs::path dir(c.out);
        fs::create_directories(dir);
        std::ofstream os(dir / "validate.txt");
        print_check_table(os, results);
        run.output(dir / "validate.txt");
        run.manifest()["seed"] = opt.seed;
        run.write(dir);
    }
    return all_passed(results) ? ok : validate_failed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rotational Gross-Pitaevskii ground states on a uniform grid"};
    app.footer(csv_help);
    app.require_subcommand(1);

    Common c;
    double p = 0.0;
    auto add_common = [&](CLI::App* sub, bool config) {
        if (config) {
            sub->add_option("--config", c.config, "run configuration file")->required();
        }
        sub->add_option("--out", c.out, "output directory (asymptotics: report CSV path)");
        sub->add_option("--threads", c.threads, "worker threads (fallback: RGS_THREADS)");
        sub->add_option("--seed", c.seed, "random seed override");
    };

    auto* solve_w_cmd = app.add_subcommand("solve-w", "shoot the radial profile w");
    solve_w_cmd->add_option("--p", p, "exponent p in (1,3)")->required();
    add_common(solve_w_cmd, false);
    auto* solve_cmd = app.add_subcommand("solve", "one ground state");
    add_common(solve_cmd, true);
    auto* sweep_cmd = app.add_subcommand("sweep", "ground states over sweep.omegas or sweep.rhos");
    add_common(sweep_cmd, true);
    auto* asym_cmd = app.add_subcommand("asymptotics", "blow-up report over a rho sequence");
    add_common(asym_cmd, true);
    asym_cmd->add_option("--rhos", c.rhos, "comma-separated multiples of sqrt(a*)");
    auto* non_cmd = app.add_subcommand("nonexistence", "trial-state energies for Omega > Omega*");
    add_common(non_cmd, true);
    auto* pot_cmd = app.add_subcommand("check-potential", "Omega*, concentration point, non-degeneracy");
    add_common(pot_cmd, true);
    auto* val_cmd = app.add_subcommand("validate", "run the invariant suite");
    add_common(val_cmd, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*solve_w_cmd) {
            return cmd_solve_w(p, c);
        }
        if (*solve_cmd) {
            return cmd_solve(c);
        }
        if (*sweep_cmd) {
            return cmd_sweep(c);
        }
        if (*asym_cmd) {
            return cmd_asymptotics(c);
        }
        if (*non_cmd) {
            return cmd_nonexistence(c);
        }
        if (*pot_cmd) {
            return cmd_check_potential(c);
        }
        if (*val_cmd) {
            return cmd_validate(c);
        }
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
    return failure;
}
