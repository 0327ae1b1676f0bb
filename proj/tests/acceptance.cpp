// Acceptance run: one PASS/FAIL line per criterion.
#include "rgs/asymptotics.hpp"
#include "rgs/potentials.hpp"
#include "rgs/scalar_ground.hpp"
#include "rgs/validate.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace rgs;

namespace {

struct Outcome
{
    bool pass{false};
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const RadialProfile& w2()
{
    static const RadialProfile w = solve_w(2.0);
    return w;
}

SolveConfig rescaled_config()
{
    SolveConfig c;
    c.grid = GridSpec(12.0, 256);
    c.init = InitKind::rescaled_w;
    c.init_eps = 1.0;
    c.tol_residual = 1e-8;
    return c;
}

bool strictly_decreasing(const std::vector<double>& v)
{
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (!(v[k] < v[k - 1])) {
            return false;
        }
    }
    return true;
}

std::string list(const std::vector<double>& v)
{
    std::ostringstream os;
    os.precision(6);
    for (std::size_t k = 0; k < v.size(); ++k) {
        os << (k ? ", " : "") << v[k];
    }
    return os.str();
}

const std::vector<BlowupReport>& harmonic_sweep()
{
    static const std::vector<BlowupReport> r = [] {
        const double s = std::sqrt(w2().a_star);
        return asymptotic_sweep(rescaled_config(), PotentialSpec::harmonic(1.0), 1.0, 2.0,
                                {10.0 * s, 20.0 * s, 40.0 * s}, w2());
    }();
    return r;
}

Outcome identities()
{
    Outcome o{true, ""};
    for (double p : {1.5, 2.0, 2.5}) {
        const auto t0 = Clock::now();
        const RadialProfile w = solve_w(p);
        const IdentityResidual r = identities_residual(w);
        const double t = seconds_since(t0);
        o.pass = o.pass && r.r1 < 1e-4 && r.r2 < 1e-4 && t < 5.0;
        o.detail += fmt("p=%.1f r1=%.1e r2=%.1e %.2fs; ", p, r.r1, r.r2, t);
    }
    return o;
}

Outcome gn_sharpness()
{
    const auto t0 = Clock::now();
    const double p = 2.0;
    const GnConstant c = gn_constant(w2());
    const GridSpec grid(10.0, 201);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::array<double, 4>> bumps(static_cast<std::size_t>(1 + trial % 4));
        for (auto& b : bumps) {
            b = {3.0 * u(rng), 3.0 * u(rng), 1.0 + 0.9 * u(rng), 1.0 + 0.5 * u(rng)};
        }
        const RealField f = RealField::sample(grid, [&](Point x) {
            double v = 0.0;
            for (const auto& b : bumps) {
                const double d1 = x.x1 - b[0];
                const double d2 = x.x2 - b[1];
                v += b[2] * std::exp(-(d1 * d1 + d2 * d2) / (b[3] * b[3]));
            }
            return v;
        });
        worst = std::max(worst, gn_ratio(f, p, c.value));
    }
    const double t = seconds_since(t0);
    return {c.equality_error < 1e-3 && worst < 1.0 && t < 10.0,
            fmt("equality error %.2e, worst mixture ratio %.4f, %.1fs", c.equality_error, worst, t)};
}

Outcome existence()
{
    const auto t0 = Clock::now();
    const double a = w2().a_star;
    const double rho = 40.0 * std::sqrt(a);
    const double eps = epsilon_rho(rho, a, 2.0);
    const GroundState gs = solve_scaled(rescaled_config(), PotentialSpec::harmonic(1.0), Physics{rho, 2.0, 1.0}, eps, &w2());
    const double t = seconds_since(t0);
    const double scaled = eps * eps * gs.physical_energy().total;
    return {gs.converged && gs.residual < 1e-5 && std::abs(scaled + 0.5) <= 0.05 * 0.5 && t < 120.0,
            fmt("converged=%d residual %.1e, eps^2 I = %.6f, %d iterations, %.1fs", gs.converged, gs.residual, scaled,
                static_cast<int>(gs.iterations), t)};
}

Outcome gap_trend()
{
    std::vector<double> gaps;
    bool ok = true;
    for (const BlowupReport& r : harmonic_sweep()) {
        gaps.push_back(r.gap);
        ok = ok && r.converged && r.gap >= -1e-3;
    }
    return {ok && strictly_decreasing(gaps), "gap = " + list(gaps)};
}

Outcome multiplier_law()
{
    std::vector<double> dev;
    for (const BlowupReport& r : harmonic_sweep()) {
        dev.push_back(std::abs(r.mu_eps2 + 1.0));
    }
    const double last = harmonic_sweep().back().mu_eps2;
    return {std::abs(last + 1.0) <= 0.05 && strictly_decreasing(dev),
            fmt("mu eps^2 = %.9f at 40 sqrt(a*); |mu eps^2 + 1| = ", last) + list(dev)};
}

Outcome profile_convergence()
{
    std::vector<double> d;
    for (const BlowupReport& r : harmonic_sweep()) {
        d.push_back(r.profile_sup_dist);
    }
    return {d.back() < 0.05 && strictly_decreasing(d), "profile_sup_dist = " + list(d)};
}

Outcome imaginary_part()
{
    std::vector<double> q;
    double orth = 0.0;
    for (const BlowupReport& r : harmonic_sweep()) {
        q.push_back(r.imag_sup / (r.eps * r.eps));
        orth = std::max(orth, r.orthogonality);
    }
    return {strictly_decreasing(q) && orth < 1e-8, "imag_sup/eps^2 = " + list(q) + fmt("; orthogonality %.1e", orth)};
}

Outcome concentration()
{
    const double s = std::sqrt(w2().a_star);
    const SolveConfig c = rescaled_config();
    const double cell = c.grid.spacing();
    Outcome o{true, ""};
    for (const PotentialSpec& V : {PotentialSpec::harmonic(1.0), PotentialSpec::anisotropic(1.0, 4.0)}) {
        const std::vector<BlowupReport> reports =
            V.kind == PotentialKind::harmonic
                ? harmonic_sweep()
                : asymptotic_sweep(c, V, 1.0, 2.0, {10.0 * s, 20.0 * s, 40.0 * s}, w2());
        const ConcentrationTrack t = concentration_track(reports, homogeneous_core(V, 1.0), w2());
        o.pass = o.pass && t.y0_ref.norm() < 1e-6 && t.err < 0.5 * cell;
        o.detail += fmt("%s |z/eps - y0| = %.2e cells; ", to_string(V.kind).c_str(), t.err / cell);
    }
    return o;
}

Outcome nonexistence()
{
    const auto t0 = Clock::now();
    const double rho = 40.0 * std::sqrt(w2().a_star);
    const ProbeTable table = nonexistence_probe(PotentialSpec::harmonic(1.0), Physics{rho, 2.0, 3.0}, w2(),
                                                {1.0, 2.0, 4.0, 8.0}, GridSpec(12.0, 1201));
    const double t = seconds_since(t0);
    std::vector<double> e;
    for (const ProbeRow& r : table.rows) {
        e.push_back(r.energy.total);
    }
    return {table.conclusive && e.size() == 4 && strictly_decreasing(e) && e.back() < e.front() - 100.0 && t < 30.0,
            "E(w_tau) = " + list(e) + fmt(", %.1fs", t)};
}

Outcome uniqueness()
{
    const auto t0 = Clock::now();
    const double a = w2().a_star;
    const double rho = 40.0 * std::sqrt(a);
    const double eps = epsilon_rho(rho, a, 2.0);
    const ScaledProblem sp = rescale_problem(PotentialSpec::harmonic(1.0), Physics{rho, 2.0, 1.0}, eps);
    const UniquenessResult r = uniqueness_probe(rescaled_config(), sp.V, sp.phys, 5, 1, w2());
    const double t = seconds_since(t0);
    return {r.conclusive && r.qualifying == 5 && r.max_pair_dist < 1e-4 && t < 600.0,
            fmt("max pair distance %.2e over %d runs, %.0fs", r.max_pair_dist, static_cast<int>(r.qualifying), t)};
}

Outcome nondegenerate()
{
    const RadialProfile& w = w2();
    const HomogeneousFn h{[](Point x) { return dot(x, x); }, 2.0, "|x|^2"};
    const Nondegeneracy n = nondegeneracy(h, w, minimize_H(h, w).y0);
    const double target = -2.0 * w.a_star;
    double worst = 0.0;
    for (int j = 0; j < 2; ++j) {
        for (int l = 0; l < 2; ++l) {
            worst = std::max(worst, std::abs(n.m[j][l] - (j == l ? target : 0.0)) / std::abs(target));
        }
    }
    return {worst < 1e-3 && n.det > 0.0 && !n.degenerate, fmt("max rel deviation from -2a* I %.2e, det %.4g", worst, n.det)};
}

Outcome determinism()
{
    auto table = [] {
        std::string s;
        for (const CheckResult& r : run_validation({})) {
            s += r.module + "|" + r.name + "|" + (r.pass ? "PASS" : "FAIL") + "\n";
        }
        return s;
    };
    const std::string first = table();
    const std::string second = table();
    return {first == second && !first.empty(), fmt("%d rows, tables %s", static_cast<int>(std::count(first.begin(), first.end(), '\n')),
                                                   first == second ? "identical" : "differ")};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"scalar field identities", identities},
        {"Gagliardo-Nirenberg sharpness", gn_sharpness},
        {"existence regime solve", existence},
        {"energy gap trend", gap_trend},
        {"multiplier law", multiplier_law},
        {"profile convergence", profile_convergence},
        {"imaginary part smallness", imaginary_part},
        {"concentration point", concentration},
        {"nonexistence probe", nonexistence},
        {"uniqueness up to phase", uniqueness},
        {"non-degeneracy", nondegenerate},
        {"validate determinism", determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("[%2zu] %-4s %-30s %s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
