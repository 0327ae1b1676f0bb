#include "rgs/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace rgs {

namespace {

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s)
{
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

struct Entry
{
    std::string value;
    std::size_t line;
};

class Reader
{
  public:
    explicit Reader(std::map<std::string, Entry> entries)
        : entries_(std::move(entries))
    {
    }

    bool has(const std::string& key) const { return entries_.contains(key); }

    double number(const std::string& key) const
    {
        const Entry& e = at(key);
        return to_number(key, e.line, e.value);
    }

    std::optional<double> number_opt(const std::string& key) const
    {
        if (!has(key)) {
            return std::nullopt;
        }
        return number(key);
    }

    std::size_t count(const std::string& key) const
    {
        const double v = number(key);
        if (!(v >= 0.0) || v != std::floor(v)) {
            throw ConfigError(key, at(key).line, "expected a nonnegative integer");
        }
        return static_cast<std::size_t>(v);
    }

    std::string text(const std::string& key) const { return unquote(at(key).value); }

    bool boolean(const std::string& key) const
    {
        const std::string v = text(key);
        if (v == "true") {
            return true;
        }
        if (v == "false") {
            return false;
        }
        throw ConfigError(key, at(key).line, "expected true or false, got '" + v + "'");
    }

    std::vector<double> list(const std::string& key) const
    {
        const Entry& e = at(key);
        std::string v = trim(e.value);
        if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
            throw ConfigError(key, e.line, "expected a list like [1, 2, 3]");
        }
        return split_numbers(key, e.line, v.substr(1, v.size() - 2));
    }

    /// Comma-separated numbers; blank text is an empty list, a blank item is an error.
    static std::vector<double> split_numbers(const std::string& key, std::size_t line, const std::string& text)
    {
        std::vector<double> out;
        if (trim(text).empty()) {
            return out;
        }
        std::stringstream ss(text + ",");
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (trim(item).empty()) {
                throw ConfigError(key, line, "empty list item");
            }
            out.push_back(to_number(key, line, item));
        }
        return out;
    }

    std::size_t line(const std::string& key) const { return at(key).line; }

    static double to_number(const std::string& key, std::size_t line, const std::string& raw)
    {
        const std::string s = trim(raw);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
            throw ConfigError(key, line, "expected a number, got '" + s + "'");
        }
        return v;
    }

  private:
    const Entry& at(const std::string& key) const
    {
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            throw ConfigError(key, 0, "missing required key");
        }
        return it->second;
    }

    std::map<std::string, Entry> entries_;
};

const std::map<std::string, std::vector<std::string>>& known_keys()
{
    static const std::map<std::string, std::vector<std::string>> keys{
        {"physics", {"p", "Omega", "rho", "rho_over_sqrt_a_star"}},
        {"potential", {"kind", "coefficients", "s"}},
        {"grid", {"half_width", "n", "rescaled"}},
        {"solver",
         {"dt", "max_iter", "tol_energy", "tol_residual", "init", "init_eps", "seed", "relax_every", "backtrack",
          "grow", "stagnation_window"}},
        {"sweep", {"rhos", "omegas", "starts"}},
        {"probe", {"taus", "half_width", "n"}},
        {"output", {"dir"}},
    };
    return keys;
}

} // namespace

ConfigError::ConfigError(const std::string& key, std::size_t line, const std::string& what)
    : std::runtime_error("config error: key '" + key + "'" + (line > 0 ? " at line " + std::to_string(line) : "")
                         + ": " + what)
    , key_(key)
    , line_(line)
{
}

double RunConfig::resolve_rho(double a_star) const
{
    if (rho.has_value()) {
        return *rho;
    }
    if (rho_over_sqrt_a_star.has_value()) {
        return *rho_over_sqrt_a_star * std::sqrt(a_star);
    }
    throw ConfigError("physics.rho", 0, "missing: give rho or rho_over_sqrt_a_star");
}

std::vector<double> parse_number_list(const std::string& text, const std::string& flag)
{
    const std::vector<double> out = Reader::split_numbers(flag, 0, text);
    if (out.empty()) {
        throw ConfigError(flag, 0, "empty list");
    }
    return out;
}

RunConfig parse_config(std::istream& in)
{
    std::map<std::string, Entry> entries;
    std::string section;
    std::string raw;
    std::size_t lineno = 0;
    RunConfig cfg;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
            section = trim(line.substr(1, line.size() - 2));
            if (!known_keys().contains(section)) {
                throw ConfigError("[" + section + "]", lineno, "unknown section");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line, lineno, "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError(key, lineno, "key outside of any [section]");
        }
        const auto& allowed = known_keys().at(section);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(section + "." + key, lineno, "unknown key");
        }
        const std::string full = section + "." + key;
        if (entries.contains(full)) {
            throw ConfigError(full, lineno, "duplicate key (first at line " + std::to_string(entries[full].line) + ")");
        }
        if (value.empty()) {
            throw ConfigError(full, lineno, "missing value");
        }
        entries[full] = {value, lineno};
        cfg.echo.push_back(full + " = " + value);
    }

    const Reader r(std::move(entries));
    cfg.p = r.number("physics.p");
    if (!(cfg.p > 1.0 && cfg.p < 3.0)) {
        throw ConfigError("physics.p", r.line("physics.p"), "p out of range (1,3)");
    }
    cfg.omega = r.number("physics.Omega");
    if (!(cfg.omega >= 0.0)) {
        throw ConfigError("physics.Omega", r.line("physics.Omega"), "Omega must be >= 0");
    }
    cfg.rho = r.number_opt("physics.rho");
    cfg.rho_over_sqrt_a_star = r.number_opt("physics.rho_over_sqrt_a_star");
    if (cfg.rho && cfg.rho_over_sqrt_a_star) {
        throw ConfigError("physics.rho", r.line("physics.rho"), "give rho or rho_over_sqrt_a_star, not both");
    }
    for (const char* key : {"physics.rho", "physics.rho_over_sqrt_a_star"}) {
        if (r.has(key) && !(r.number(key) > 0.0)) {
            throw ConfigError(key, r.line(key), "rho must be > 0");
        }
    }

    const std::string kind = r.has("potential.kind") ? r.text("potential.kind") : "harmonic";
    try {
        cfg.potential.kind = parse_potential_kind(kind);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("potential.kind", r.line("potential.kind"), e.what());
    }
    const std::vector<double> coef = r.has("potential.coefficients") ? r.list("potential.coefficients")
                                                                     : std::vector<double>{1.0};
    const std::size_t cline = r.has("potential.coefficients") ? r.line("potential.coefficients") : 0;
    const std::size_t want = cfg.potential.kind == PotentialKind::harmonic      ? 1
                           : cfg.potential.kind == PotentialKind::anisotropic ? 2
                                                                              : 3;
    if (coef.size() != want) {
        throw ConfigError("potential.coefficients", cline,
                          "kind " + kind + " takes " + std::to_string(want) + " coefficients");
    }
    cfg.potential.a1 = coef[0];
    cfg.potential.a2 = want >= 2 ? coef[1] : coef[0];
    cfg.potential.c = want == 3 ? coef[2] : 0.0;
    cfg.potential.s = r.has("potential.s") ? r.number("potential.s") : 2.0;
    try {
        cfg.potential.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("potential", cline, e.what());
    }

    const double L = r.has("grid.half_width") ? r.number("grid.half_width") : 12.0;
    const std::size_t n = r.has("grid.n") ? r.count("grid.n") : 256;
    try {
        cfg.solver.grid = GridSpec(L, n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("grid", r.has("grid.n") ? r.line("grid.n") : 0, e.what());
    }
    if (r.has("grid.rescaled")) {
        cfg.rescaled = r.boolean("grid.rescaled");
    }

    SolveConfig& s = cfg.solver;
    if (r.has("solver.dt")) {
        s.dt = r.number("solver.dt");
    }
    if (r.has("solver.max_iter")) {
        s.max_iter = r.count("solver.max_iter");
    }
    if (r.has("solver.tol_energy")) {
        s.tol_energy = r.number("solver.tol_energy");
    }
    if (r.has("solver.tol_residual")) {
        s.tol_residual = r.number("solver.tol_residual");
    }
    if (r.has("solver.init")) {
        try {
            s.init = parse_init_kind(r.text("solver.init"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("solver.init", r.line("solver.init"), e.what());
        }
    }
    if (r.has("solver.init_eps")) {
        s.init_eps = r.number("solver.init_eps");
    }
    if (r.has("solver.seed")) {
        s.seed = r.count("solver.seed");
    }
    if (r.has("solver.relax_every")) {
        s.relax_every = r.count("solver.relax_every");
    }
    if (r.has("solver.backtrack")) {
        s.backtrack = r.number("solver.backtrack");
    }
    if (r.has("solver.grow")) {
        s.grow = r.number("solver.grow");
    }
    if (r.has("solver.stagnation_window")) {
        s.stagnation_window = r.count("solver.stagnation_window");
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("solver", 0, e.what());
    }

    if (r.has("sweep.rhos")) {
        cfg.sweep_rhos = r.list("sweep.rhos");
        for (double v : cfg.sweep_rhos) {
            if (!(v > 0.0)) {
                throw ConfigError("sweep.rhos", r.line("sweep.rhos"), "rho must be > 0");
            }
        }
    }
    if (r.has("sweep.omegas")) {
        cfg.sweep_omegas = r.list("sweep.omegas");
        for (double v : cfg.sweep_omegas) {
            if (!(v >= 0.0)) {
                throw ConfigError("sweep.omegas", r.line("sweep.omegas"), "Omega must be >= 0");
            }
        }
    }
    if (r.has("sweep.starts")) {
        cfg.starts = r.count("sweep.starts");
    }
    if (r.has("probe.taus")) {
        cfg.taus = r.list("probe.taus");
    }
    if (r.has("probe.half_width") || r.has("probe.n")) {
        const double pl = r.has("probe.half_width") ? r.number("probe.half_width") : cfg.probe_grid.half_width();
        const std::size_t pn = r.has("probe.n") ? r.count("probe.n") : cfg.probe_grid.n();
        try {
            cfg.probe_grid = GridSpec(pl, pn);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("probe", r.has("probe.n") ? r.line("probe.n") : 0, e.what());
        }
    }
    if (r.has("output.dir")) {
        cfg.out_dir = r.text("output.dir");
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("--config", 0, "cannot open '" + path + "'");
    }
    return parse_config(in);
}

} // namespace rgs
