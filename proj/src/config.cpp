#include "saltlab/config.hpp"

#include "saltlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace saltlab {

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::EulerVorticity: return "euler-vorticity";
        case RunMode::EulerVelocity: return "euler-velocity";
        case RunMode::Rsw: return "rsw";
        case RunMode::AdvectionTest: return "advection-test";
        case RunMode::SdeConvergence: return "sde-convergence";
        case RunMode::LemmaCheck: return "lemma-check";
    }
    return "?";
}

RunMode mode_from_string(const std::string& s) {
    for (auto m : {RunMode::EulerVorticity, RunMode::EulerVelocity, RunMode::Rsw, RunMode::AdvectionTest,
                   RunMode::SdeConvergence, RunMode::LemmaCheck})
        if (to_string(m) == s) return m;
    throw ConfigError("mode", "unknown mode '" + s + "'");
}

bool is_field_mode(RunMode m) {
    return m == RunMode::EulerVorticity || m == RunMode::EulerVelocity || m == RunMode::Rsw ||
           m == RunMode::AdvectionTest;
}

std::size_t RunConfig::n_steps() const { return std::size_t(std::llround(T / dt)); }

std::string RunConfig::resolved_init() const {
    if (init != "default") return init;
    switch (mode) {
        case RunMode::EulerVorticity:
        case RunMode::EulerVelocity: return "taylor-green";
        case RunMode::Rsw: return "balanced";
        default: return "random";
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError(key, "expected true/false, got '" + v + "'");
}

std::vector<NoiseMode> parse_modes(const std::string& key, const std::string& v) {
    std::vector<NoiseMode> modes;
    std::stringstream all(v);
    std::string entry;
    while (std::getline(all, entry, ',')) {
        std::istringstream in(trim(entry));
        std::string phase;
        in >> phase;
        NoiseMode m;
        try {
            m.phase = phase_from_string(phase);
        } catch (const std::exception& e) {
            throw ConfigError(key, e.what());
        }
        bool ok = true;
        if (m.phase == NoisePhase::Uniform)
            ok = bool(in >> m.ux >> m.uy);
        else
            ok = bool(in >> m.kx >> m.ky >> m.amplitude);
        std::string rest;
        if (!ok || (in >> rest)) throw ConfigError(key, "malformed noise mode '" + trim(entry) + "'");
        if (m.phase != NoisePhase::Uniform && m.kx == 0 && m.ky == 0)
            throw ConfigError(key, "trigonometric noise mode needs a nonzero wavevector");
        modes.push_back(m);
    }
    return modes;
}

std::string format_modes(const std::vector<NoiseMode>& modes) {
    std::string s;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto& m = modes[i];
        if (i) s += ", ";
        s += to_string(m.phase);
        if (m.phase == NoisePhase::Uniform)
            s += " " + format_double(m.ux) + " " + format_double(m.uy);
        else
            s += " " + std::to_string(m.kx) + " " + std::to_string(m.ky) + " " + format_double(m.amplitude);
    }
    return s;
}

struct KeySpec {
    std::string section;
    std::string name;
    std::function<void(RunConfig&, const std::string& key, const std::string& value)> set;
    std::function<std::string(const RunConfig&)> get;
    std::string full() const { return section.empty() ? name : section + "." + name; }
};

template <class T>
KeySpec number_key(std::string section, std::string name, T RunConfig::*field) {
    KeySpec k;
    k.section = std::move(section);
    k.name = std::move(name);
    k.set = [field](RunConfig& c, const std::string& key, const std::string& v) {
        if constexpr (std::is_same_v<T, double>)
            c.*field = parse_double(key, v);
        else if constexpr (std::is_same_v<T, bool>)
            c.*field = parse_bool(key, v);
        else if constexpr (std::is_same_v<T, std::uint64_t>) {
            const auto i = parse_int(key, v);
            if (i < 0) throw ConfigError(key, "must be >= 0");
            c.*field = std::uint64_t(i);
        } else {
            const auto i = parse_int(key, v);
            if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
                throw ConfigError(key, "integer out of range");
            c.*field = int(i);
        }
    };
    k.get = [field](const RunConfig& c) -> std::string {
        if constexpr (std::is_same_v<T, double>)
            return format_double(c.*field);
        else if constexpr (std::is_same_v<T, bool>)
            return c.*field ? "true" : "false";
        else
            return std::to_string(c.*field);
    };
    return k;
}

KeySpec string_key(std::string section, std::string name, std::string RunConfig::*field) {
    KeySpec k;
    k.section = std::move(section);
    k.name = std::move(name);
    k.set = [field](RunConfig& c, const std::string&, const std::string& v) { c.*field = v; };
    k.get = [field](const RunConfig& c) { return c.*field; };
    return k;
}

const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table = [] {
        std::vector<KeySpec> t;
        KeySpec mode;
        mode.name = "mode";
        mode.set = [](RunConfig& c, const std::string&, const std::string& v) { c.mode = mode_from_string(v); };
        mode.get = [](const RunConfig& c) { return to_string(c.mode); };
        t.push_back(mode);

        t.push_back(number_key("grid", "nx", &RunConfig::nx));
        t.push_back(number_key("grid", "ny", &RunConfig::ny));
        t.push_back(number_key("time", "dt", &RunConfig::dt));
        t.push_back(number_key("time", "T", &RunConfig::T));

        t.push_back(number_key("noise", "K", &RunConfig::K));
        t.push_back(number_key("noise", "gamma", &RunConfig::gamma));
        t.push_back(number_key("noise", "c", &RunConfig::c));
        t.push_back(number_key("noise", "kmax", &RunConfig::kmax));
        KeySpec modes;
        modes.section = "noise";
        modes.name = "modes";
        modes.set = [](RunConfig& c, const std::string& key, const std::string& v) { c.modes = parse_modes(key, v); };
        modes.get = [](const RunConfig& c) { return format_modes(c.modes); };
        t.push_back(modes);
        t.push_back(string_key("noise", "path", &RunConfig::path));
        t.push_back(number_key("noise", "ou_theta", &RunConfig::ou_theta));
        t.push_back(number_key("noise", "ou_sigma", &RunConfig::ou_sigma));

        t.push_back(number_key("physics", "epsilon", &RunConfig::epsilon));
        t.push_back(number_key("physics", "froude", &RunConfig::froude));
        t.push_back(number_key("physics", "coriolis", &RunConfig::coriolis));
        t.push_back(number_key("physics", "topography", &RunConfig::topography));

        t.push_back(string_key("init", "kind", &RunConfig::init));
        t.push_back(number_key("init", "amplitude", &RunConfig::amplitude));
        t.push_back(number_key("init", "kmax", &RunConfig::init_kmax));
        t.push_back(number_key("init", "seed", &RunConfig::init_seed));
        t.push_back(number_key("init", "depth", &RunConfig::depth));

        t.push_back(number_key("run", "seed", &RunConfig::seed));
        t.push_back(number_key("run", "members", &RunConfig::members));
        t.push_back(number_key("run", "workers", &RunConfig::workers));
        t.push_back(string_key("run", "out", &RunConfig::out));
        t.push_back(number_key("run", "snapshot_every", &RunConfig::snapshot_every));
        t.push_back(number_key("run", "diagnostics_every", &RunConfig::diagnostics_every));
        t.push_back(number_key("run", "project_noise_channels", &RunConfig::project_noise_channels));
        t.push_back(number_key("run", "corrector_iterations", &RunConfig::corrector_iterations));
        t.push_back(number_key("run", "particles", &RunConfig::particles));

        t.push_back(number_key("sde", "mu", &RunConfig::sde_mu));
        t.push_back(number_key("sde", "sigma", &RunConfig::sde_sigma));
        t.push_back(number_key("sde", "x0", &RunConfig::sde_x0));
        t.push_back(number_key("sde", "paths", &RunConfig::sde_paths));
        t.push_back(number_key("sde", "levels", &RunConfig::sde_levels));

        t.push_back(number_key("lemma", "a", &RunConfig::lemma_a));
        t.push_back(number_key("lemma", "b", &RunConfig::lemma_b));
        t.push_back(number_key("lemma", "n_smooth", &RunConfig::lemma_smooth));
        t.push_back(number_key("lemma", "seeds", &RunConfig::lemma_seeds));

        t.push_back(number_key("study", "refine_space", &RunConfig::refine_space));
        return t;
    }();
    return table;
}

void require(bool ok, const char* key, const std::string& msg) {
    if (!ok) throw ConfigError(key, msg);
}

}  // namespace

void validate_config(const RunConfig& c) {
    require(c.dt > 0.0 && std::isfinite(c.dt), "time.dt", "must be > 0");
    require(c.T > 0.0 && std::isfinite(c.T), "time.T", "must be > 0");
    {
        const double r = c.T / c.dt;
        require(std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r), "time.T", "must be a whole number of steps dt");
    }
    if (is_field_mode(c.mode)) {
        require(c.nx >= 8 && c.nx % 2 == 0, "grid.nx", "must be even and >= 8");
        require(c.ny >= 8 && c.ny % 2 == 0, "grid.ny", "must be even and >= 8");
    }
    require(c.K >= 0, "noise.K", "must be >= 0");
    require(c.gamma >= 0.0, "noise.gamma", "must be >= 0");
    require(c.c >= 0.0, "noise.c", "must be >= 0");
    require(c.kmax >= 1, "noise.kmax", "must be >= 1");
    if (c.modes.empty())
        require(std::size_t(c.K) <= admissible_mode_count(c.kmax), "noise.K",
                "exceeds the " + std::to_string(admissible_mode_count(c.kmax)) + " modes allowed by noise.kmax");
    else
        require(std::size_t(c.K) == c.modes.size(), "noise.K", "must equal the number of entries in noise.modes");
    require(c.path == "brownian" || c.path == "ou", "noise.path", "must be 'brownian' or 'ou'");
    require(c.ou_theta >= 0.0, "noise.ou_theta", "must be >= 0");
    require(c.ou_sigma >= 0.0, "noise.ou_sigma", "must be >= 0");
    require(c.epsilon > 0.0, "physics.epsilon", "must be > 0");
    require(c.froude > 0.0, "physics.froude", "must be > 0");
    const auto init = c.resolved_init();
    require(init == "taylor-green" || init == "random" || init == "balanced" || init == "rest" || init == "zero",
            "init.kind", "unknown initial condition '" + c.init + "'");
    require(c.init_kmax >= 1, "init.kmax", "must be >= 1");
    require(c.depth > 0.0, "init.depth", "must be > 0");
    if (c.mode == RunMode::Rsw && init == "balanced")
        require(c.coriolis != 0.0, "physics.coriolis", "balanced initial state needs a nonzero Coriolis parameter");
    if (c.mode == RunMode::Rsw)
        require(c.amplitude >= 0.0 && c.amplitude < 0.5 * c.depth, "init.amplitude",
                "depth perturbation must be in [0, depth/2)");
    require(c.members >= 1, "run.members", "must be >= 1");
    require(c.workers >= 1, "run.workers", "must be >= 1");
    require(!c.out.empty(), "run.out", "must not be empty");
    require(c.snapshot_every >= 0, "run.snapshot_every", "must be >= 0");
    require(c.diagnostics_every >= 1, "run.diagnostics_every", "must be >= 1");
    require(c.corrector_iterations >= 1, "run.corrector_iterations", "must be >= 1");
    require(c.particles >= 0 && c.particles <= 1000, "run.particles", "must be in [0, 1000]");
    require(c.sde_paths >= 1, "sde.paths", "must be >= 1");
    require(c.sde_levels >= 2, "sde.levels", "must be >= 2");
    require(c.sde_sigma >= 0.0, "sde.sigma", "must be >= 0");
    require(c.lemma_b > c.lemma_a, "lemma.b", "must be > lemma.a");
    require(c.lemma_smooth >= 2, "lemma.n_smooth", "must be >= 2");
    require(c.lemma_seeds >= 1, "lemma.seeds", "must be >= 1");
    if (c.mode == RunMode::LemmaCheck) {
        const double w = 0.5 * (c.lemma_b - c.lemma_a);
        require(c.lemma_a - w >= 0.0 && c.lemma_b + w <= c.T, "lemma.a",
                "[a - (b-a)/2, b + (b-a)/2] must lie inside [0, T]");
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line, section;
    std::vector<std::string> seen;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno), "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        const std::string name = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? name : section + "." + name;
        const auto& table = key_table();
        const auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& k) { return k.full() == full; });
        if (it == table.end()) throw ConfigError(full, "unknown key");
        if (std::find(seen.begin(), seen.end(), full) != seen.end()) throw ConfigError(full, "duplicate key");
        seen.push_back(full);
        it->set(c, full, value);
    }
    auto has = [&](const char* k) { return std::find(seen.begin(), seen.end(), k) != seen.end(); };
    if (!has("mode")) throw ConfigError("mode", "required key missing");
    if (!has("time.dt")) throw ConfigError("time.dt", "required key missing");
    if (!has("time.T")) throw ConfigError("time.T", "required key missing");
    if (is_field_mode(c.mode)) {
        if (!has("grid.nx")) throw ConfigError("grid.nx", "required key missing");
        if (!has("grid.ny")) throw ConfigError("grid.ny", "required key missing");
    }
    if (!c.modes.empty() && !has("noise.K")) c.K = int(c.modes.size());
    validate_config(c);
    return c;
}

RunConfig load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("config", "cannot read " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    std::string out;
    std::string section;
    for (const auto& k : key_table()) {
        if (k.name == "modes" && c.modes.empty()) continue;
        if (k.section != section) {
            section = k.section;
            out += "\n[" + section + "]\n";
        }
        out += k.name + " = " + k.get(c) + "\n";
    }
    return out;
}

NoiseBasis make_noise_basis(const RunConfig& c, const Grid2D& grid) {
    if (!c.modes.empty()) return NoiseBasis(grid, c.modes);
    return make_fourier_basis(grid, std::size_t(c.K), c.gamma, c.c, c.kmax);
}

}  // namespace saltlab
