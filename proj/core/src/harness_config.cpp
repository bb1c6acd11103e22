#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "relhartree/harness.hpp"

namespace relhartree::harness {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const ConfigMap& cfg, const std::string& key) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) throw ConfigError("config: missing required key '" + key + "'");
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw ConfigError("config: key '" + key + "' is not a number: '" + it->second + "'");
    }
}

double parse_double_or(const ConfigMap& cfg, const std::string& key, double fallback) {
    return cfg.count(key) ? parse_double(cfg, key) : fallback;
}

long parse_int(const ConfigMap& cfg, const std::string& key) {
    const double v = parse_double(cfg, key);
    if (v != std::floor(v)) throw ConfigError("config: key '" + key + "' must be an integer");
    return long(v);
}

bool parse_bool_or(const ConfigMap& cfg, const std::string& key, bool fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config: key '" + key + "' must be true/false");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "grid.n", "grid.extent",
        "potential.gamma", "potential.lambda", "potential.mass",
        "potential.zero_mode", "potential.zero_mode_value",
        "initial.kind", "initial.width", "initial.amplitude", "initial.radius",
        "initial.carrier_x", "initial.carrier_y", "initial.file",
        "time.dt", "time.t_end", "time.sample_every", "time.allow_wrap",
        "run.integrator", "run.dealias", "run.probes", "run.snapshots", "run.blowup_factor",
        "fit.channels", "fit.t_min", "fit.t_max",
        "linear_decay.gammas",
    };
    return keys;
}

bool probe_name_valid(const std::string& name) {
    static const std::set<std::string> fixed = {"mass", "energy", "sup_norm", "h1", "h5",
                                                "h10", "wkinf7"};
    if (fixed.count(name)) return true;
    for (const char* prefix : {"lp_l2_", "lp_linf_", "sn_linf_", "nlterm_l2_"}) {
        const std::string p(prefix);
        if (name.rfind(p, 0) == 0 && name.size() > p.size()) return true;
    }
    return false;
}

} // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key at line " + std::to_string(lineno));
        if (cfg.count(key))
            throw ConfigError("config: duplicate key '" + key + "' at line " + std::to_string(lineno));
        cfg[key] = value;
    }
    return cfg;
}

ConfigMap load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate_known_keys(const ConfigMap& cfg, bool sweep_manifest) {
    for (const auto& [key, value] : cfg) {
        std::string bare = key;
        if (sweep_manifest) {
            if (key.rfind("base.", 0) == 0) bare = key.substr(5);
            else if (key.rfind("sweep.", 0) == 0) bare = key.substr(6);
            else throw ConfigError("manifest: key '" + key + "' must start with base. or sweep.");
        }
        if (!known_keys().count(bare)) throw ConfigError("config: unknown key '" + key + "'");
    }
}

SimConfig build_sim_config(const ConfigMap& cfg) {
    validate_known_keys(cfg);
    SimConfig sim;
    sim.n = int(parse_int(cfg, "grid.n"));
    sim.extent = parse_double(cfg, "grid.extent");

    const double gamma = parse_double(cfg, "potential.gamma");
    const double lambda = parse_double_or(cfg, "potential.lambda", 1.0);
    const double msmass = parse_double_or(cfg, "potential.mass", 1.0);
    ZeroModePolicy policy = ZeroModePolicy::zero();
    if (const auto it = cfg.find("potential.zero_mode"); it != cfg.end()) {
        if (it->second == "zero") {
            policy = ZeroModePolicy::zero();
        } else if (it->second == "r2_consistent") {
            policy = ZeroModePolicy::value(riesz_dc_r2_consistent(gamma, sim.extent));
        } else if (it->second == "value") {
            policy = ZeroModePolicy::value(parse_double(cfg, "potential.zero_mode_value"));
        } else {
            throw ConfigError("config: potential.zero_mode must be zero|r2_consistent|value");
        }
    }
    sim.potential = PotentialParams(gamma, lambda, msmass, policy);

    const std::string kind = cfg.count("initial.kind") ? cfg.at("initial.kind") : "gaussian";
    if (kind == "gaussian") {
        sim.initial.kind = InitialData::Kind::gaussian;
    } else if (kind == "modulated_gaussian") {
        sim.initial.kind = InitialData::Kind::modulated_gaussian;
        sim.initial.carrier = {parse_double(cfg, "initial.carrier_x"),
                               parse_double(cfg, "initial.carrier_y")};
    } else if (kind == "custom") {
        sim.initial.kind = InitialData::Kind::custom;
        if (!cfg.count("initial.file")) throw ConfigError("config: initial.file required");
        sim.initial.file = cfg.at("initial.file");
    } else {
        throw ConfigError("config: initial.kind must be gaussian|modulated_gaussian|custom");
    }
    sim.initial.width = parse_double_or(cfg, "initial.width", 1.0);
    sim.initial.amplitude = parse_double(cfg, "initial.amplitude");
    sim.initial.declared_radius = parse_double(cfg, "initial.radius");

    sim.dt = parse_double(cfg, "time.dt");
    sim.t_end = parse_double(cfg, "time.t_end");
    sim.sample_every = int(parse_int(cfg, "time.sample_every"));
    sim.allow_wrap = parse_bool_or(cfg, "time.allow_wrap", false);
    sim.blowup_factor = parse_double_or(cfg, "run.blowup_factor", 1e6);

    if (const auto it = cfg.find("run.integrator"); it != cfg.end()) {
        if (it->second == "strang") sim.integrator = IntegratorKind::strang;
        else if (it->second == "rk4_interaction") sim.integrator = IntegratorKind::rk4_interaction;
        else throw ConfigError("config: run.integrator must be strang|rk4_interaction");
    }
    if (const auto it = cfg.find("run.dealias"); it != cfg.end()) {
        if (it->second == "none") sim.dealias = DealiasMode::none;
        else if (it->second == "two_thirds") sim.dealias = DealiasMode::two_thirds;
        else throw ConfigError("config: run.dealias must be none|two_thirds");
    }

    sim.validate();
    // every requested LP probe scale must sit inside the resolvable band
    const double nyq = M_PI * double(sim.n) / sim.extent;
    for (const auto& name : probe_names(cfg)) {
        if (!probe_name_valid(name)) throw ConfigError("config: unknown probe '" + name + "'");
        for (const char* prefix : {"lp_l2_", "lp_linf_"}) {
            const std::string p(prefix);
            if (name.rfind(p, 0) == 0) {
                const double scale = std::stod(name.substr(p.size()));
                if (scale < 4.0 * M_PI / sim.extent || scale > 0.5 * nyq)
                    throw ConfigError("config: probe '" + name + "' outside resolvable band");
            }
        }
    }
    return sim;
}

std::vector<std::string> probe_names(const ConfigMap& cfg) {
    if (!cfg.count("run.probes")) return {"mass", "energy", "sup_norm"};
    return split_list(cfg.at("run.probes"));
}

std::vector<std::string> fit_channels(const ConfigMap& cfg) {
    if (!cfg.count("fit.channels")) return {};
    return split_list(cfg.at("fit.channels"));
}

std::pair<double, double> fit_window(const ConfigMap& cfg, const SimConfig& sim) {
    const double t_min = parse_double_or(cfg, "fit.t_min", 10.0);
    const double t_max = parse_double_or(cfg, "fit.t_max", sim.t_safe());
    return {t_min, t_max};
}

std::string canonical_text(const ConfigMap& cfg) {
    std::string out;
    for (const auto& [k, v] : cfg) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::string config_hash(const ConfigMap& cfg) {
    const std::string text = canonical_text(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (int i = 11; i >= 0; --i) out += hex[(h >> (4 * i)) & 0xF];
    return out;
}

bool RunRecord::all_verdicts_pass() const {
    for (const auto& v : verdicts)
        if (!v.pass) return false;
    return true;
}

} // namespace relhartree::harness
