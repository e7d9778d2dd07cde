#include "lloqss/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lloqss/errors.hpp"

namespace lloqss {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        std::uint64_t n = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError("bad unsigned integer for " + key + ": '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        int n = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    const std::string s = lower(trim(v));
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("empty entry in list for " + key);
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

Placement parse_placement(const std::string& v) {
    const std::string s = lower(trim(v));
    if (s == "symmetric") return Placement::Symmetric;
    if (s == "asymmetric") return Placement::Asymmetric;
    if (s == "custom") return Placement::Custom;
    throw ConfigError("bad placement '" + v +
                      "' (expected symmetric|asymmetric|custom)");
}

SubtractMode parse_subtract(const std::string& v) {
    const std::string s = lower(trim(v));
    if (s == "measurement") return SubtractMode::MeasurementConsistent;
    if (s == "sqrt_t2") return SubtractMode::PlainSqrtT2;
    throw ConfigError("bad subtract mode '" + v +
                      "' (expected measurement|sqrt_t2)");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&,
                                  const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"system.alpha_db_per_km",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.alpha_db_per_km = parse_double(k, v);
         }},
        {"system.beta",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.beta = parse_double(k, v);
         }},
        {"system.eps_ch",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.eps_ch = parse_double(k, v);
         }},
        {"system.adc_bits",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.adc_bits = parse_int(k, v);
         }},
        {"system.extinction_db",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.extinction_db = parse_double(k, v);
         }},
        {"system.dynamics_db",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.dynamics_db = parse_double(k, v);
         }},
        {"system.v_mod",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.v_mod = parse_double_list(k, v);
         }},
        {"system.smax_factor",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.smax_factor = parse_double(k, v);
         }},
        {"system.ref_intensity",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.ref_intensity = parse_double(k, v);
         }},
        {"system.v_slow",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.v_slow = parse_double(k, v);
         }},
        {"system.eps_rest",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.eps_rest = parse_double(k, v);
         }},
        {"system.eta",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.det.eta = parse_double(k, v);
         }},
        {"system.v_el",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.det.v_el = parse_double(k, v);
         }},
        {"system.users",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.n_users = parse_int(k, v);
         }},
        {"system.placement",
         [](ExperimentConfig& c, const std::string&, const std::string& v) {
             c.system.placement = parse_placement(v);
         }},
        {"system.span_km",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.span_km = parse_double(k, v);
         }},
        {"system.spacing_km",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.spacing_km = parse_double(k, v);
         }},
        {"system.distances_km",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.system.custom_distances_km = parse_double_list(k, v);
         }},
        {"run.command",
         [](ExperimentConfig& c, const std::string&, const std::string& v) {
             c.run.command = trim(v);
         }},
        {"run.out_dir",
         [](ExperimentConfig& c, const std::string&, const std::string& v) {
             c.run.out_dir = trim(v);
         }},
        {"run.seed",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.run.seed = parse_u64(k, v);
         }},
        {"run.frames",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.run.frames = parse_u64(k, v);
         }},
        {"sim.sigma_walk",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.sim.sigma_walk = parse_double(k, v);
         }},
        {"sim.eps_sim",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.sim.eps_sim = parse_double(k, v);
         }},
        {"sim.ref_noise",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.sim.ref_noise = parse_bool(k, v);
         }},
        {"sim.dump_frames",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.sim.dump_frames = parse_bool(k, v);
         }},
        {"sim.freeze_fast_drift",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.sim.freeze_fast_drift = parse_bool(k, v);
         }},
        {"sim.zero_detection_noise",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.sim.zero_detection_noise = parse_bool(k, v);
         }},
        {"sim.disclosure_fraction",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.sim.disclosure_fraction = parse_double(k, v);
         }},
        {"sim.subtract_mode",
         [](ExperimentConfig& c, const std::string&, const std::string& v) {
             c.sim.subtract_mode = parse_subtract(v);
         }},
        {"sim.dtheta_d1",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.sim.dtheta_d1 = parse_double(k, v);
         }},
        {"sim.dtheta_d2",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.sim.dtheta_d2 = parse_double(k, v);
         }},
        {"scan.l_min",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scan.l_min = parse_double(k, v);
         }},
        {"scan.l_max",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scan.l_max = parse_double(k, v);
         }},
        {"scan.points",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scan.points = parse_int(k, v);
         }},
        {"scan.v1_max",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scan.v1_max = parse_double(k, v);
         }},
        {"scan.v2_max",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scan.v2_max = parse_double(k, v);
         }},
        {"scan.grid",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scan.grid = parse_int(k, v);
         }},
        {"scan.users_min",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scan.users_min = parse_int(k, v);
         }},
        {"scan.users_max",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scan.users_max = parse_int(k, v);
         }},
        {"scan.optimize_ref",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scan.optimize_ref = parse_bool(k, v);
         }},
        {"scan.parallel",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scan.parallel = parse_bool(k, v);
         }},
    };
    return table;
}

void flatten_json(const nlohmann::json& node, const std::string& prefix,
                  std::vector<std::pair<std::string, std::string>>& out) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) {
            const std::string path =
                prefix.empty() ? key : prefix + "." + key;
            flatten_json(value, path, out);
        }
        return;
    }
    if (prefix.empty())
        throw ConfigError("config JSON root must be an object");
    if (node.is_array()) {
        std::string joined;
        for (const auto& item : node) {
            if (item.is_object() || item.is_array())
                throw ConfigError("nested array/object not allowed at " +
                                  prefix);
            if (!joined.empty()) joined += ',';
            joined += item.is_string() ? item.get<std::string>()
                                       : item.dump();
        }
        out.emplace_back(prefix, joined);
        return;
    }
    out.emplace_back(prefix, node.is_string() ? node.get<std::string>()
                                              : node.dump());
}

}  // namespace

void apply_key(ExperimentConfig& cfg, const std::string& key,
               const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end())
        throw ConfigError("unknown config key: " + key);
    it->second(cfg, key, value);
}

void parse_config_text(ExperimentConfig& cfg, const std::string& text,
                       bool json) {
    if (json) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config JSON parse error: ") +
                              e.what());
        }
        std::vector<std::pair<std::string, std::string>> pairs;
        flatten_json(doc, "", pairs);
        for (const auto& [k, v] : pairs) apply_key(cfg, k, v);
        return;
    }
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void load_config_file(ExperimentConfig& cfg,
                      const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string text = ss.str();
    bool json = path.extension() == ".json";
    if (!json) {
        for (char c : text) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            json = (c == '{');
            break;
        }
    }
    parse_config_text(cfg, text, json);
}

void apply_env_overrides(ExperimentConfig& cfg) {
    for (const std::string& key : known_keys()) {
        std::string var = "LLOQSS_";
        for (char c : key)
            var += (c == '.') ? std::string("__")
                              : std::string(1, static_cast<char>(std::toupper(
                                                   static_cast<unsigned char>(c))));
        if (const char* v = std::getenv(var.c_str()))
            apply_key(cfg, key, v);
    }
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [key, fn] : setters()) k.push_back(key);
        return k;
    }();
    return keys;
}

void finalize(ExperimentConfig& cfg) {
    if (cfg.system.v_mod.size() == 1 && cfg.system.n_users > 1)
        cfg.system.v_mod.assign(static_cast<std::size_t>(cfg.system.n_users),
                                cfg.system.v_mod[0]);
    validate(cfg.system);
    if (cfg.run.frames < 1) throw ConfigError("run.frames must be >= 1");
    if (cfg.run.out_dir.empty()) throw ConfigError("run.out_dir is empty");
    if (!(cfg.sim.sigma_walk >= 0.0))
        throw ConfigError("sim.sigma_walk must be >= 0");
    if (!(cfg.sim.eps_sim >= 0.0))
        throw ConfigError("sim.eps_sim must be >= 0");
    if (!(cfg.sim.disclosure_fraction > 0.0 &&
          cfg.sim.disclosure_fraction <= 0.5))
        throw ConfigError("sim.disclosure_fraction must be in (0, 0.5]");
    if (!std::isfinite(cfg.sim.dtheta_d1) || !std::isfinite(cfg.sim.dtheta_d2))
        throw ConfigError("sim.dtheta_d1/dtheta_d2 must be finite");
    if (!(cfg.scan.l_min > 0.0)) throw ConfigError("scan.l_min must be > 0");
    if (!(cfg.scan.l_max > cfg.scan.l_min))
        throw ConfigError("scan.l_max must exceed scan.l_min");
    if (cfg.scan.points < 2) throw ConfigError("scan.points must be >= 2");
    if (!(cfg.scan.v1_max > 0.0) || !(cfg.scan.v2_max > 0.0))
        throw ConfigError("scan.v1_max/v2_max must be > 0");
    if (cfg.scan.grid < 2) throw ConfigError("scan.grid must be >= 2");
    if (cfg.scan.users_min < 2)
        throw ConfigError("scan.users_min must be >= 2");
    if (cfg.scan.users_max < cfg.scan.users_min)
        throw ConfigError("scan.users_max must be >= scan.users_min");
}

std::string placement_name(Placement p) {
    switch (p) {
        case Placement::Symmetric: return "symmetric";
        case Placement::Asymmetric: return "asymmetric";
        case Placement::Custom: return "custom";
    }
    return "?";
}

std::string subtract_mode_name(SubtractMode m) {
    return m == SubtractMode::MeasurementConsistent ? "measurement"
                                                    : "sqrt_t2";
}

}  // namespace lloqss
