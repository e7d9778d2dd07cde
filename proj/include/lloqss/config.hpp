#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lloqss/noise.hpp"
#include "lloqss/protocol.hpp"

namespace lloqss {

struct RunConfig {
    std::string command;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    std::uint64_t frames = 100000;
};

// Knobs for the Monte Carlo commands (simulate, protocol).
struct SimOptions {
    double sigma_walk = 1e-5;      // per-frame phase-walk std dev, rad
    double eps_sim = 0.0;          // channel excess noise injected at the detector, SNU
    bool ref_noise = true;         // add measurement noise to the reference phases
    bool dump_frames = false;      // also write per-frame quadratures
    bool freeze_fast_drift = false;
    bool zero_detection_noise = false;
    double disclosure_fraction = 0.1;  // share of frames disclosed for estimation
    SubtractMode subtract_mode = SubtractMode::MeasurementConsistent;
    double dtheta_d1 = 0.3;        // true dealer-minus-user-1 delay phase, rad
    double dtheta_d2 = 0.4;        // true dealer-minus-user-2 delay phase, rad
};

struct ScanOptions {
    double l_min = 1.0;   // km
    double l_max = 100.0;
    int points = 100;
    double v1_max = 15.0;  // SNU, variance grid extents
    double v2_max = 25.0;
    int grid = 50;
    int users_min = 2;
    int users_max = 30;
    bool optimize_ref = true;  // re-optimize reference intensity per point
    bool parallel = true;
};

struct ExperimentConfig {
    SystemConfig system;
    RunConfig run;
    SimOptions sim;
    ScanOptions scan;
};

// Set one dotted key ("system.v_mod", "run.seed", ...) from its string
// form. Unknown keys and unparseable values throw ConfigError.
void apply_key(ExperimentConfig& cfg, const std::string& key,
               const std::string& value);

// Flat `key = value` text ('#' comments) or, with json=true, a JSON
// document whose nesting maps to dotted keys and whose arrays map to
// comma-joined lists.
void parse_config_text(ExperimentConfig& cfg, const std::string& text,
                       bool json);

// Reads the file and dispatches on format: ".json" extension or a leading
// '{' selects JSON.
void load_config_file(ExperimentConfig& cfg,
                      const std::filesystem::path& path);

// Environment overrides: LLOQSS_<KEY> with '.' spelled as "__", e.g.
// LLOQSS_SYSTEM__V_MOD. Scanned in the fixed known_keys() order.
void apply_env_overrides(ExperimentConfig& cfg);

// Every accepted dotted key, sorted.
const std::vector<std::string>& known_keys();

// Replicates a single v_mod entry across all users, then validates every
// section. Call once after all sources are applied.
void finalize(ExperimentConfig& cfg);

std::string placement_name(Placement p);
std::string subtract_mode_name(SubtractMode m);

}  // namespace lloqss
