#pragma once

#include "lloqss/config.hpp"

namespace lloqss {

// Executes cfg.run.command with outputs under cfg.run.out_dir. Throws on
// failure; never returns nonzero.
int run_command(const ExperimentConfig& cfg);

// Full entry point: flag parsing, config/env layering, error-to-exit-code
// mapping (0 ok, 2 config, 3 no positive rate, 4 numerical domain, 1 other).
int cli_main(int argc, char** argv);

}  // namespace lloqss
