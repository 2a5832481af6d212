#pragma once

#include "nsp/config.hpp"

namespace nsp {

struct ExperimentResult {
    int exit_code = 0;  // 0 all verdicts pass, 1 some verdict failed, 2 config/runtime error
    nlohmann::json fits;
    std::string message;
};

// Build the box initial state for the configured recipe, normalized so the
// triple H^N norm equals delta.
NspState make_box_state(const RunConfig& cfg);

// Run one experiment: writes manifest.json, norms.csv / energy.csv /
// fits.json (as applicable) and optional plotdata/ under cfg.output_dir.
ExperimentResult run_experiment(const RunConfig& cfg);

}  // namespace nsp
