#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "nsp/integrator.hpp"
#include "nsp/params.hpp"

namespace nsp {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "1.0.0";

// Fully resolved run configuration. Every experiment writes the resolved
// config back out as manifest.json; re-running from a manifest reproduces
// the run (bit-identical for the quadrature/lemma experiments).
struct RunConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    bool emit_plotdata = false;

    PhysParams params;

    // Box (simulate).
    int grid_n = 64;
    double grid_L_over_2pi = 16.0;

    // Initial data recipe.
    std::string data_recipe = "gaussian-grad";  // | "s-tail" | "random"
    double data_delta = 1e-2;
    double data_s_class = 0.5;
    double data_width = 0.5;
    double data_slope = 2.0;

    IntegratorConfig integrator;
    EnergyRequest monitor;

    // Decay-fit studies (linear-decay; also reused by simulate fits).
    std::vector<double> fit_s_list = {0.5, 1.0};
    std::vector<int> fit_l_list = {0, 1};
    double fit_window_lo = 10.0;
    double fit_window_hi = 1000.0;
    double fit_tol_amplitude = 0.05;
    int fit_n_samples = 140;

    // Heat ladder.
    std::vector<int> heat_l_list = {0, 1, 2};
    std::vector<double> heat_s_list = {0.0, 0.5, 1.0};

    // Green-function envelopes.
    double green_xi_lo = 1e-3, green_xi_hi = 10.0;
    int green_xi_count = 40;
    double green_t_lo = 0.1, green_t_hi = 1e4;
    int green_t_count = 40;
    double green_ratio_max = 10.0;

    // Lemma suite ensembles.
    int lemma_n = 32;
    int lemma_count = 32;
    double lemma_slope = 2.0;

    // Symbol scan.
    double scan_xi_lo = 1e-3, scan_xi_hi = 10.0;
    int scan_count = 200;

    Grid make_grid() const { return Grid(grid_n, grid_L_over_2pi * 2.0 * 3.14159265358979323846); }
};

// JSON <-> RunConfig. Parsing validates field values and reports the
// offending field by name; unknown keys are rejected (typo protection)
// except for the manifest bookkeeping keys.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

RunConfig load_config_file(const std::string& path);

// Apply a dotted-path override such as "integrator.dt=0.05"; the value is
// parsed as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& j, const std::string& spec);

}  // namespace nsp
