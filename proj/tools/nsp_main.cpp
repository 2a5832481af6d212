#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "nsp/experiments.hpp"
#include "nsp/kernels.hpp"

namespace {

nlohmann::json default_config_json(const std::string& experiment) {
    nsp::RunConfig cfg;
    cfg.experiment = experiment;
    nlohmann::json j = nsp::config_to_json(cfg);
    j.erase("version");
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral verification lab for compressible Navier-Stokes-Poisson decay"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool have_seed = false;
    std::vector<std::string> overrides;
    bool serial = false;

    const std::vector<std::string> experiments = {"heat-demo",   "linear-decay", "green-bounds",
                                                  "simulate",    "lemma-suite",  "symbol-scan"};
    for (const auto& name : experiments) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file (defaults used if omitted)");
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed, "RNG seed (overrides config)")
            ->each([&](const std::string&) { have_seed = true; });
        sub->add_option("--override", overrides,
                        "dotted-path override, e.g. integrator.dt=0.05 (repeatable)");
        sub->add_flag("--serial", serial, "disable the OpenMP kernels (serial reference path)");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string experiment = app.get_subcommands().front()->get_name();

    try {
        nlohmann::json j;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw nsp::ConfigError("cannot open config file: " + config_path);
            in >> j;
            j["experiment"] = experiment;
        } else {
            j = default_config_json(experiment);
        }
        if (!out_dir.empty()) j["output_dir"] = out_dir;
        if (have_seed) j["seed"] = seed;
        for (const auto& ov : overrides) nsp::apply_override(j, ov);

        nsp::kernels::set_parallel(!serial);
        nsp::RunConfig cfg = nsp::config_from_json(j);
        nsp::ExperimentResult res = nsp::run_experiment(cfg);
        if (!res.message.empty()) std::cerr << res.message << "\n";
        int failed = 0, total = 0;
        for (const auto& r : res.fits) {
            if (!r.contains("pass")) continue;
            ++total;
            if (!r.at("pass").get<bool>()) {
                ++failed;
                std::cerr << "FAIL " << r.at("name").get<std::string>() << "\n";
            }
        }
        std::cout << experiment << ": " << (total - failed) << "/" << total
                  << " verdicts passed; outputs in " << cfg.output_dir << "\n";
        return res.exit_code;
    } catch (const nsp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
}
