#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nsp/experiments.hpp"
#include "nsp/fit.hpp"

using namespace nsp;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TmpDir {
    fs::path path;
    explicit TmpDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TmpDir() { fs::remove_all(path); }
};

json run_and_load_fits(RunConfig cfg, const fs::path& out) {
    cfg.output_dir = out.string();
    ExperimentResult res = run_experiment(cfg);
    (void)res;
    return json::parse(slurp(out / "fits.json"));
}

// Minimal CSV reader for the round-trip check.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return {header, rows};
}

}  // namespace

TEST_CASE("config validation reports the offending field") {
    json j = {{"experiment", "simulate"}, {"grid", {{"n", 17}}}};
    CHECK_THROWS_WITH_AS(config_from_json(j), doctest::Contains("grid.n"), ConfigError);
    j = {{"experiment", "nope"}};
    CHECK_THROWS_WITH_AS(config_from_json(j), doctest::Contains("experiment"), ConfigError);
    j = {{"experiment", "simulate"}, {"integrator", {{"dt", -1.0}}}};
    CHECK_THROWS_WITH_AS(config_from_json(j), doctest::Contains("integrator.dt"), ConfigError);
    j = {{"experiment", "simulate"}, {"typo_key", 1}};
    CHECK_THROWS_WITH_AS(config_from_json(j), doctest::Contains("typo_key"), ConfigError);
    j = {{"experiment", "simulate"}, {"params", {{"mu", -1.0}}}};
    CHECK_THROWS_AS(config_from_json(j), ConfigError);
}

TEST_CASE("overrides poke dotted paths with JSON literals") {
    json j = {{"experiment", "simulate"}};
    apply_override(j, "integrator.dt=0.025");
    apply_override(j, "data.recipe=random");
    CHECK(j["integrator"]["dt"] == 0.025);
    CHECK(j["data"]["recipe"] == "random");
    CHECK_THROWS_AS(apply_override(j, "no-equals-sign"), ConfigError);
}

TEST_CASE("heat-demo: (l,s) = (1, 1/2) passes with exponent -1.5") {
    TmpDir tmp("nsp_test_heat");
    RunConfig cfg;
    cfg.experiment = "heat-demo";
    cfg.heat_l_list = {1};
    cfg.heat_s_list = {0.5};
    cfg.fit_n_samples = 60;
    json fits = run_and_load_fits(cfg, tmp.path);
    REQUIRE(fits.size() == 1);
    CHECK(fits[0]["pass"].get<bool>());
    CHECK(fits[0]["target"].get<double>() == doctest::Approx(-1.5));
    CHECK(std::abs(fits[0]["exponent"].get<double>() + 1.5) < 0.1);
    CHECK(fs::exists(tmp.path / "manifest.json"));
    CHECK(fs::exists(tmp.path / "norms.csv"));
}

TEST_CASE("simulate with delta = 0 trivially passes") {
    TmpDir tmp("nsp_test_zero");
    RunConfig cfg;
    cfg.experiment = "simulate";
    cfg.grid_n = 16;
    cfg.grid_L_over_2pi = 2.0;
    cfg.data_delta = 0.0;
    cfg.integrator.dt = 0.05;
    cfg.integrator.t_end = 0.5;
    cfg.integrator.output_stride = 2;
    ExperimentResult res;
    cfg.output_dir = (tmp.path / "run").string();
    res = run_experiment(cfg);
    CHECK(res.exit_code == 0);
    auto [header, rows] = read_csv(tmp.path / "run" / "norms.csv");
    for (const auto& row : rows)
        for (std::size_t c = 1; c < row.size(); ++c) CHECK(row[c] == 0.0);
}

TEST_CASE("lemma-suite default emits six measured constants plus the zero check") {
    TmpDir tmp("nsp_test_lemma");
    RunConfig cfg;
    cfg.experiment = "lemma-suite";
    cfg.lemma_count = 6;
    cfg.lemma_n = 16;
    json fits = run_and_load_fits(cfg, tmp.path);
    int lemma_records = 0;
    for (const auto& r : fits)
        if (r["kind"] == "lemma") ++lemma_records;
    CHECK(lemma_records == 6);
    bool found_zero = false;
    for (const auto& r : fits)
        if (r["name"] == "commutator_constant_f") {
            found_zero = true;
            CHECK(r["pass"].get<bool>());
        }
    CHECK(found_zero);
}

TEST_CASE("manifest reruns are bit-identical for quadrature experiments") {
    TmpDir tmp("nsp_test_rerun");
    RunConfig cfg;
    cfg.experiment = "heat-demo";
    cfg.heat_l_list = {1};
    cfg.heat_s_list = {1.0};
    cfg.fit_n_samples = 40;
    cfg.output_dir = (tmp.path / "a").string();
    run_experiment(cfg);

    // Re-load the manifest and run again into a second directory.
    json manifest = json::parse(slurp(tmp.path / "a" / "manifest.json"));
    manifest["output_dir"] = (tmp.path / "b").string();
    RunConfig cfg2 = config_from_json(manifest);
    run_experiment(cfg2);
    CHECK(slurp(tmp.path / "a" / "norms.csv") == slurp(tmp.path / "b" / "norms.csv"));
    CHECK(slurp(tmp.path / "a" / "fits.json") == slurp(tmp.path / "b" / "fits.json"));
}

TEST_CASE("lemma-suite reruns from the manifest are bit-identical") {
    TmpDir tmp("nsp_test_lemma_rerun");
    RunConfig cfg;
    cfg.experiment = "lemma-suite";
    cfg.lemma_count = 4;
    cfg.lemma_n = 16;
    cfg.output_dir = (tmp.path / "a").string();
    run_experiment(cfg);
    json manifest = json::parse(slurp(tmp.path / "a" / "manifest.json"));
    manifest["output_dir"] = (tmp.path / "b").string();
    run_experiment(config_from_json(manifest));
    CHECK(slurp(tmp.path / "a" / "fits.json") == slurp(tmp.path / "b" / "fits.json"));
}

TEST_CASE("CSV round trip: re-fitting norms.csv reproduces the fits.json verdicts") {
    TmpDir tmp("nsp_test_roundtrip");
    RunConfig cfg;
    cfg.experiment = "heat-demo";
    cfg.heat_l_list = {0, 1};
    cfg.heat_s_list = {0.5};
    cfg.fit_n_samples = 60;
    json fits = run_and_load_fits(cfg, tmp.path);
    auto [header, rows] = read_csv(tmp.path / "norms.csv");
    REQUIRE(header.size() == fits.size() + 1);
    for (std::size_t c = 1; c < header.size(); ++c) {
        std::vector<double> t, v;
        for (const auto& row : rows) {
            t.push_back(row[0]);
            v.push_back(row[c]);
        }
        const json& rec = fits[c - 1];
        DecayFit refit = fit_power_law(t, v, rec["window"][0].get<double>(),
                                       rec["window"][1].get<double>());
        compare(refit, rec["target"].get<double>(), rec["tol"].get<double>());
        CHECK(refit.pass == rec["pass"].get<bool>());
        CHECK(refit.exponent ==
              doctest::Approx(rec["exponent"].get<double>()).epsilon(1e-12));
    }
}

TEST_CASE("green-bounds experiment passes its verdicts on defaults") {
    TmpDir tmp("nsp_test_green");
    RunConfig cfg;
    cfg.experiment = "green-bounds";
    cfg.green_xi_count = 20;
    cfg.green_t_count = 20;
    json fits = run_and_load_fits(cfg, tmp.path);
    for (const auto& r : fits)
        if (r.contains("pass")) CHECK(r["pass"].get<bool>());
}

TEST_CASE("symbol-scan reports eta, R0 and clean identities") {
    TmpDir tmp("nsp_test_scan");
    RunConfig cfg;
    cfg.experiment = "symbol-scan";
    cfg.scan_count = 50;
    json fits = run_and_load_fits(cfg, tmp.path);
    bool saw_eta = false, saw_r0 = false;
    for (const auto& r : fits) {
        if (r["name"] == "eta") saw_eta = true;
        if (r["name"] == "R0_measured") {
            saw_r0 = true;
            CHECK(r["value"].get<double>() > 0.0);
        }
        if (r.contains("pass")) CHECK(r["pass"].get<bool>());
    }
    CHECK(saw_eta);
    CHECK(saw_r0);
}

TEST_CASE("plotdata emission writes one two-column file per series") {
    TmpDir tmp("nsp_test_plot");
    RunConfig cfg;
    cfg.experiment = "heat-demo";
    cfg.heat_l_list = {1};
    cfg.heat_s_list = {1.0};
    cfg.fit_n_samples = 40;
    cfg.emit_plotdata = true;
    cfg.output_dir = (tmp.path / "run").string();
    run_experiment(cfg);
    CHECK(fs::exists(tmp.path / "run" / "plotdata" / "heat_l1_s1.dat"));
}
