#include "nsp/config.hpp"

#include <fstream>
#include <set>

namespace nsp {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownExperiments = {"heat-demo",  "linear-decay", "green-bounds",
                                                 "simulate",   "lemma-suite",  "symbol-scan"};

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        bad(key, "wrong type");
    }
}

void check_keys(const json& j, const char* section, const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            bad(std::string(section) + "." + it.key(), "unknown key");
}

}  // namespace

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    check_keys(j, "",
               {"schema_version", "experiment", "seed", "output_dir", "emit_plotdata", "params",
                "grid", "data", "integrator", "monitor", "fit", "heat", "green", "lemma", "scan",
                "version"});
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion)
        bad("schema_version", "unsupported version");
    if (!j.contains("experiment")) bad("experiment", "missing");
    cfg.experiment = j.at("experiment").get<std::string>();
    if (!kKnownExperiments.count(cfg.experiment)) bad("experiment", "unknown experiment");
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
    cfg.output_dir = get_or<std::string>(j, "output_dir", cfg.output_dir);
    cfg.emit_plotdata = get_or<bool>(j, "emit_plotdata", cfg.emit_plotdata);

    if (j.contains("params")) {
        const json& p = j.at("params");
        check_keys(p, "params", {"mu", "lambda", "pressure_law", "gamma"});
        const double mu = get_or<double>(p, "mu", 1.0);
        const double lambda = get_or<double>(p, "lambda", 0.0);
        const std::string law = get_or<std::string>(p, "pressure_law", "linear");
        const double gamma = get_or<double>(p, "gamma", 1.4);
        if (law != "linear" && law != "gamma") bad("params.pressure_law", "must be linear|gamma");
        try {
            cfg.params = PhysParams(mu, lambda,
                                    law == "linear" ? PhysParams::PressureLaw::linear
                                                    : PhysParams::PressureLaw::gamma_law,
                                    gamma);
        } catch (const ConfigError& e) {
            bad("params", e.what());
        }
    }

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        check_keys(g, "grid", {"n", "L_over_2pi"});
        cfg.grid_n = get_or<int>(g, "n", cfg.grid_n);
        cfg.grid_L_over_2pi = get_or<double>(g, "L_over_2pi", cfg.grid_L_over_2pi);
        if (cfg.grid_n < 16 || cfg.grid_n % 2 != 0) bad("grid.n", "must be even and >= 16");
        if (!(cfg.grid_L_over_2pi > 0)) bad("grid.L_over_2pi", "must be positive");
    }

    if (j.contains("data")) {
        const json& d = j.at("data");
        check_keys(d, "data", {"recipe", "delta", "s_class", "width", "slope"});
        cfg.data_recipe = get_or<std::string>(d, "recipe", cfg.data_recipe);
        if (cfg.data_recipe != "gaussian-grad" && cfg.data_recipe != "s-tail" &&
            cfg.data_recipe != "random")
            bad("data.recipe", "must be gaussian-grad|s-tail|random");
        cfg.data_delta = get_or<double>(d, "delta", cfg.data_delta);
        if (cfg.data_delta < 0) bad("data.delta", "must be nonnegative");
        cfg.data_s_class = get_or<double>(d, "s_class", cfg.data_s_class);
        if (cfg.data_s_class < 0 || cfg.data_s_class >= 1.5)
            bad("data.s_class", "must lie in [0, 3/2)");
        cfg.data_width = get_or<double>(d, "width", cfg.data_width);
        cfg.data_slope = get_or<double>(d, "slope", cfg.data_slope);
    }

    if (j.contains("integrator")) {
        const json& i = j.at("integrator");
        check_keys(i, "integrator",
                   {"scheme", "dt", "t_end", "output_stride", "safety", "linear_only"});
        const std::string scheme = get_or<std::string>(i, "scheme", "etdrk4");
        if (scheme == "etdrk4")
            cfg.integrator.scheme = Scheme::etdrk4;
        else if (scheme == "imex-cnab2")
            cfg.integrator.scheme = Scheme::imex_cnab2;
        else
            bad("integrator.scheme", "must be etdrk4|imex-cnab2");
        cfg.integrator.dt = get_or<double>(i, "dt", 0.08);
        if (!(cfg.integrator.dt > 0)) bad("integrator.dt", "must be positive");
        cfg.integrator.t_end = get_or<double>(i, "t_end", 0.0);
        if (cfg.integrator.t_end < 0) bad("integrator.t_end", "must be nonnegative");
        cfg.integrator.output_stride = get_or<int>(i, "output_stride", 10);
        if (cfg.integrator.output_stride < 1) bad("integrator.output_stride", "must be >= 1");
        cfg.integrator.safety = get_or<double>(i, "safety", 1.0);
        if (cfg.integrator.safety <= 0 || cfg.integrator.safety > 1)
            bad("integrator.safety", "must lie in (0, 1]");
        cfg.integrator.linear_only = get_or<bool>(i, "linear_only", false);
    } else {
        cfg.integrator.dt = 0.08;
        cfg.integrator.t_end = 0.0;  // resolved to the box window at run time
    }

    // The corrected-functional weight defaults to 0.1 * delta.
    cfg.monitor.eps_cross = 0.1 * cfg.data_delta;
    if (j.contains("monitor")) {
        const json& m = j.at("monitor");
        check_keys(m, "monitor", {"N", "lm_pairs", "s_neg", "eps_cross"});
        cfg.monitor.N = get_or<int>(m, "N", 3);
        if (cfg.monitor.N < 1) bad("monitor.N", "must be >= 1");
        if (m.contains("lm_pairs")) {
            cfg.monitor.lm_pairs.clear();
            for (const auto& pr : m.at("lm_pairs")) {
                if (!pr.is_array() || pr.size() != 2) bad("monitor.lm_pairs", "need [l, m] pairs");
                cfg.monitor.lm_pairs.emplace_back(pr[0].get<int>(), pr[1].get<int>());
            }
        }
        if (m.contains("s_neg")) cfg.monitor.s_neg = m.at("s_neg").get<std::vector<double>>();
        for (double s : cfg.monitor.s_neg)
            if (s < 0 || s >= 1.5) bad("monitor.s_neg", "levels must lie in [0, 3/2)");
        cfg.monitor.eps_cross = get_or<double>(m, "eps_cross", cfg.monitor.eps_cross);
    }

    if (j.contains("fit")) {
        const json& f = j.at("fit");
        check_keys(f, "fit",
                   {"s_list", "l_list", "window_lo", "window_hi", "tol_amplitude", "n_samples"});
        if (f.contains("s_list")) cfg.fit_s_list = f.at("s_list").get<std::vector<double>>();
        if (f.contains("l_list")) cfg.fit_l_list = f.at("l_list").get<std::vector<int>>();
        cfg.fit_window_lo = get_or<double>(f, "window_lo", cfg.fit_window_lo);
        cfg.fit_window_hi = get_or<double>(f, "window_hi", cfg.fit_window_hi);
        if (cfg.fit_window_lo < 5.0) bad("fit.window_lo", "must be >= 5 (transient discard)");
        if (cfg.fit_window_hi <= cfg.fit_window_lo) bad("fit.window_hi", "must exceed window_lo");
        cfg.fit_tol_amplitude = get_or<double>(f, "tol_amplitude", cfg.fit_tol_amplitude);
        cfg.fit_n_samples = get_or<int>(f, "n_samples", cfg.fit_n_samples);
        if (cfg.fit_n_samples < 10) bad("fit.n_samples", "must be >= 10");
    }

    if (j.contains("heat")) {
        const json& h = j.at("heat");
        check_keys(h, "heat", {"l_list", "s_list"});
        if (h.contains("l_list")) cfg.heat_l_list = h.at("l_list").get<std::vector<int>>();
        if (h.contains("s_list")) cfg.heat_s_list = h.at("s_list").get<std::vector<double>>();
    }

    if (j.contains("green")) {
        const json& g = j.at("green");
        check_keys(g, "green",
                   {"xi_lo", "xi_hi", "xi_count", "t_lo", "t_hi", "t_count", "ratio_max"});
        cfg.green_xi_lo = get_or<double>(g, "xi_lo", cfg.green_xi_lo);
        cfg.green_xi_hi = get_or<double>(g, "xi_hi", cfg.green_xi_hi);
        cfg.green_xi_count = get_or<int>(g, "xi_count", cfg.green_xi_count);
        cfg.green_t_lo = get_or<double>(g, "t_lo", cfg.green_t_lo);
        cfg.green_t_hi = get_or<double>(g, "t_hi", cfg.green_t_hi);
        cfg.green_t_count = get_or<int>(g, "t_count", cfg.green_t_count);
        cfg.green_ratio_max = get_or<double>(g, "ratio_max", cfg.green_ratio_max);
        if (cfg.green_xi_count < 2 || cfg.green_t_count < 2)
            bad("green", "xi_count and t_count must be >= 2");
        if (!(cfg.green_xi_lo > 0) || cfg.green_xi_hi <= cfg.green_xi_lo)
            bad("green", "need 0 < xi_lo < xi_hi");
    }

    if (j.contains("lemma")) {
        const json& l = j.at("lemma");
        check_keys(l, "lemma", {"n", "count", "slope"});
        cfg.lemma_n = get_or<int>(l, "n", cfg.lemma_n);
        cfg.lemma_count = get_or<int>(l, "count", cfg.lemma_count);
        cfg.lemma_slope = get_or<double>(l, "slope", cfg.lemma_slope);
        if (cfg.lemma_count < 2) bad("lemma.count", "must be >= 2");
    }

    if (j.contains("scan")) {
        const json& s = j.at("scan");
        check_keys(s, "scan", {"xi_lo", "xi_hi", "count"});
        cfg.scan_xi_lo = get_or<double>(s, "xi_lo", cfg.scan_xi_lo);
        cfg.scan_xi_hi = get_or<double>(s, "xi_hi", cfg.scan_xi_hi);
        cfg.scan_count = get_or<int>(s, "count", cfg.scan_count);
        if (cfg.scan_count < 2) bad("scan.count", "must be >= 2");
    }

    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["version"] = kVersion;
    j["experiment"] = cfg.experiment;
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    j["emit_plotdata"] = cfg.emit_plotdata;
    j["params"] = {{"mu", cfg.params.mu},
                   {"lambda", cfg.params.lambda},
                   {"pressure_law", cfg.params.law_name()},
                   {"gamma", cfg.params.gamma}};
    j["grid"] = {{"n", cfg.grid_n}, {"L_over_2pi", cfg.grid_L_over_2pi}};
    j["data"] = {{"recipe", cfg.data_recipe},
                 {"delta", cfg.data_delta},
                 {"s_class", cfg.data_s_class},
                 {"width", cfg.data_width},
                 {"slope", cfg.data_slope}};
    j["integrator"] = {
        {"scheme", cfg.integrator.scheme == Scheme::etdrk4 ? "etdrk4" : "imex-cnab2"},
        {"dt", cfg.integrator.dt},
        {"t_end", cfg.integrator.t_end},
        {"output_stride", cfg.integrator.output_stride},
        {"safety", cfg.integrator.safety},
        {"linear_only", cfg.integrator.linear_only}};
    json pairs = json::array();
    for (auto [l, m] : cfg.monitor.lm_pairs) pairs.push_back({l, m});
    j["monitor"] = {{"N", cfg.monitor.N},
                    {"lm_pairs", pairs},
                    {"s_neg", cfg.monitor.s_neg},
                    {"eps_cross", cfg.monitor.eps_cross}};
    j["fit"] = {{"s_list", cfg.fit_s_list},         {"l_list", cfg.fit_l_list},
                {"window_lo", cfg.fit_window_lo},   {"window_hi", cfg.fit_window_hi},
                {"tol_amplitude", cfg.fit_tol_amplitude}, {"n_samples", cfg.fit_n_samples}};
    j["heat"] = {{"l_list", cfg.heat_l_list}, {"s_list", cfg.heat_s_list}};
    j["green"] = {{"xi_lo", cfg.green_xi_lo},   {"xi_hi", cfg.green_xi_hi},
                  {"xi_count", cfg.green_xi_count}, {"t_lo", cfg.green_t_lo},
                  {"t_hi", cfg.green_t_hi},     {"t_count", cfg.green_t_count},
                  {"ratio_max", cfg.green_ratio_max}};
    j["lemma"] = {{"n", cfg.lemma_n}, {"count", cfg.lemma_count}, {"slope", cfg.lemma_slope}};
    j["scan"] = {{"xi_lo", cfg.scan_xi_lo}, {"xi_hi", cfg.scan_xi_hi}, {"count", cfg.scan_count}};
    return j;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

void apply_override(json& j, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like key.path=value: " + spec);
    std::string path = "/" + spec.substr(0, eq);
    for (auto& c : path)
        if (c == '.') c = '/';
    const std::string value = spec.substr(eq + 1);
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception&) {
        parsed = value;  // treat as a plain string
    }
    try {
        j[json::json_pointer(path)] = parsed;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("override failed: ") + e.what());
    }
}

}  // namespace nsp
