#include "nsp/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "nsp/fit.hpp"
#include "nsp/kernels.hpp"
#include "nsp/lemmas.hpp"
#include "nsp/radial.hpp"
#include "nsp/symbol.hpp"

namespace nsp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    void write(const fs::path& path) const {
        std::ofstream out(path);
        for (std::size_t i = 0; i < header.size(); ++i)
            out << (i ? "," : "") << header[i];
        out << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt17(row[i]);
            out << "\n";
        }
    }
};

void write_plotdata(const fs::path& dir, const Csv& csv) {
    fs::create_directories(dir);
    for (std::size_t c = 1; c < csv.header.size(); ++c) {
        std::ofstream out(dir / (csv.header[c] + ".dat"));
        for (const auto& row : csv.rows)
            out << fmt17(row[0]) << " " << fmt17(row[c]) << "\n";
    }
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i /
                                                     static_cast<double>(n - 1));
    return out;
}

json fit_record(const std::string& name, const DecayFit& f) {
    json r;
    r["name"] = name;
    r["kind"] = "decay_fit";
    r["exponent"] = f.exponent;
    r["ci_halfwidth"] = f.ci_halfwidth;
    r["window"] = {f.t_lo, f.t_hi};
    r["n_samples"] = f.n_samples;
    if (f.has_verdict) {
        r["target"] = f.target;
        r["tol"] = f.tol;
        r["pass"] = f.pass;
    }
    return r;
}

json verdict_record(const std::string& name, bool pass, double value,
                    const std::string& detail) {
    return json{{"name", name}, {"kind", "verdict"}, {"pass", pass}, {"value", value},
                {"detail", detail}};
}

bool all_pass(const json& fits) {
    for (const auto& r : fits)
        if (r.contains("pass") && !r.at("pass").get<bool>()) return false;
    return true;
}

std::string level_name(double lev) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", lev);
    return buf;
}

// ---------------------------------------------------------------- data

ScalarField hermitian_random_field(const Grid& g, std::uint64_t seed, double slope) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> s(g.size());
    for (auto& v : s) v = gauss(rng);
    ScalarField f = to_spectral(s, g);
    const double ku = g.k_unit();
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz) {
                const int mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
                const double m2 = static_cast<double>(mx) * mx + static_cast<double>(my) * my +
                                  static_cast<double>(mz) * mz;
                cplx& c = f.at(ix, iy, iz);
                if (m2 == 0.0 || !g.in_band(mx, my, mz))
                    c = cplx{0, 0};
                else
                    c *= std::pow(ku * ku * m2, -0.5 * slope);
            }
    return f;
}

}  // namespace

NspState make_box_state(const RunConfig& cfg) {
    const Grid g = cfg.make_grid();
    NspState st{ScalarField(g), VectorField(g)};
    const double ku = g.k_unit();
    const double s = cfg.data_s_class;
    const double w = cfg.data_width;

    if (cfg.data_recipe == "gaussian-grad" || cfg.data_recipe == "s-tail") {
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                for (int iz = 0; iz < g.n; ++iz) {
                    const int mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
                    const double m2 = static_cast<double>(mx) * mx +
                                      static_cast<double>(my) * my +
                                      static_cast<double>(mz) * mz;
                    if (m2 == 0.0 || !g.in_band(mx, my, mz)) continue;
                    const double r = ku * std::sqrt(m2);
                    const std::size_t idx = g.index(ix, iy, iz);
                    if (cfg.data_recipe == "gaussian-grad") {
                        const double cut = std::exp(-0.5 * (r / w) * (r / w));
                        st.rho.c[idx] = cplx{std::pow(r, s - 0.5) * cut, 0.0};
                        const double wamp = std::pow(r, s - 1.5) * cut;
                        const double inv = 1.0 / std::sqrt(m2);
                        // u = -i khat w (gradient-type longitudinal data)
                        st.vel.c[0][idx] = cplx{0, -1} * (mx * inv * wamp);
                        st.vel.c[1][idx] = cplx{0, -1} * (my * inv * wamp);
                        st.vel.c[2][idx] = cplx{0, -1} * (mz * inv * wamp);
                    } else {  // s-tail: density-only sharp-class data
                        st.rho.c[idx] = cplx{std::pow(r, s - 1.5) * std::exp(-0.5 * r * r), 0.0};
                    }
                }
    } else {  // random
        st.rho = hermitian_random_field(g, cfg.seed, cfg.data_slope);
        for (int d = 0; d < 3; ++d)
            st.vel.c[d] = hermitian_random_field(g, cfg.seed + 1000 + d, cfg.data_slope).c;
    }

    if (cfg.data_delta == 0.0) {
        for (auto& v : st.rho.c) v = cplx{0, 0};
        for (int d = 0; d < 3; ++d)
            for (auto& v : st.vel.c[d]) v = cplx{0, 0};
        return st;
    }
    const VectorField gphi = poisson_solve(st.rho);
    double e = 0.0;
    for (int k = 0; k <= cfg.monitor.N; ++k)
        e += hdot_sq(st.rho, k) + hdot_sq(st.vel, k) + hdot_sq(gphi, k);
    const double scale = cfg.data_delta / std::sqrt(e);
    for (auto& v : st.rho.c) v *= scale;
    for (int d = 0; d < 3; ++d)
        for (auto& v : st.vel.c[d]) v *= scale;
    return st;
}

namespace {

// ---------------------------------------------------------------- heat-demo

ExperimentResult run_heat_demo(const RunConfig& cfg, const fs::path& out) {
    ExperimentResult res;
    const auto times = log_spaced(std::max(1.0, 0.5 * cfg.fit_window_lo),
                                  2.0 * cfg.fit_window_hi, cfg.fit_n_samples);
    Csv csv;
    csv.header = {"t"};
    std::vector<std::vector<double>> columns;
    for (int l : cfg.heat_l_list)
        for (double s : cfg.heat_s_list) {
            auto amp = s_tail_amplitude(s);
            RadialNormOptions opt;
            opt.allow_ir_regularized = (l + s) < 0.125;
            std::vector<double> series(times.size());
            for (std::size_t i = 0; i < times.size(); ++i)
                series[i] = heat_norm(amp, times[i], l, 0.0, opt);
            DecayFit fit = fit_power_law(times, series, cfg.fit_window_lo, cfg.fit_window_hi);
            compare(fit, -(l + s), 2.0 * cfg.fit_tol_amplitude);
            char name[64];
            std::snprintf(name, sizeof name, "heat_l%d_s%s", l, level_name(s).c_str());
            res.fits.push_back(fit_record(name, fit));
            csv.header.push_back(name);
            columns.push_back(std::move(series));
        }
    csv.rows.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        csv.rows[i].push_back(times[i]);
        for (const auto& col : columns) csv.rows[i].push_back(col[i]);
    }
    csv.write(out / "norms.csv");
    if (cfg.emit_plotdata) write_plotdata(out / "plotdata", csv);
    res.exit_code = all_pass(res.fits) ? 0 : 1;
    return res;
}

// ------------------------------------------------------------ linear-decay

ExperimentResult run_linear_decay(const RunConfig& cfg, const fs::path& out) {
    ExperimentResult res;
    const auto times =
        log_spaced(5.0, 1.5 * cfg.fit_window_hi, cfg.fit_n_samples);
    Csv csv;
    csv.header = {"t"};
    std::vector<std::vector<double>> columns;
    for (double s : cfg.fit_s_list) {
        RadialProfile prof = gaussian_grad_profile(s, 1.0);
        for (int l : cfg.fit_l_list) {
            struct Piece {
                RadialComponent comp;
                const char* tag;
                double target_sq;  // squared-norm exponent
            };
            const Piece pieces[2] = {
                {RadialComponent::velocity, "u", -(l + s)},
                {RadialComponent::density, "rho", -(l + s + 1.0)},
            };
            double fitted[2] = {0, 0};
            for (const Piece& piece : pieces) {
                RadialNormOptions opt;
                opt.allow_ir_regularized = std::abs(piece.target_sq) < 0.125;
                auto series =
                    radial_norm_series_avg(prof, cfg.params, times, l, piece.comp, opt);
                DecayFit fit =
                    fit_power_law(times, series, cfg.fit_window_lo, cfg.fit_window_hi);
                compare(fit, piece.target_sq, 2.0 * cfg.fit_tol_amplitude);
                char name[64];
                std::snprintf(name, sizeof name, "nsp_%s_l%d_s%s", piece.tag, l,
                              level_name(s).c_str());
                res.fits.push_back(fit_record(name, fit));
                fitted[piece.comp == RadialComponent::velocity ? 0 : 1] = fit.exponent;
                csv.header.push_back(name);
                columns.push_back(std::move(series));
            }
            // Electric-field effect: density amplitude exponent minus the
            // velocity one equals -1/2.
            const double gap = 0.5 * (fitted[1] - fitted[0]);
            char gname[64];
            std::snprintf(gname, sizeof gname, "gap_l%d_s%s", l, level_name(s).c_str());
            res.fits.push_back(verdict_record(
                gname, std::abs(gap + 0.5) <= cfg.fit_tol_amplitude, gap,
                "density minus velocity amplitude exponent (target -1/2)"));
        }
    }
    csv.rows.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        csv.rows[i].push_back(times[i]);
        for (const auto& col : columns) csv.rows[i].push_back(col[i]);
    }
    csv.write(out / "norms.csv");
    if (cfg.emit_plotdata) write_plotdata(out / "plotdata", csv);
    res.exit_code = all_pass(res.fits) ? 0 : 1;
    return res;
}

// ------------------------------------------------------------ green-bounds

ExperimentResult run_green_bounds(const RunConfig& cfg, const fs::path& out) {
    ExperimentResult res;
    auto radii = log_spaced(cfg.green_xi_lo, cfg.green_xi_hi, cfg.green_xi_count);
    std::vector<double> times = log_spaced(cfg.green_t_lo, cfg.green_t_hi, cfg.green_t_count);
    times.insert(times.begin(), 0.0);
    GreenBoundReport rep = green_bound_check(cfg.params, radii, times);

    Csv csv;
    csv.header = {"t", "sup_ratio"};
    for (std::size_t i = 0; i < rep.t_grid.size(); ++i)
        csv.rows.push_back({rep.t_grid[i], rep.sup_ratio_by_t[i]});
    csv.write(out / "norms.csv");
    if (cfg.emit_plotdata) write_plotdata(out / "plotdata", csv);

    res.fits.push_back(verdict_record("green_sup_ratio", rep.sup_all <= cfg.green_ratio_max,
                                      rep.sup_all, "sup of actual/envelope over both grids"));
    res.fits.push_back(verdict_record("green_trend", rep.trend_ok, rep.sup_all,
                                      "no upward trend over the final decade of t"));
    res.fits.push_back(
        verdict_record("green_R0_positive", rep.R0 > 0.0, rep.R0, "measured high-frequency rate"));
    res.fits.push_back(json{{"name", "green_eta"}, {"kind", "constant"}, {"value", rep.eta}});
    res.fits.push_back(json{{"name", "green_entry_sups"},
                            {"kind", "constant"},
                            {"rho_rho", rep.small_rho_rho},
                            {"rho_u", rep.small_rho_u},
                            {"u_rho", rep.small_u_rho},
                            {"u_u", rep.small_u_u},
                            {"u_u_sol", rep.small_u_u_sol},
                            {"large", rep.large_all}});
    res.exit_code = all_pass(res.fits) ? 0 : 1;
    return res;
}

// ---------------------------------------------------------------- simulate

ExperimentResult run_simulate(const RunConfig& cfg, const fs::path& out) {
    ExperimentResult res;
    const Grid g = cfg.make_grid();
    NspState st = make_box_state(cfg);

    IntegratorConfig icfg = cfg.integrator;
    if (icfg.t_end <= 0.0) icfg.t_end = g.t_max();
    icfg.checkpoint_dir = out.string();

    TrajectorySummary sum = integrate(st, icfg, cfg.params, cfg.monitor);

    // norms.csv: the Sobolev table per sample.
    Csv norms;
    norms.header = {"t"};
    if (!sum.series.samples.empty()) {
        for (double lev : sum.series.samples.front().levels) {
            norms.header.push_back("rho_hdot_" + level_name(lev));
            norms.header.push_back("u_hdot_" + level_name(lev));
            norms.header.push_back("gphi_hdot_" + level_name(lev));
        }
        for (const auto& rep : sum.series.samples) {
            std::vector<double> row{rep.time};
            for (std::size_t i = 0; i < rep.levels.size(); ++i) {
                row.push_back(rep.rho_h[i]);
                row.push_back(rep.u_h[i]);
                row.push_back(rep.gphi_h[i]);
            }
            norms.rows.push_back(std::move(row));
        }
    }
    norms.write(out / "norms.csv");

    // energy.csv: functionals, dissipations, residuals.
    Csv energy;
    energy.header = {"t"};
    for (auto [l, m] : cfg.monitor.lm_pairs) {
        energy.header.push_back("E_" + std::to_string(l) + "_" + std::to_string(m));
        energy.header.push_back("D_" + std::to_string(l) + "_" + std::to_string(m));
        energy.header.push_back("Ecorr_" + std::to_string(l) + "_" + std::to_string(m));
    }
    for (int j = 0; j < cfg.monitor.N; ++j) energy.header.push_back("cross_" + std::to_string(j));
    energy.header.push_back("visc_0");
    energy.header.push_back("residual_analytic_0");
    energy.header.push_back("residual_centered_0");
    energy.header.push_back("coercivity");
    for (const auto& rep : sum.series.samples) {
        std::vector<double> row{rep.time};
        for (std::size_t i = 0; i < cfg.monitor.lm_pairs.size(); ++i) {
            row.push_back(rep.e_lm[i]);
            row.push_back(rep.d_lm[i]);
            row.push_back(rep.e_lm_corrected[i]);
        }
        for (int j = 0; j < cfg.monitor.N; ++j) row.push_back(rep.cross[j]);
        row.push_back(rep.visc_k[0]);
        row.push_back(rep.residual_k.empty() ? 0.0 : rep.residual_k[0]);
        row.push_back(rep.residual_centered);
        row.push_back(rep.coercivity);
        energy.rows.push_back(std::move(row));
    }
    energy.write(out / "energy.csv");
    if (cfg.emit_plotdata) write_plotdata(out / "plotdata", norms);

    if (sum.aborted) {
        res.exit_code = 2;
        res.message = "run aborted: " + sum.abort_reason + " (checkpoint: " +
                      sum.checkpoint_path + ")";
        res.fits.push_back(verdict_record("run_completed", false, 0.0, res.message));
        return res;
    }

    const bool zero_data = cfg.data_delta == 0.0;
    for (auto [l, m] : cfg.monitor.lm_pairs) {
        Verdict v = lyapunov_check(sum.series, l, m, icfg.linear_only);
        res.fits.push_back(verdict_record(
            "lyapunov_E" + std::to_string(l) + "_" + std::to_string(m), v.pass, v.value,
            v.detail));
    }
    for (double s : cfg.monitor.s_neg) {
        if (zero_data) {
            res.fits.push_back(verdict_record("hs_track_s" + level_name(s), true, 1.0,
                                              "zero data: trivially bounded"));
            continue;
        }
        Verdict v = hs_negative_track(sum.series, s);
        res.fits.push_back(verdict_record("hs_track_s" + level_name(s), v.pass, v.value,
                                          v.detail));
    }
    // Mass drift and residual summaries.
    const double mass = std::abs(sum.final_state.rho.zero_mode());
    res.fits.push_back(verdict_record("mass_drift", mass <= 1e-12, mass,
                                      "|mean rho| at t_end"));
    double rms = 0.0, rel = 0.0;
    int count = 0;
    for (const auto& rep : sum.series.samples) {
        if (rep.residual_k.empty()) continue;
        rms += rep.residual_k[0] * rep.residual_k[0];
        const double e0 = rep.energy_k(0);
        if (e0 > 0.0) rel = std::max(rel, std::abs(rep.residual_k[0]) / e0);
        ++count;
    }
    rms = count ? std::sqrt(rms / count) : 0.0;
    res.fits.push_back(json{{"name", "identity_residual_rms_k0"},
                            {"kind", "constant"},
                            {"value", rms},
                            {"max_relative", rel}});
    res.fits.push_back(json{{"name", "final_time"},
                            {"kind", "constant"},
                            {"value", sum.final_state.time}});
    res.exit_code = all_pass(res.fits) ? 0 : 1;
    return res;
}

// -------------------------------------------------------------- lemma-suite

ExperimentResult run_lemma_suite(const RunConfig& cfg, const fs::path& out) {
    ExperimentResult res;
    EnsembleConfig ecfg;
    ecfg.n = cfg.lemma_n;
    ecfg.count = cfg.lemma_count;
    ecfg.slope = cfg.lemma_slope;
    ecfg.seed = cfg.seed;

    auto record = [&](const std::string& name, const StabilityResult& r, bool extra_ok = true,
                      const std::string& note = "") {
        json rec{{"name", name},
                 {"kind", "lemma"},
                 {"value", r.value},
                 {"value_doubled", r.value_doubled},
                 {"rel_change", r.rel_change},
                 {"stable", r.stable},
                 {"pass", r.stable && extra_ok}};
        if (!note.empty()) rec["detail"] = note;
        res.fits.push_back(rec);
    };

    record("gn_sobolev_embedding", stability_check(ecfg, [](const auto& e) {
               return gn_check(e, 0.0, 0.0, 1.0, 6.0, 2.0, 2.0);
           }));
    {
        StabilityResult r = stability_check(
            ecfg, [](const auto& e) { return neg_interp_check(e, 1, 0.5); });
        record("neg_interp", r, r.value_doubled <= 1.0 + 1e-10,
               "Hoelder inequality with constant exactly 1");
    }
    record("hls_riesz", stability_check(ecfg, [](const auto& e) {
               return hls_check(e, 1.0, 1.2);
           }));
    record("commutator_m2", stability_check(ecfg, [](const auto& e) {
               return commutator_check(e, 2);
           }));
    record("composition_h", stability_check(ecfg, [](const auto& e) {
               return composition_check(e, [](double r) { return r / (1.0 + r); }, 1, 0.5);
           }));
    const PhysParams params = cfg.params;
    record("composition_f", stability_check(ecfg, [&params](const auto& e) {
               return composition_check(
                   e,
                   [&params](double r) { return params.dpressure(1.0 + r) / (1.0 + r) - 1.0; },
                   1, 0.5);
           }));

    // Commutator with constant f vanishes identically.
    {
        auto ens = make_ensemble(ecfg);
        ScalarField constf(ens.front().grid);
        constf.c[0] = cplx{2.0, 0.0};
        double worst = 0.0;
        for (std::size_t i = 0; i < std::min<std::size_t>(4, ens.size()); ++i) {
            std::vector<ScalarField> pair{constf, ens[i]};
            worst = std::max(worst, commutator_check(pair, 2));
        }
        res.fits.push_back(verdict_record("commutator_constant_f", worst < 1e-12, worst,
                                          "|[nabla^2, const] g| over the pair norm"));
    }

    (void)out;
    res.exit_code = all_pass(res.fits) ? 0 : 1;
    return res;
}

// -------------------------------------------------------------- symbol-scan

ExperimentResult run_symbol_scan(const RunConfig& cfg, const fs::path& out) {
    ExperimentResult res;
    auto radii = log_spaced(cfg.scan_xi_lo, cfg.scan_xi_hi, cfg.scan_count);
    Csv csv;
    csv.header = {"xi", "re_lam_plus", "im_lam_plus", "re_lam_minus", "im_lam_minus",
                  "heat_rate", "trace_residual", "det_residual"};
    const double eta = regime_threshold_eta(cfg.params);
    double sup_re = -std::numeric_limits<double>::infinity();
    bool stable = true;
    double worst_tr = 0.0, worst_det = 0.0;
    for (double r : radii) {
        LinearSymbol sym = symbol_matrix({r, 0.0, 0.0}, cfg.params);
        const double tr_res =
            std::abs(sym.lam_plus + sym.lam_minus + cplx{sym.nu * r * r, 0});
        const double det_res = std::abs(sym.lam_plus * sym.lam_minus - cplx{r * r + 1.0, 0});
        worst_tr = std::max(worst_tr, tr_res / (1.0 + sym.nu * r * r));
        worst_det = std::max(worst_det, det_res / (1.0 + r * r));
        if (sym.lam_plus.real() >= 0 || sym.lam_minus.real() >= 0) stable = false;
        if (r >= eta)
            sup_re = std::max({sup_re, sym.lam_plus.real(), sym.lam_minus.real(),
                               sym.heat_rate});
        csv.rows.push_back({r, sym.lam_plus.real(), sym.lam_plus.imag(), sym.lam_minus.real(),
                            sym.lam_minus.imag(), sym.heat_rate, tr_res, det_res});
    }
    csv.write(out / "norms.csv");
    if (cfg.emit_plotdata) write_plotdata(out / "plotdata", csv);
    res.fits.push_back(json{{"name", "eta"}, {"kind", "constant"}, {"value", eta}});
    res.fits.push_back(verdict_record("spectral_abscissa_negative", stable, sup_re,
                                      "Re(lambda) < 0 for all scanned xi"));
    if (std::isfinite(sup_re))
        res.fits.push_back(json{{"name", "R0_measured"}, {"kind", "constant"},
                                {"value", -sup_re}});
    res.fits.push_back(verdict_record("trace_det_identities",
                                      worst_tr < 1e-12 && worst_det < 1e-12,
                                      std::max(worst_tr, worst_det),
                                      "relative trace/det residuals"));
    res.exit_code = all_pass(res.fits) ? 0 : 1;
    return res;
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& cfg) {
    const fs::path out(cfg.output_dir);
    fs::create_directories(out);
    {
        std::ofstream manifest(out / "manifest.json");
        manifest << config_to_json(cfg).dump(2) << "\n";
    }
    ExperimentResult res;
    if (cfg.experiment == "heat-demo")
        res = run_heat_demo(cfg, out);
    else if (cfg.experiment == "linear-decay")
        res = run_linear_decay(cfg, out);
    else if (cfg.experiment == "green-bounds")
        res = run_green_bounds(cfg, out);
    else if (cfg.experiment == "simulate")
        res = run_simulate(cfg, out);
    else if (cfg.experiment == "lemma-suite")
        res = run_lemma_suite(cfg, out);
    else if (cfg.experiment == "symbol-scan")
        res = run_symbol_scan(cfg, out);
    else
        throw ConfigError("unknown experiment: " + cfg.experiment);

    std::ofstream fits(out / "fits.json");
    fits << res.fits.dump(2) << "\n";
    return res;
}

}  // namespace nsp
