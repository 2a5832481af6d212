#include "nsp/monitor.hpp"

#include <algorithm>
#include <sstream>

#include "nsp/kernels.hpp"

namespace nsp {

namespace {

inline void decode(const Grid& g, std::size_t idx, int& ix, int& iy, int& iz) {
    iz = static_cast<int>(idx % g.n);
    iy = static_cast<int>((idx / g.n) % g.n);
    ix = static_cast<int>(idx / (static_cast<std::size_t>(g.n) * g.n));
}

// L^3 sum |k|^{2k} Re[ conj(rho)(1 + 1/|k|^2) drho + conj(u).du ]; the
// 1/|k|^2 term is d/dt |grad Phi|^2 /2 with grad Phi slaved to rho.
double energy_derivative(const NspState& state, const Tendency& tend, int k) {
    const Grid& g = state.grid();
    const double ku = g.k_unit();
    return g.volume() * kernels::blocked_sum(g.size(), [&](std::size_t i) {
               int ix, iy, iz;
               decode(g, i, ix, iy, iz);
               const double mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
               const double k2 = ku * ku * (mx * mx + my * my + mz * mz);
               if (k2 == 0.0) return 0.0;
               const double w = k == 0 ? 1.0 : std::pow(k2, k);
               double re = ((1.0 + 1.0 / k2) * std::conj(state.rho.c[i]) * tend.drho.c[i]).real();
               for (int d = 0; d < 3; ++d)
                   re += (std::conj(state.vel.c[d][i]) * tend.dvel.c[d][i]).real();
               return w * re;
           });
}

}  // namespace

double EnergyReport::level_value(const std::vector<double>& table, double level) const {
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (std::abs(levels[i] - level) < 1e-12) return table[i];
    throw Error("EnergyReport: level not tracked");
}

double EnergyReport::energy_k(int k) const {
    const double r = level_value(rho_h, k), u = level_value(u_h, k), p = level_value(gphi_h, k);
    return 0.5 * (r * r + u * u + p * p);
}

double EnergyReport::e_pair(int l, int m) const {
    double sum = 0.0;
    for (int k = l; k <= m; ++k) sum += 2.0 * energy_k(k);
    return sum;
}

double coercivity_ratio(const VectorField& u, const PhysParams& params, int k) {
    const double grad = hdot_sq(u, k + 1.0, ZeroMode::exclude);
    if (grad == 0.0) return 1.0;
    const double form = params.mu * grad + (params.mu + params.lambda) * div_hdot_sq(u, k);
    return form / (params.sigma0() * grad);
}

EnergyReport energy_report(const NspState& state, const PhysParams& params,
                           const EnergyRequest& request, const Tendency* tendency) {
    EnergyReport rep;
    rep.time = state.time;

    std::vector<double> neg = request.s_neg;
    std::sort(neg.begin(), neg.end(), std::greater<double>());
    for (double s : neg) rep.levels.push_back(-s);
    for (int k = 0; k <= request.N + 1; ++k) rep.levels.push_back(k);

    const VectorField gphi = poisson_solve(state.rho);
    for (double lev : rep.levels) {
        const ZeroMode zm = lev < 0 ? ZeroMode::exclude : ZeroMode::include;
        rep.rho_h.push_back(std::sqrt(hdot_sq(state.rho, lev, zm)));
        rep.u_h.push_back(std::sqrt(hdot_sq(state.vel, lev, zm)));
        rep.gphi_h.push_back(std::sqrt(hdot_sq(gphi, lev, zm)));
    }

    for (auto [l, m] : request.lm_pairs) {
        if (l < 0 || l >= m || m > request.N)
            throw ConfigError("energy_report: lm pair must satisfy 0 <= l < m <= N");
        rep.e_lm.push_back(rep.e_pair(l, m));
        double d = 0.0;
        for (int k = l; k <= m; ++k) {
            const double r = rep.level_value(rep.rho_h, k);
            d += r * r;
        }
        for (int k = l + 1; k <= m + 1; ++k) {
            const double u = rep.level_value(rep.u_h, k);
            const double p = rep.level_value(rep.gphi_h, k);
            d += u * u + p * p;
        }
        rep.d_lm.push_back(d);
    }

    for (int j = 0; j < request.N; ++j)
        rep.cross.push_back(cross_functional(state.vel, state.rho, j));

    for (std::size_t i = 0; i < request.lm_pairs.size(); ++i) {
        const auto [l, m] = request.lm_pairs[i];
        double c = 0.0;
        for (int j = l; j <= m - 1; ++j) c += rep.cross[j];
        rep.e_lm_corrected.push_back(rep.e_lm[i] + request.eps_cross * c);
    }

    for (int k = 0; k <= request.N; ++k) {
        const double u1 = rep.level_value(rep.u_h, k + 1);
        rep.visc_k.push_back(params.mu * u1 * u1 +
                             (params.mu + params.lambda) * div_hdot_sq(state.vel, k));
    }

    if (tendency) {
        for (int k = 0; k <= request.N; ++k)
            rep.residual_k.push_back(energy_derivative(state, *tendency, k) + rep.visc_k[k]);
    }

    rep.coercivity = coercivity_ratio(state.vel, params, 0);
    return rep;
}

void fill_centered_residuals(MonitorSeries& series) {
    auto& s = series.samples;
    const int n = static_cast<int>(s.size());
    if (n < 2) return;
    for (int i = 0; i < n; ++i) {
        const int lo = i == 0 ? 0 : i - 1;
        const int hi = i == n - 1 ? n - 1 : i + 1;
        const double dt = s[hi].time - s[lo].time;
        if (dt <= 0.0) continue;
        const double dedt = (s[hi].energy_k(0) - s[lo].energy_k(0)) / dt;
        s[i].residual_centered = dedt + s[i].visc_k[0];
    }
}

Verdict lyapunov_check(const MonitorSeries& series, int l, int m, bool linear_flow) {
    if (series.samples.size() < 3) throw Error("lyapunov_check: need at least 3 samples");
    Verdict v;
    if (linear_flow) {
        double worst = 0.0;  // largest relative increase between samples
        for (std::size_t i = 1; i < series.samples.size(); ++i) {
            const double prev = series.samples[i - 1].e_pair(l, m);
            const double cur = series.samples[i].e_pair(l, m);
            if (prev > 0.0) worst = std::max(worst, cur / prev - 1.0);
        }
        v.value = worst;
        v.pass = worst <= 1e-12;
        std::ostringstream os;
        os << "max relative increase of E_" << l << "^" << m << " between samples = " << worst;
        v.detail = os.str();
    } else {
        const double e0 = series.samples.front().e_pair(l, m);
        double sup = 0.0;
        for (const auto& rep : series.samples) sup = std::max(sup, rep.e_pair(l, m));
        v.value = e0 > 0.0 ? sup / e0 : (sup == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
        v.pass = v.value <= 2.0;
        std::ostringstream os;
        os << "sup_t E_" << l << "^" << m << " / E(0) = " << v.value;
        v.detail = os.str();
    }
    return v;
}

Verdict hs_negative_track(const MonitorSeries& series, double s) {
    if (s < 0.0 || s >= 1.5)
        throw Error("hs_negative_track: s must lie in [0, 3/2)");
    if (series.samples.empty()) throw Error("hs_negative_track: empty series");
    auto triple = [&](const EnergyReport& rep) {
        const double r = rep.level_value(rep.rho_h, -s);
        const double u = rep.level_value(rep.u_h, -s);
        const double p = rep.level_value(rep.gphi_h, -s);
        return std::sqrt(r * r + u * u + p * p);
    };
    const double init = triple(series.samples.front());
    double sup = 0.0;
    for (const auto& rep : series.samples) sup = std::max(sup, triple(rep));
    Verdict v;
    v.value = init > 0.0 ? sup / init : (sup == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
    v.pass = v.value <= 3.0;
    std::ostringstream os;
    os << "sup_t ||.||_{Hdot^-" << s << "} triple / initial = " << v.value;
    v.detail = os.str();
    return v;
}

}  // namespace nsp
