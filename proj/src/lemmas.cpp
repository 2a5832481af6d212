#include "nsp/lemmas.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "nsp/kernels.hpp"

namespace nsp {

namespace {

ScalarField product(const ScalarField& a, const ScalarField& b) {
    auto pa = to_physical(a);
    auto pb = to_physical(b);
    std::vector<double> prod(pa.size());
    kernels::parallel_for(prod.size(), [&](std::size_t i) { prod[i] = pa[i] * pb[i]; });
    ScalarField out = to_spectral(prod, a.grid);
    dealias(out);
    return out;
}

ScalarField partial(const ScalarField& f, int axis) {
    const Grid& g = f.grid;
    ScalarField out(g);
    const double ku = g.k_unit();
    kernels::parallel_for(g.size(), [&](std::size_t idx) {
        const int iz = static_cast<int>(idx % g.n);
        const int iy = static_cast<int>((idx / g.n) % g.n);
        const int ix = static_cast<int>(idx / (static_cast<std::size_t>(g.n) * g.n));
        const int m[3] = {g.freq(ix), g.freq(iy), g.freq(iz)};
        out.c[idx] = cplx{0.0, ku * m[axis]} * f.c[idx];
    });
    return out;
}

double lp_of_values(std::vector<double> mag, const Grid& g, double p) {
    if (std::isinf(p))
        return kernels::blocked_max(mag.size(), [&](std::size_t i) { return std::abs(mag[i]); });
    const double sum = kernels::blocked_sum(
        mag.size(), [&](std::size_t i) { return std::pow(std::abs(mag[i]), p); });
    return std::pow(g.cell_volume() * sum, 1.0 / p);
}

double tensor_lp(const std::vector<ScalarField>& comps, double p) {
    auto mag = tensor_magnitude(comps);
    return lp_of_values(std::move(mag), comps.front().grid, p);
}

void require_mean_zero(const ScalarField& f, const char* what) {
    const double scale = std::sqrt(hdot_sq(f, 0.0, ZeroMode::exclude));
    if (std::abs(f.zero_mode()) > 1e-12 * (scale + 1e-300))
        throw Error(std::string(what) + ": field must have zero mean");
}

}  // namespace

std::vector<ScalarField> make_ensemble(const EnsembleConfig& cfg) {
    Grid g(cfg.n, cfg.L);
    std::vector<ScalarField> out;
    out.reserve(cfg.count);
    for (int i = 0; i < cfg.count; ++i) {
        std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 0x2545F4914F6CDD1DULL * (i + 1));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> s(g.size());
        for (auto& v : s) v = gauss(rng);
        ScalarField f = to_spectral(s, g);
        const double ku = g.k_unit();
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                for (int iz = 0; iz < g.n; ++iz) {
                    const int mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
                    const double m2 = static_cast<double>(mx) * mx +
                                      static_cast<double>(my) * my +
                                      static_cast<double>(mz) * mz;
                    cplx& c = f.at(ix, iy, iz);
                    if (m2 == 0.0 || !g.in_band(mx, my, mz)) {
                        c = cplx{0, 0};
                    } else {
                        c *= std::pow(ku * ku * m2, -0.5 * cfg.slope);
                    }
                }
        const double l2 = std::sqrt(hdot_sq(f, 0.0, ZeroMode::exclude));
        for (auto& v : f.c) v *= 1.0 / l2;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<ScalarField> tensor_derivative(const ScalarField& f, int m) {
    std::vector<ScalarField> cur{f};
    for (int step = 0; step < m; ++step) {
        std::vector<ScalarField> next;
        next.reserve(cur.size() * 3);
        for (const auto& comp : cur)
            for (int axis = 0; axis < 3; ++axis) next.push_back(partial(comp, axis));
        cur = std::move(next);
    }
    return cur;
}

std::vector<double> tensor_magnitude(const std::vector<ScalarField>& comps) {
    const Grid& g = comps.front().grid;
    std::vector<std::vector<double>> phys;
    phys.reserve(comps.size());
    for (const auto& c : comps) phys.push_back(to_physical(c));
    std::vector<double> mag(g.size());
    kernels::parallel_for(mag.size(), [&](std::size_t i) {
        double s = 0.0;
        for (const auto& p : phys) s += p[i] * p[i];
        mag[i] = std::sqrt(s);
    });
    return mag;
}

double gn_check(const std::vector<ScalarField>& ensemble, double alpha, double m, double l,
                double p, double q, double r) {
    if (ensemble.empty()) throw Error("gn_check: empty ensemble");
    if (m < 0 || alpha < 0 || m > l || alpha > l)
        throw Error("gn_check: indices must satisfy 0 <= m, alpha <= l");
    // Scaling relation: alpha/3 - 1/p = (m/3 - 1/q)(1-theta) + (l/3 - 1/r) theta.
    const double lhs = alpha / 3.0 - 1.0 / p;
    const double base = m / 3.0 - 1.0 / q;
    const double den = (l - m) / 3.0 + 1.0 / q - 1.0 / r;
    if (std::abs(den) < 1e-14)
        throw Error("gn_check: scaling relation degenerate (theta undetermined)");
    const double theta = (lhs - base) / den;
    if (theta < -1e-12 || theta > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "gn_check: scaling relation requires theta = " << theta << ", outside [0, 1]";
        throw Error(os.str());
    }
    double worst = 0.0;
    for (const auto& f : ensemble) {
        const double num = norm(lambda_s(f, alpha), NormRequest::lp(p));
        const double da = norm(lambda_s(f, m), NormRequest::lp(q));
        const double db = norm(lambda_s(f, l), NormRequest::lp(r));
        const double den_v = std::pow(da, 1.0 - theta) * std::pow(db, theta);
        if (den_v > 0.0) worst = std::max(worst, num / den_v);
    }
    return worst;
}

double neg_interp_check(const std::vector<ScalarField>& ensemble, int l, double s) {
    if (s < 0.0 || l < 0) throw Error("neg_interp_check: need s >= 0 and l >= 0");
    const double theta = 1.0 / (l + 1.0 + s);
    double worst = 0.0;
    for (const auto& f : ensemble) {
        require_mean_zero(f, "neg_interp_check");
        const double num = std::sqrt(hdot_sq(f, static_cast<double>(l), ZeroMode::exclude));
        const double hi = std::sqrt(hdot_sq(f, l + 1.0, ZeroMode::exclude));
        const double lo = std::sqrt(hdot_sq(f, -s, ZeroMode::exclude));
        const double den = std::pow(hi, 1.0 - theta) * std::pow(lo, theta);
        if (den > 0.0) worst = std::max(worst, num / den);
    }
    return worst;
}

double hls_check(const std::vector<ScalarField>& ensemble, double s, double p) {
    if (!(s > 0.0 && s < 3.0)) throw Error("hls_check: need 0 < s < 3");
    const double invq = 1.0 / p - s / 3.0;
    if (!(p > 1.0) || !(invq > 0.0))
        throw Error("hls_check: need 1 < p < q < infinity with 1/q = 1/p - s/3");
    const double q = 1.0 / invq;
    double worst = 0.0;
    for (const auto& f : ensemble) {
        require_mean_zero(f, "hls_check");
        const double num = norm(lambda_s(f, -s), NormRequest::lp(q));
        const double den = norm(f, NormRequest::lp(p));
        if (den > 0.0) worst = std::max(worst, num / den);
    }
    return worst;
}

double commutator_check(const std::vector<ScalarField>& ensemble, int m,
                        const HoelderExponents& e) {
    if (m < 1) throw Error("commutator_check: m must be >= 1");
    if (ensemble.size() < 2) throw Error("commutator_check: need at least one pair");
    auto inv = [](double p) { return std::isinf(p) ? 0.0 : 1.0 / p; };
    if (std::abs(inv(e.p) - inv(e.p1) - inv(e.p2)) > 1e-12 ||
        std::abs(inv(e.p) - inv(e.p3) - inv(e.p4)) > 1e-12)
        throw Error("commutator_check: Hoelder exponent relation violated");

    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < ensemble.size(); i += 2) {
        const ScalarField& f = ensemble[i];
        const ScalarField& g = ensemble[i + 1];
        // [nabla^m, f] g = nabla^m(fg) - f nabla^m g, component-wise over the
        // order-m derivative tensor, with every product dealiased.
        const ScalarField fg = product(f, g);
        auto t_fg = tensor_derivative(fg, m);
        auto t_g = tensor_derivative(g, m);
        std::vector<ScalarField> comm;
        comm.reserve(t_fg.size());
        for (std::size_t c = 0; c < t_fg.size(); ++c) {
            ScalarField term = product(f, t_g[c]);
            ScalarField diff(f.grid);
            for (std::size_t j = 0; j < diff.c.size(); ++j)
                diff.c[j] = t_fg[c].c[j] - term.c[j];
            comm.push_back(std::move(diff));
        }
        const double lhs = tensor_lp(comm, e.p);
        const double rhs = tensor_lp(tensor_derivative(f, 1), e.p1) *
                               tensor_lp(tensor_derivative(g, m - 1), e.p2) +
                           tensor_lp(tensor_derivative(f, m), e.p3) *
                               tensor_lp({g}, e.p4);
        if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
    }
    return worst;
}

double composition_check(const std::vector<ScalarField>& ensemble,
                         const std::function<double(double)>& g, int m, double amplitude) {
    if (m < 1) throw Error("composition_check: m must be >= 1");
    if (amplitude > 1.0)
        throw Error("composition_check: ||rho||_inf must be <= 1 (lemma hypothesis)");
    double worst = 0.0;
    for (const auto& f : ensemble) {
        auto phys = to_physical(f);
        const double maxabs =
            kernels::blocked_max(phys.size(), [&](std::size_t i) { return std::abs(phys[i]); });
        const double scale = amplitude / maxabs;
        std::vector<double> rho(phys.size()), grho(phys.size());
        kernels::parallel_for(phys.size(), [&](std::size_t i) {
            rho[i] = scale * phys[i];
            grho[i] = g(rho[i]);
        });
        ScalarField rho_f = to_spectral(rho, f.grid);
        ScalarField comp_f = to_spectral(grho, f.grid);
        const double num = lp_of_values(tensor_magnitude(tensor_derivative(comp_f, m)), f.grid,
                                        std::numeric_limits<double>::infinity());
        const double den = lp_of_values(tensor_magnitude(tensor_derivative(rho_f, m)), f.grid,
                                        std::numeric_limits<double>::infinity());
        if (den > 0.0) worst = std::max(worst, num / den);
    }
    return worst;
}

StabilityResult stability_check(
    const EnsembleConfig& cfg,
    const std::function<double(const std::vector<ScalarField>&)>& run) {
    StabilityResult res;
    res.value = run(make_ensemble(cfg));
    EnsembleConfig doubled = cfg;
    doubled.count = 2 * cfg.count;
    res.value_doubled = run(make_ensemble(doubled));
    res.rel_change = res.value > 0.0 ? (res.value_doubled - res.value) / res.value : 0.0;
    res.stable = res.rel_change < 0.10;
    return res;
}

}  // namespace nsp
