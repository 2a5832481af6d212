#include "nsp/fit.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

namespace nsp {

DecayFit fit_power_law(const std::vector<double>& times, const std::vector<double>& norms,
                       double t_lo, double t_hi) {
    if (times.size() != norms.size()) throw Error("fit_power_law: length mismatch");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (!(norms[i] > 0.0)) throw Error("fit_power_law: nonpositive norm inside window");
        x.push_back(std::log1p(times[i]));
        y.push_back(2.0 * std::log(norms[i]));
    }
    const int n = static_cast<int>(x.size());
    if (n < 10) throw Error("fit_power_law: fewer than 10 samples in the window");

    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error("fit_power_law: degenerate time window");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        rss += r * r;
    }
    DecayFit fit;
    fit.exponent = slope;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.n_samples = n;
    if (n > 2) {
        const double se = std::sqrt(rss / (n - 2) / sxx);
        boost::math::students_t dist(n - 2);
        fit.ci_halfwidth = boost::math::quantile(dist, 0.975) * se;
    }
    return fit;
}

DecayFit& compare(DecayFit& fit, double target, double tol) {
    fit.has_verdict = true;
    fit.target = target;
    fit.tol = tol;
    // Closed tolerance with a hair of slack so |diff| == tol passes in
    // floating point.
    fit.pass = std::abs(fit.exponent - target) <= tol * (1.0 + 1e-12) + 1e-15;
    return fit;
}

namespace {

void check_ranges(Quantity q, int ell, double s, int N) {
    if (s < 0.0 || s >= 1.5)
        throw Error("theory_target: s must lie in [0, 3/2)");
    if (ell < 0) throw Error("theory_target: ell must be nonnegative");
    const int ell_max = q == Quantity::density_l2 ? N - 2 : N - 1;
    if (q != Quantity::density_linf && q != Quantity::velocity_linf && ell > ell_max)
        throw Error("theory_target: ell out of the theorem's range for this quantity");
}

}  // namespace

double theory_target_s(Quantity q, int ell, double s, int N) {
    check_ranges(q, ell, s, N);
    switch (q) {
        case Quantity::triple_sobolev:
        case Quantity::velocity:
        case Quantity::grad_phi: return -(ell + s);
        case Quantity::density_l2: return -(ell + s + 1.0);
        case Quantity::density_linf: {
            const double p = 1.0 / (s / 3.0 + 0.5);
            return -(3.0 / p + 1.0);
        }
        case Quantity::velocity_linf: {
            const double p = 1.0 / (s / 3.0 + 0.5);
            return -3.0 / p;
        }
    }
    throw Error("theory_target: unknown quantity");
}

double theory_target_p(Quantity q, int ell, double p, int N) {
    if (p <= 1.0 || p > 2.0) throw Error("theory_target: p must lie in (1, 2]");
    return theory_target_s(q, ell, s_from_p(p), N);
}

double sigma_pl(double p, int ell) {
    if (p <= 1.0 || p > 2.0) throw Error("sigma_pl: p must lie in (1, 2]");
    return 1.5 * (1.0 / p - 0.5) + 0.5 * ell;
}

double s_from_p(double p) {
    if (p <= 1.0 || p > 2.0) throw Error("s_from_p: p must lie in (1, 2]");
    return 3.0 * (1.0 / p - 0.5);
}

}  // namespace nsp
