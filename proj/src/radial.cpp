#include "nsp/radial.hpp"

#include <cmath>
#include <numbers>

#include "nsp/quadrature.hpp"

namespace nsp {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Upper log-radius limit: beyond r ~ 20 every Gaussian-type profile here is
// below 1e-170 in squared amplitude.
constexpr double kYMax = 3.0;

struct TailSplit {
    double main = 0.0;
    double tail = 0.0;  // mass in [y_min - 10, y_min]
};

TailSplit integrate_with_tail(const std::function<double(double)>& integrand_y, double y_min,
                              double rel_tol) {
    TailSplit out;
    out.main = integrate_gk(integrand_y, y_min, kYMax, rel_tol).value;
    out.tail = integrate_gk(integrand_y, y_min - 10.0, y_min, 1e-6,
                            1e-14 * std::abs(out.main) + 1e-300)
                   .value;
    return out;
}

double finalize(const TailSplit& split, const RadialNormOptions& opt, const char* what) {
    if (split.tail > 1e-8 * split.main && !opt.allow_ir_regularized)
        throw DivergentIntegralError(std::string(what) +
                                     ": integral diverges at r -> 0 for these indices");
    return std::sqrt(kFourPi * split.main);
}

}  // namespace

RadialProfile gaussian_grad_profile(double s, double width) {
    RadialProfile p;
    p.s_index = s;
    p.density_amp = [s, width](double r) {
        return std::pow(r, s - 0.5) * std::exp(-0.5 * (r / width) * (r / width));
    };
    p.velocity_amp = [s, width](double r) {
        return std::pow(r, s - 1.5) * std::exp(-0.5 * (r / width) * (r / width));
    };
    return p;
}

std::function<double(double)> s_tail_amplitude(double s) {
    return [s](double r) { return std::pow(r, s - 1.5) * std::exp(-0.5 * r * r); };
}

void validate_profile(const RadialProfile& profile, double s) {
    RadialNormOptions opt;
    auto check = [&](const std::function<double(double)>& amp, const char* name) {
        auto integrand = [&](double y) {
            const double r = std::exp(y);
            const double a = amp(r);
            return std::pow(r, -2.0 * s) * a * a * r * r * r;  // extra r from dr = r dy
        };
        TailSplit split = integrate_with_tail(integrand, opt.y_min, 1e-8);
        if (split.tail > 1e-8 * split.main)
            throw DivergentIntegralError(std::string("validate_profile: ") + name +
                                         " amplitude is not in Hdot^{-s} for s = " +
                                         std::to_string(s));
    };
    check(profile.density_amp, "density");
    check(profile.velocity_amp, "velocity");
}

double radial_norm(const RadialProfile& profile, const PhysParams& params, double t, double ell,
                   double sobolev_index, RadialComponent comp, const RadialNormOptions& opt) {
    const double q = ell + sobolev_index;
    if (q <= -1.5)
        throw DivergentIntegralError("radial_norm: ell + index must exceed -3/2");
    auto integrand = [&](double y) {
        const double r = std::exp(y);
        const LinearSymbol sym = symbol_matrix({r, 0.0, 0.0}, params);
        cplx rho{profile.density_amp(r), 0.0};
        cplx w{profile.velocity_amp(r), 0.0};
        comp_propagator(sym, t).apply(rho, w);
        double mode2 = 0.0;
        switch (comp) {
            case RadialComponent::density: mode2 = std::norm(rho); break;
            case RadialComponent::velocity: mode2 = std::norm(w); break;
            case RadialComponent::grad_phi: mode2 = std::norm(rho) / (r * r); break;
            case RadialComponent::triple:
                mode2 = std::norm(rho) * (1.0 + 1.0 / (r * r)) + std::norm(w);
                break;
        }
        return std::pow(r, 2.0 * q + 2.0) * mode2 * r;  // extra r from dr = r dy
    };
    TailSplit split = integrate_with_tail(integrand, opt.y_min, opt.rel_tol);
    return finalize(split, opt, "radial_norm");
}

double heat_norm(const std::function<double(double)>& amp, double t, double ell,
                 double sobolev_index, const RadialNormOptions& opt) {
    if (t < 0.0) throw Error("heat_norm: t must be nonnegative");
    const double q = ell + sobolev_index;
    if (q <= -1.5) throw DivergentIntegralError("heat_norm: ell + index must exceed -3/2");
    auto integrand = [&](double y) {
        const double r = std::exp(y);
        const double mode = std::exp(-r * r * t) * amp(r);
        return std::pow(r, 2.0 * q + 2.0) * mode * mode * r;
    };
    TailSplit split = integrate_with_tail(integrand, opt.y_min, opt.rel_tol);
    return finalize(split, opt, "heat_norm");
}

std::vector<double> radial_norm_series_avg(const RadialProfile& profile,
                                           const PhysParams& params,
                                           const std::vector<double>& times, double ell,
                                           RadialComponent comp, const RadialNormOptions& opt) {
    constexpr int kPhases = 8;
    const double period = std::numbers::pi;
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        double sum = 0.0;
        for (int j = 0; j < kPhases; ++j) {
            const double t = times[i] + (j - 0.5 * (kPhases - 1)) * period / kPhases;
            const double v = radial_norm(profile, params, std::max(t, 0.0), ell, 0.0, comp, opt);
            sum += v * v;
        }
        out[i] = std::sqrt(sum / kPhases);
    }
    return out;
}

}  // namespace nsp
