#pragma once

#include <vector>

#include "nsp/errors.hpp"

namespace nsp {

// Power-law fit of a norm time series: ordinary least squares of
// 2*log(norm) against log(1+t), so `exponent` is the squared-norm exponent.
struct DecayFit {
    double exponent = 0.0;
    double ci_halfwidth = 0.0;  // 95% half-width on the slope
    double t_lo = 0.0, t_hi = 0.0;
    int n_samples = 0;
    // Filled by compare():
    bool has_verdict = false;
    double target = 0.0;
    double tol = 0.0;
    bool pass = false;
};

DecayFit fit_power_law(const std::vector<double>& times, const std::vector<double>& norms,
                       double t_lo, double t_hi);

// Closed tolerance: |exponent - target| <= tol passes.
DecayFit& compare(DecayFit& fit, double target, double tol);

// Theoretical squared-norm exponents for the linear decay ladder:
//   triple/velocity/grad_phi in H^{N-ell}:  -(ell + s)
//   density in L2:                          -(ell + s + 1)
//   density in Linf:                        -(3/p + 1)   (amplitude -3/(2p) - 1/2)
//   velocity or grad_phi in Linf:           -3/p
// s in [0, 3/2); equivalently p in (1, 2] with s = 3(1/p - 1/2).
enum class Quantity { triple_sobolev, velocity, grad_phi, density_l2, density_linf, velocity_linf };

double theory_target_s(Quantity q, int ell, double s, int N = 3);
double theory_target_p(Quantity q, int ell, double p, int N = 3);

// sigma_{p,ell} = (3/2)(1/p - 1/2) + ell/2, the amplitude rate of the
// Lp-to-L2 corollary; s_from_p is the Riesz-potential embedding index.
double sigma_pl(double p, int ell);
double s_from_p(double p);

}  // namespace nsp
