#pragma once

#include <functional>

#include "nsp/params.hpp"
#include "nsp/symbol.hpp"

namespace nsp {

// Radial initial data for the whole-space linear flow: |rho0_hat|(r) and the
// longitudinal velocity amplitude (gradient-type data, so the mode pair
// (rho_hat, w) is real). s_index declares the Hdot^{-s} class the profile is
// meant to represent.
struct RadialProfile {
    std::function<double(double)> density_amp;
    std::function<double(double)> velocity_amp;
    double s_index = 0.0;
};

// Sharp-class recipes. For the triple (rho, u, grad Phi) to sit exactly on
// the Hdot^{-s} boundary the density amplitude carries r^(s-1/2) and the
// velocity r^(s-3/2), both under a Gaussian cutoff.
RadialProfile gaussian_grad_profile(double s, double width = 1.0);
// Scalar "s-tail" amplitude r^(s-3/2) e^{-r^2/2} (|amp|^2 = r^(2s-3) e^{-r^2}).
std::function<double(double)> s_tail_amplitude(double s);

enum class RadialComponent { density, velocity, grad_phi, triple };

struct RadialNormOptions {
    double rel_tol = 1e-8;       // quadrature tolerance on the squared norm
    double y_min = -40.0;        // lower log-radius cutoff (IR regularization)
    bool allow_ir_regularized = false;  // return the regularized value instead
                                        // of raising on an IR-divergent integral
};

// Radial quadrature check for declared integrability: finite
// int_0^inf r^{-2s} amp(r)^2 r^2 dr; raises DivergentIntegralError otherwise.
void validate_profile(const RadialProfile& profile, double s);

// || nabla^(ell + sobolev_index) component(t) ||_{L2(R^3)} for the linear
// flow started from the profile, via 1-D quadrature in y = log r:
//   norm^2 = 4 pi int r^{2(ell+index)+2} |mode(r,t)|^2 dr.
// The integrand's infrared tail is checked; an IR-divergent request raises
// unless allow_ir_regularized is set (boundedness studies).
double radial_norm(const RadialProfile& profile, const PhysParams& params, double t, double ell,
                   double sobolev_index, RadialComponent comp, const RadialNormOptions& opt = {});

// Same machinery for the scalar heat flow (symbol -r^2): the reference model
// of the decay ladder.
double heat_norm(const std::function<double(double)>& amp, double t, double ell,
                 double sobolev_index = 0.0, const RadialNormOptions& opt = {});

// Norm series sampled with a symmetric 8-point average over one plasma
// period (pi in t). The small-|xi| modes oscillate at frequency ~2, which
// the average cancels exactly, leaving a clean power law to fit.
std::vector<double> radial_norm_series_avg(const RadialProfile& profile,
                                           const PhysParams& params,
                                           const std::vector<double>& times, double ell,
                                           RadialComponent comp,
                                           const RadialNormOptions& opt = {});

}  // namespace nsp
