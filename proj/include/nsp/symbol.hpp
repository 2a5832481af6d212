#pragma once

#include <array>
#include <vector>

#include "nsp/mat2.hpp"
#include "nsp/params.hpp"

namespace nsp {

// Per-wavenumber generator of the linearized flow. The velocity splits into
// two solenoidal components decaying at -mu |xi|^2 and a longitudinal one
// coupled to the density. In the variables (rho_hat, w) with
// w = i (xi/|xi|) . u_hat the compressible block is real:
//     [ 0          -r       ]
//     [ r + 1/r    -nu r^2  ],   r = |xi|, nu = 2 mu + lambda,
// with trace -nu r^2 and determinant r^2 + 1.
struct LinearSymbol {
    std::array<double, 3> xi{};
    double r = 0.0;
    double mu = 0.0, lambda = 0.0, nu = 0.0;
    Mat2 comp;             // compressible block on (rho_hat, w)
    double heat_rate = 0;  // -mu r^2, the two solenoidal rates
    cplx lam_plus, lam_minus;

    // Full 4x4 generator acting on (rho_hat, u_hat).
    std::array<std::array<cplx, 4>, 4> full_matrix() const;
};

LinearSymbol symbol_matrix(const std::array<double, 3>& xi, const PhysParams& params);

// Radius where the compressible eigenvalues cross from complex pair to real
// pair (discriminant zero): nu^2 r^4 / 4 = r^2 + 1.
double regime_threshold_eta(const PhysParams& params);

// One Fourier mode of (rho, u).
struct ModeState {
    cplx rho{0, 0};
    std::array<cplx, 3> u{};
};

// exp(t * comp), the closed-form compressible propagator.
Mat2 comp_propagator(const LinearSymbol& sym, double t);

// Exact linear evolution of one mode (matrix exponential of the generator).
ModeState evolve_mode(const LinearSymbol& sym, const ModeState& init, double t);

// Mode-wise envelope check against the Fourier Green-function bounds:
// below eta the density envelope is exp(-(mu + lambda/2)|xi|^2 t) with data
// weight (|rho0| + |xi||u0|) and the velocity envelope exp(-mu |xi|^2 t)
// with weight (|xi|^-1 |rho0| + |u0|); above eta both are exp(-R0 t), where
// R0 is the measured spectral-abscissa bound over |xi| >= eta.
struct GreenBoundReport {
    double eta = 0.0;
    double R0 = 0.0;
    // Suprema of actual/envelope over the grids, per propagator entry.
    double small_rho_rho = 0.0, small_rho_u = 0.0, small_u_rho = 0.0, small_u_u = 0.0;
    double small_u_u_sol = 0.0;  // solenoidal branch: exact heat factor vs envelope
    double large_all = 0.0;
    std::vector<double> t_grid;
    std::vector<double> sup_ratio_by_t;  // max over entries and xi, per t
    bool trend_ok = false;               // no upward trend over the final decade of t
    double sup_all = 0.0;
};

GreenBoundReport green_bound_check(const PhysParams& params, const std::vector<double>& xi_radii,
                                   const std::vector<double>& t_grid);

}  // namespace nsp
