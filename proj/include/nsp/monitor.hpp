#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "nsp/model.hpp"

namespace nsp {

// Which functionals to track along a run.
struct EnergyRequest {
    int N = 3;                                              // top derivative order
    std::vector<std::pair<int, int>> lm_pairs = {{0, 3}, {1, 3}};
    std::vector<double> s_neg = {0.5};                      // Hdot^{-s} levels
    double eps_cross = 0.0;  // weight of the cross-corrected functional
};

// Every monitored functional at one instant. Level layout: the negative
// orders -s (sorted ascending) followed by the integers 0 .. N+1.
struct EnergyReport {
    double time = 0.0;
    std::vector<double> levels;
    std::vector<double> rho_h, u_h, gphi_h;  // Hdot^level norms (not squared)
    std::vector<double> e_lm, d_lm, e_lm_corrected;  // aligned with lm_pairs
    std::vector<double> cross;       // int nabla^j u . grad nabla^j rho, j = 0..N-1
    std::vector<double> visc_k;      // mu||nabla^{k+1}u||^2 + (mu+lambda)||nabla^k div u||^2
    std::vector<double> residual_k;  // analytic d/dt E_k + visc_k (needs a tendency)
    double residual_centered = std::numeric_limits<double>::quiet_NaN();
    double coercivity = 1.0;

    double level_value(const std::vector<double>& table, double level) const;
    // (1/2)(rho^2 + u^2 + gphi^2) at integer level k.
    double energy_k(int k) const;
    double e_pair(int l, int m) const;  // plain sum over l<=k<=m of the squares
};

// All functionals computed spectrally from the state; pass the tendency to
// also get the analytic energy-identity residuals.
EnergyReport energy_report(const NspState& state, const PhysParams& params,
                           const EnergyRequest& request, const Tendency* tendency = nullptr);

// Viscous-form coercivity against sigma0 ||nabla^{k+1} u||^2.
double coercivity_ratio(const VectorField& u, const PhysParams& params, int k = 0);

struct MonitorSeries {
    EnergyRequest request;
    std::vector<EnergyReport> samples;
};

// Centered-difference residual at the sample spacing (one-sided at the
// ends); a time-discretization diagnostic, not the acceptance residual.
void fill_centered_residuals(MonitorSeries& series);

struct Verdict {
    bool pass = false;
    double value = 0.0;
    std::string detail;
};

// Linear runs: E_l^m non-increasing at every sample. Nonlinear small-data
// runs: E_l^m(t) <= 2 E_l^m(0). Needs >= 3 samples.
Verdict lyapunov_check(const MonitorSeries& series, int l, int m, bool linear_flow);

// sup_t of the Hdot^{-s} triple norm over its initial value; pass if <= 3.
// Requires s in [0, 3/2) and the level to be tracked.
Verdict hs_negative_track(const MonitorSeries& series, double s);

}  // namespace nsp
