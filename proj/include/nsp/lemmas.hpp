#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nsp/field.hpp"
#include "nsp/norms.hpp"
#include "nsp/params.hpp"

namespace nsp {

// Random band-limited ensembles for the inequality checks. Field i depends
// only on (seed, i), so growing count keeps earlier members (nested
// ensembles for the doubling-stability rule).
struct EnsembleConfig {
    int n = 32;
    double L = 2.0 * 3.14159265358979323846;
    int count = 32;
    double slope = 2.0;       // spectral decay |k|^{-slope}
    std::uint64_t seed = 1;
};

std::vector<ScalarField> make_ensemble(const EnsembleConfig& cfg);

// All m-th order partial derivatives as 3^m components (with repetition);
// Frobenius magnitudes are used consistently on both sides of the
// commutator and composition checks.
std::vector<ScalarField> tensor_derivative(const ScalarField& f, int m);

// Pointwise Frobenius magnitude of a component list.
std::vector<double> tensor_magnitude(const std::vector<ScalarField>& comps);

// Gagliardo-Nirenberg interpolation:
//   ||Lambda^alpha f||_p <= C ||Lambda^m f||_q^(1-theta) ||Lambda^l f||_r^theta,
// theta fixed by the scaling relation. Returns the max LHS/RHS over the
// ensemble; rejects index combinations whose theta falls outside [0,1].
double gn_check(const std::vector<ScalarField>& ensemble, double alpha, double m, double l,
                double p, double q, double r);

// ||nabla^l f|| <= ||nabla^{l+1} f||^{1-theta} ||f||_{Hdot^{-s}}^theta with
// theta = 1/(l+1+s): a Hoelder inequality with constant exactly 1.
double neg_interp_check(const std::vector<ScalarField>& ensemble, int l, double s);

// Riesz potential bound ||Lambda^{-s} f||_q <= C ||f||_p, 1/q = 1/p - s/3.
double hls_check(const std::vector<ScalarField>& ensemble, double s, double p);

// Commutator estimate ||[nabla^m, f] g||_p <= C(||grad f||_{p1} ||nabla^{m-1} g||_{p2}
// + ||nabla^m f||_{p3} ||g||_{p4}); fields paired as (2i, 2i+1).
struct HoelderExponents {
    double p = 2, p1 = std::numeric_limits<double>::infinity(), p2 = 2, p3 = 2,
           p4 = std::numeric_limits<double>::infinity();
};
double commutator_check(const std::vector<ScalarField>& ensemble, int m,
                        const HoelderExponents& exps = {});

// Composition bound ||nabla^m g(rho)||_inf <= C ||nabla^m rho||_inf under
// ||rho||_inf <= 1; each field is rescaled to the requested amplitude
// (amplitude > 1 is rejected as outside the hypothesis).
double composition_check(const std::vector<ScalarField>& ensemble,
                         const std::function<double(double)>& g, int m, double amplitude = 0.5);

// Doubling-stability wrapper:
// run the check at count and 2*count (nested) and compare.
struct StabilityResult {
    double value = 0.0;         // measured constant at the base count
    double value_doubled = 0.0; // at twice the count
    double rel_change = 0.0;
    bool stable = false;        // < 10% growth under doubling
};
StabilityResult stability_check(const EnsembleConfig& cfg,
                                const std::function<double(const std::vector<ScalarField>&)>& run);

}  // namespace nsp
