#pragma once

#include <vector>

#include "nsp/field.hpp"
#include "nsp/norms.hpp"
#include "nsp/params.hpp"

namespace nsp {

// Density stays clear of vacuum: 1 + rho >= kVacuumGuard, a margin inside the
// a priori regime [1/2, 2].
inline constexpr double kVacuumGuard = 0.4;

// Perturbation state (rho = density - 1, u velocity). The electric field
// grad(Phi) is slaved to rho through the Poisson equation and recomputed on
// demand rather than evolved.
struct NspState {
    ScalarField rho;
    VectorField vel;
    double time = 0.0;

    NspState() = default;
    NspState(ScalarField rho_, VectorField vel_, double t = 0.0)
        : rho(std::move(rho_)), vel(std::move(vel_)), time(t) {}
    const Grid& grid() const { return rho.grid; }
};

// Tendency of (rho, u); grad(Phi) has no tendency of its own.
struct Tendency {
    ScalarField drho;
    VectorField dvel;
};

// Pointwise closures h(r) = r/(1+r) and f(r) = p'(1+r)/(1+r) - 1 evaluated on
// physical samples. Vacuum (1 + r <= 0) raises VacuumError.
std::vector<double> closure_h(const std::vector<double>& rho_pert);
std::vector<double> closure_f(const std::vector<double>& rho_pert, const PhysParams& params);

// Zero the k=0 mode, leaving every other mode untouched.
ScalarField enforce_neutrality(ScalarField rho);

// Solve Delta(Phi) = rho for grad(Phi): ghat(k) = -i k rhohat(k)/|k|^2,
// zero at k = 0. Requires a mean-zero density (NeutralityError otherwise).
VectorField poisson_solve(const ScalarField& rho);

// Right-hand side of the perturbation system:
//   d/dt rho = -div u - div(rho u)
//   d/dt u   = mu Lap u + (mu+lambda) grad div u - grad rho + grad Phi
//              - u.grad u - h(rho)(mu Lap u + (mu+lambda) grad div u)
//              - f(rho) grad rho
// Nonlinear products are formed in physical space and dealiased.
Tendency rhs(const NspState& state, const PhysParams& params);
Tendency rhs_linear(const NspState& state, const PhysParams& params);
Tendency rhs_nonlinear(const NspState& state, const PhysParams& params);

// Min over the grid of physical 1 + rho (vacuum diagnostics).
double min_density(const ScalarField& rho);

// Neutrality + vacuum-guard checks; throws on violation.
void validate_state(const NspState& state);

}  // namespace nsp
