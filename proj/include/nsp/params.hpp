#pragma once

#include <cmath>
#include <string>

#include "nsp/errors.hpp"

namespace nsp {

// Fluid parameters of the compressible Navier-Stokes-Poisson system.
// Viscosities obey mu > 0, lambda + 2mu/3 >= 0; the pressure law is smooth
// with p'(1) = 1 (checked at construction).
struct PhysParams {
    enum class PressureLaw { linear, gamma_law };

    double mu = 1.0;
    double lambda = 0.0;
    PressureLaw law = PressureLaw::linear;
    double gamma = 1.4;  // only for gamma_law: p(rho) = rho^gamma / gamma

    PhysParams() = default;
    PhysParams(double mu_, double lambda_, PressureLaw law_ = PressureLaw::linear,
               double gamma_ = 1.4)
        : mu(mu_), lambda(lambda_), law(law_), gamma(gamma_) {
        validate();
    }

    void validate() const {
        if (!(mu > 0.0)) throw ConfigError("PhysParams: mu must be positive");
        if (lambda + 2.0 * mu / 3.0 < 0.0)
            throw ConfigError("PhysParams: lambda + 2mu/3 must be nonnegative");
        if (law == PressureLaw::gamma_law && !(gamma > 0.0))
            throw ConfigError("PhysParams: gamma must be positive");
        if (std::abs(dpressure(1.0) - 1.0) > 1e-12)
            throw ConfigError("PhysParams: pressure law must satisfy p'(1) = 1");
    }

    double pressure(double rho) const {
        return law == PressureLaw::linear ? rho : std::pow(rho, gamma) / gamma;
    }
    double dpressure(double rho) const {
        return law == PressureLaw::linear ? 1.0 : std::pow(rho, gamma - 1.0);
    }

    // Compressible viscosity 2mu + lambda.
    double nu() const { return 2.0 * mu + lambda; }

    // Coercivity constant of the viscous form: mu||grad u||^2 +
    // (mu+lambda)||div u||^2 >= sigma0 ||grad u||^2, sharp over the
    // Helmholtz split.
    double sigma0() const { return std::min(mu, nu()); }

    std::string law_name() const {
        return law == PressureLaw::linear ? "linear" : "gamma";
    }
};

}  // namespace nsp
