#pragma once

#include <cstddef>
#include <numbers>

#include "nsp/errors.hpp"

namespace nsp {

// Uniform periodic cube [0,L)^3 with n points per axis, standing in for R^3.
// Wavevectors are k = (2*pi/L) * m with integer m in [-n/2, n/2-1] per axis.
struct Grid {
    int n = 0;
    double L = 0.0;

    Grid() = default;
    Grid(int n_, double L_) : n(n_), L(L_) {
        if (n < 16 || n % 2 != 0) throw ConfigError("Grid: n must be even and >= 16");
        if (!(L > 0.0)) throw ConfigError("Grid: L must be positive");
    }

    std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }

    std::size_t index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(ix) * n + iy) * n + iz;
    }

    // Integer frequency of axis index i, in [-n/2, n/2-1].
    int freq(int i) const { return i <= n / 2 - 1 ? i : i - n; }

    // Smallest nonzero wavenumber magnitude.
    double k_unit() const { return 2.0 * std::numbers::pi / L; }

    // Spherical 2/3-rule cutoff: integer modes with m^2 > dealias radius^2 are
    // zeroed after every nonlinear product.
    double dealias_radius() const { return n / 3.0; }
    bool in_band(int mx, int my, int mz) const {
        const double r = dealias_radius();
        return static_cast<double>(mx) * mx + static_cast<double>(my) * my +
                   static_cast<double>(mz) * mz <=
               r * r + 1e-9;
    }

    // Largest wavenumber magnitude inside the dealias band.
    double k_band_max() const { return k_unit() * dealias_radius(); }

    // Time window over which the box mimics whole-space algebraic decay before
    // the spectral gap of the smallest mode takes over.
    double t_max() const {
        const double a = L / (2.0 * std::numbers::pi);
        return a * a / 4.0;
    }

    double cell_volume() const { return (L / n) * (L / n) * (L / n); }
    double volume() const { return L * L * L; }

    bool operator==(const Grid&) const = default;
};

}  // namespace nsp
