#include "nsp/field.hpp"

#include <cmath>
#include <sstream>

#include "nsp/fft.hpp"
#include "nsp/kernels.hpp"

namespace nsp {

namespace {

inline void decode(const Grid& g, std::size_t idx, int& ix, int& iy, int& iz) {
    iz = static_cast<int>(idx % g.n);
    iy = static_cast<int>((idx / g.n) % g.n);
    ix = static_cast<int>(idx / (static_cast<std::size_t>(g.n) * g.n));
}

void check_finite(const std::vector<double>& samples, const char* what) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) {
            std::ostringstream os;
            os << what << ": non-finite sample at flat index " << i;
            throw Error(os.str());
        }
    }
}

}  // namespace

ScalarField to_spectral(const std::vector<double>& samples, const Grid& g) {
    if (samples.size() != g.size()) throw Error("to_spectral: sample count != n^3");
    check_finite(samples, "to_spectral");
    ScalarField f(g);
    kernels::parallel_for(g.size(), [&](std::size_t i) { f.c[i] = cplx{samples[i], 0.0}; });
    fft::forward(g, f.c.data());
    return f;
}

VectorField to_spectral(const std::array<std::vector<double>, 3>& samples, const Grid& g) {
    VectorField u(g);
    for (int d = 0; d < 3; ++d) {
        if (samples[d].size() != g.size()) throw Error("to_spectral: sample count != n^3");
        check_finite(samples[d], "to_spectral");
        kernels::parallel_for(g.size(),
                              [&](std::size_t i) { u.c[d][i] = cplx{samples[d][i], 0.0}; });
        fft::forward(g, u.c[d].data());
    }
    return u;
}

std::vector<double> to_physical(const ScalarField& f) {
    aligned_vector<cplx> buf(f.c);
    fft::inverse(f.grid, buf.data());
    std::vector<double> out(f.grid.size());
    kernels::parallel_for(f.grid.size(), [&](std::size_t i) { out[i] = buf[i].real(); });
    return out;
}

std::array<std::vector<double>, 3> to_physical(const VectorField& u) {
    std::array<std::vector<double>, 3> out;
    for (int d = 0; d < 3; ++d) {
        aligned_vector<cplx> buf(u.c[d]);
        fft::inverse(u.grid, buf.data());
        out[d].resize(u.grid.size());
        kernels::parallel_for(u.grid.size(), [&](std::size_t i) { out[d][i] = buf[i].real(); });
    }
    return out;
}

void dealias(ScalarField& f) {
    const Grid& g = f.grid;
    kernels::parallel_for(g.size(), [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        if (!g.in_band(g.freq(ix), g.freq(iy), g.freq(iz))) f.c[idx] = cplx{0.0, 0.0};
    });
}

void dealias(VectorField& u) {
    const Grid& g = u.grid;
    kernels::parallel_for(g.size(), [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        if (!g.in_band(g.freq(ix), g.freq(iy), g.freq(iz)))
            for (int d = 0; d < 3; ++d) u.c[d][idx] = cplx{0.0, 0.0};
    });
}

namespace {

// Shared multiplier loop; `apply` maps (idx, m-value) onto the output.
template <class Apply>
void multiplier_loop(const Grid& g, const std::function<cplx(double, double, double)>& m,
                     cplx zero_mode_value, Apply&& apply) {
    const double ku = g.k_unit();
    // Validation pass first so errors fire before any output is produced.
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        if (ix == 0 && iy == 0 && iz == 0) continue;
        const double kx = ku * g.freq(ix), ky = ku * g.freq(iy), kz = ku * g.freq(iz);
        const cplx v = m(kx, ky, kz);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os << "apply_multiplier: non-finite multiplier at wavevector (" << kx << ", " << ky
               << ", " << kz << ")";
            throw Error(os.str());
        }
    }
    kernels::parallel_for(g.size(), [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        if (ix == 0 && iy == 0 && iz == 0) {
            apply(idx, zero_mode_value);
            return;
        }
        const double kx = ku * g.freq(ix), ky = ku * g.freq(iy), kz = ku * g.freq(iz);
        apply(idx, m(kx, ky, kz));
    });
}

}  // namespace

ScalarField apply_multiplier(const ScalarField& f,
                             const std::function<cplx(double, double, double)>& m,
                             cplx zero_mode_value) {
    ScalarField out(f.grid);
    multiplier_loop(f.grid, m, zero_mode_value,
                    [&](std::size_t idx, cplx v) { out.c[idx] = v * f.c[idx]; });
    return out;
}

VectorField apply_multiplier(const VectorField& f,
                             const std::function<cplx(double, double, double)>& m,
                             cplx zero_mode_value) {
    VectorField out(f.grid);
    multiplier_loop(f.grid, m, zero_mode_value, [&](std::size_t idx, cplx v) {
        for (int d = 0; d < 3; ++d) out.c[d][idx] = v * f.c[d][idx];
    });
    return out;
}

ScalarField lambda_s(const ScalarField& f, double s) {
    return apply_multiplier(
        f, [s](double kx, double ky, double kz) {
            return cplx{std::pow(kx * kx + ky * ky + kz * kz, 0.5 * s), 0.0};
        },
        cplx{0.0, 0.0});
}

VectorField lambda_s(const VectorField& f, double s) {
    return apply_multiplier(
        f, [s](double kx, double ky, double kz) {
            return cplx{std::pow(kx * kx + ky * ky + kz * kz, 0.5 * s), 0.0};
        },
        cplx{0.0, 0.0});
}

VectorField gradient(const ScalarField& f) {
    const Grid& g = f.grid;
    VectorField out(g);
    const double ku = g.k_unit();
    kernels::parallel_for(g.size(), [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        const cplx ic = cplx{0.0, 1.0} * f.c[idx];
        out.c[0][idx] = ku * g.freq(ix) * ic;
        out.c[1][idx] = ku * g.freq(iy) * ic;
        out.c[2][idx] = ku * g.freq(iz) * ic;
    });
    return out;
}

ScalarField divergence(const VectorField& u) {
    const Grid& g = u.grid;
    ScalarField out(g);
    const double ku = g.k_unit();
    kernels::parallel_for(g.size(), [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        const cplx kdotu = ku * (static_cast<double>(g.freq(ix)) * u.c[0][idx] +
                                 static_cast<double>(g.freq(iy)) * u.c[1][idx] +
                                 static_cast<double>(g.freq(iz)) * u.c[2][idx]);
        out.c[idx] = cplx{0.0, 1.0} * kdotu;
    });
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    ScalarField out(f.grid);
    const Grid& g = f.grid;
    const double ku2 = g.k_unit() * g.k_unit();
    kernels::parallel_for(g.size(), [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        const double m2 = static_cast<double>(g.freq(ix)) * g.freq(ix) +
                          static_cast<double>(g.freq(iy)) * g.freq(iy) +
                          static_cast<double>(g.freq(iz)) * g.freq(iz);
        out.c[idx] = -ku2 * m2 * f.c[idx];
    });
    return out;
}

VectorField laplacian(const VectorField& u) {
    VectorField out(u.grid);
    const Grid& g = u.grid;
    const double ku2 = g.k_unit() * g.k_unit();
    kernels::parallel_for(g.size(), [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        const double m2 = static_cast<double>(g.freq(ix)) * g.freq(ix) +
                          static_cast<double>(g.freq(iy)) * g.freq(iy) +
                          static_cast<double>(g.freq(iz)) * g.freq(iz);
        for (int d = 0; d < 3; ++d) out.c[d][idx] = -ku2 * m2 * u.c[d][idx];
    });
    return out;
}

HelmholtzParts helmholtz_split(const VectorField& u) {
    const Grid& g = u.grid;
    HelmholtzParts parts{VectorField(g), VectorField(g)};
    kernels::parallel_for(g.size(), [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        const double mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
        const double m2 = mx * mx + my * my + mz * mz;
        if (m2 == 0.0) {
            for (int d = 0; d < 3; ++d) {
                parts.compressible.c[d][idx] = cplx{0.0, 0.0};
                parts.solenoidal.c[d][idx] = u.c[d][idx];
            }
            return;
        }
        const cplx kdotu = mx * u.c[0][idx] + my * u.c[1][idx] + mz * u.c[2][idx];
        const cplx scale = kdotu / m2;
        const double m[3] = {mx, my, mz};
        for (int d = 0; d < 3; ++d) {
            parts.compressible.c[d][idx] = m[d] * scale;
            parts.solenoidal.c[d][idx] = u.c[d][idx] - m[d] * scale;
        }
    });
    return parts;
}

double hermitian_defect(const ScalarField& f) {
    const Grid& g = f.grid;
    double worst = 0.0;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz) {
                const int jx = ix == 0 ? 0 : g.n - ix;
                const int jy = iy == 0 ? 0 : g.n - iy;
                const int jz = iz == 0 ? 0 : g.n - iz;
                const cplx d = f.at(jx, jy, jz) - std::conj(f.at(ix, iy, iz));
                worst = std::max(worst, std::abs(d));
            }
    return worst;
}

}  // namespace nsp
