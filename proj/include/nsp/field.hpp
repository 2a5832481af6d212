#pragma once

#include <array>
#include <complex>
#include <cstdlib>
#include <functional>
#include <new>
#include <vector>

#include "nsp/grid.hpp"

namespace nsp {

using cplx = std::complex<double>;

// 64-byte aligned storage so FFTW plans and SIMD kernels see one alignment.
template <class T>
struct AlignedAllocator {
    using value_type = T;
    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) {}
    T* allocate(std::size_t n) {
        if (n == 0) return nullptr;
        void* p = std::aligned_alloc(64, ((n * sizeof(T) + 63) / 64) * 64);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) { std::free(p); }
    template <class U>
    bool operator==(const AlignedAllocator<U>&) const { return true; }
};

template <class T>
using aligned_vector = std::vector<T, AlignedAllocator<T>>;

// Real scalar field on the periodic grid, held as complex Fourier
// coefficients with Hermitian symmetry c(-k) = conj(c(k)).
struct ScalarField {
    Grid grid;
    aligned_vector<cplx> c;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(g), c(g.size(), cplx{0.0, 0.0}) {}

    cplx& at(int ix, int iy, int iz) { return c[grid.index(ix, iy, iz)]; }
    const cplx& at(int ix, int iy, int iz) const { return c[grid.index(ix, iy, iz)]; }
    cplx zero_mode() const { return c.empty() ? cplx{} : c[0]; }
};

// Real 3-vector field, one coefficient cube per component.
struct VectorField {
    Grid grid;
    std::array<aligned_vector<cplx>, 3> c;

    VectorField() = default;
    explicit VectorField(const Grid& g) : grid(g) {
        for (auto& comp : c) comp.assign(g.size(), cplx{0.0, 0.0});
    }
};

// Physical-sample <-> spectral conversions. to_spectral rejects non-finite
// samples with a diagnostic naming the first offending index.
ScalarField to_spectral(const std::vector<double>& samples, const Grid& g);
VectorField to_spectral(const std::array<std::vector<double>, 3>& samples, const Grid& g);
std::vector<double> to_physical(const ScalarField& f);
std::array<std::vector<double>, 3> to_physical(const VectorField& f);

// Zero every coefficient outside the 2/3 dealias sphere.
void dealias(ScalarField& f);
void dealias(VectorField& f);

// Coefficient-wise multiplier application. The functor receives the physical
// wavevector (kx,ky,kz); its value at nonzero wavevectors must be finite
// (error names the wavevector otherwise). The k=0 coefficient is multiplied
// by the caller-supplied zero_mode_value.
ScalarField apply_multiplier(const ScalarField& f,
                             const std::function<cplx(double, double, double)>& m,
                             cplx zero_mode_value);
VectorField apply_multiplier(const VectorField& f,
                             const std::function<cplx(double, double, double)>& m,
                             cplx zero_mode_value);

// |k|^s multiplier (Lambda^s); zero mode always mapped to zero.
ScalarField lambda_s(const ScalarField& f, double s);
VectorField lambda_s(const VectorField& f, double s);

// Spectral differential operators.
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& u);

// Mode-wise Helmholtz projection: compressible (gradient) part and
// solenoidal remainder; the k=0 mode is assigned to the solenoidal part.
struct HelmholtzParts {
    VectorField compressible;
    VectorField solenoidal;
};
HelmholtzParts helmholtz_split(const VectorField& u);

// Max |c(-k) - conj(c(k))| over the grid; diagnostic for tests.
double hermitian_defect(const ScalarField& f);

}  // namespace nsp
