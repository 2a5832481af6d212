#pragma once

#include <complex>

#include "nsp/grid.hpp"

namespace nsp {

// Thin wrapper around FFTW c2c 3-D transforms with a process-wide plan cache.
// Plan creation is serialized internally; execution on distinct arrays is safe
// from concurrent workers (new-array execute). Buffers must come from
// aligned_vector (64-byte alignment, matching the plan's scratch).
namespace fft {

// samples -> coefficients of f(x) = sum_k fhat(k) exp(i k.x); in place,
// includes the 1/n^3 normalization.
void forward(const Grid& g, std::complex<double>* data);

// coefficients -> samples; in place, no normalization.
void inverse(const Grid& g, std::complex<double>* data);

}  // namespace fft

}  // namespace nsp
