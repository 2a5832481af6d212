#include "nsp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "nsp/field.hpp"
#include "nsp/kernels.hpp"

namespace nsp::fft {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    aligned_vector<cplx> scratch;  // planning buffer, kept alive with the plan
};

std::mutex g_mutex;
std::map<int, PlanPair>& cache() {
    static std::map<int, PlanPair> c;
    return c;
}

PlanPair& plans_for(int n) {
    std::lock_guard<std::mutex> lock(g_mutex);
    auto& c = cache();
    auto it = c.find(n);
    if (it != c.end()) return it->second;
    PlanPair& p = c[n];
    p.scratch.assign(static_cast<std::size_t>(n) * n * n, cplx{0.0, 0.0});
    auto* buf = reinterpret_cast<fftw_complex*>(p.scratch.data());
    const unsigned flags = n >= 64 ? FFTW_MEASURE : FFTW_ESTIMATE;
    p.fwd = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, flags);
    p.bwd = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, flags);
    return p;
}

}  // namespace

void forward(const Grid& g, cplx* data) {
    PlanPair& p = plans_for(g.n);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p.fwd, buf, buf);
    const double scale = 1.0 / static_cast<double>(g.size());
    kernels::parallel_for(g.size(), [&](std::size_t i) { data[i] *= scale; });
}

void inverse(const Grid& g, cplx* data) {
    PlanPair& p = plans_for(g.n);
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p.bwd, buf, buf);
}

}  // namespace nsp::fft
