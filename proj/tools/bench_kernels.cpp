// Timing comparison of the OpenMP kernels against the serial reference
// path: multiplier application, Parseval reductions, pointwise products,
// per-mode propagator application, and a batched FFT round trip.
#include <chrono>
#include <cstdio>
#include <numbers>
#include <random>

#include "nsp/fft.hpp"
#include "nsp/field.hpp"
#include "nsp/integrator.hpp"
#include "nsp/kernels.hpp"
#include "nsp/norms.hpp"

using namespace nsp;
using clock_type = std::chrono::steady_clock;

namespace {

double time_ms(int reps, auto&& fn) {
    fn();  // warm up (plans, caches)
    const auto t0 = clock_type::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = clock_type::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 64;
    Grid g(n, 2 * std::numbers::pi);
    PhysParams params;

    std::mt19937_64 rng(1);
    std::normal_distribution<double> gauss(0.0, 0.01);  // clear of the vacuum guard
    std::vector<double> samples(g.size());
    for (auto& v : samples) v = gauss(rng);
    ScalarField f = to_spectral(samples, g);
    f.c[0] = cplx{0.0, 0.0};
    VectorField u(g);
    for (int d = 0; d < 3; ++d) u.c[d] = f.c;
    NspState state{f, u};
    PropagatorTable table(g, params, 0.05, Scheme::etdrk4);

    struct Bench {
        const char* name;
        std::function<void()> fn;
        int reps;
    };
    double sink = 0.0;
    ScalarField rho_out(g);
    VectorField u_out(g);
    std::vector<Bench> benches = {
        {"lambda_s multiplier", [&] { sink += lambda_s(f, 1.0).c[1].real(); }, 10},
        {"hdot_sq reduction", [&] { sink += hdot_sq(u, 2.0); }, 20},
        {"linf physical norm", [&] { sink += norm(f, NormRequest::linf()); }, 10},
        {"propagator apply",
         [&] {
             table.apply(PropagatorTable::Coeff::E, state.rho, state.vel, rho_out, u_out, false);
             sink += rho_out.c[1].real();
         },
         10},
        {"nonlinear rhs", [&] { sink += rhs_nonlinear(state, params).drho.c[1].real(); }, 3},
    };

    std::printf("%-22s %12s %12s %8s   (n = %d, %zu modes)\n", "kernel", "serial ms",
                "openmp ms", "speedup", n, g.size());
    for (auto& b : benches) {
        kernels::set_parallel(false);
        const double t_serial = time_ms(b.reps, b.fn);
        kernels::set_parallel(true);
        const double t_par = time_ms(b.reps, b.fn);
        std::printf("%-22s %12.3f %12.3f %8.2fx\n", b.name, t_serial, t_par,
                    t_serial / t_par);
    }
    std::printf("(checksum %g)\n", sink);
    return 0;
}
