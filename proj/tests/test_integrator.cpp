#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nsp/integrator.hpp"
#include "nsp/symbol.hpp"

using namespace nsp;
namespace {

constexpr double pi = std::numbers::pi;

// Band-limited random state with amplitude delta (triple H^3 norm).
NspState random_state(const Grid& g, double delta, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto field = [&]() {
        std::vector<double> s(g.size());
        for (auto& v : s) v = gauss(rng);
        ScalarField f = to_spectral(s, g);
        // Smooth spectrum so high derivatives stay tame.
        const double ku = g.k_unit();
        for (int ix = 0; ix < g.n; ++ix)
            for (int iy = 0; iy < g.n; ++iy)
                for (int iz = 0; iz < g.n; ++iz) {
                    const double mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
                    const double k2 = ku * ku * (mx * mx + my * my + mz * mz);
                    f.at(ix, iy, iz) *= std::exp(-2.0 * k2);
                }
        dealias(f);
        f.c[0] = cplx{0, 0};
        return f;
    };
    NspState st;
    st.rho = field();
    st.vel = VectorField(g);
    for (int d = 0; d < 3; ++d) st.vel.c[d] = field().c;

    const VectorField gphi = poisson_solve(st.rho);
    double e = 0.0;
    for (int k = 0; k <= 3; ++k)
        e += hdot_sq(st.rho, k) + hdot_sq(st.vel, k) + hdot_sq(gphi, k);
    const double scale = delta / std::sqrt(e);
    for (auto& v : st.rho.c) v *= scale;
    for (int d = 0; d < 3; ++d)
        for (auto& v : st.vel.c[d]) v *= scale;
    return st;
}

double state_dist(const NspState& a, const NspState& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rho.c.size(); ++i) acc += std::norm(a.rho.c[i] - b.rho.c[i]);
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < a.vel.c[d].size(); ++i)
            acc += std::norm(a.vel.c[d][i] - b.vel.c[d][i]);
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("equilibrium is a fixed point to machine precision") {
    Grid g(16, 2 * pi);
    PhysParams params;
    NspState zero{ScalarField(g), VectorField(g)};
    for (Scheme sch : {Scheme::etdrk4, Scheme::imex_cnab2}) {
        IntegratorConfig cfg;
        cfg.scheme = sch;
        cfg.dt = 0.05;
        Integrator stepper(cfg, params, g);
        NspState out = stepper.step(zero);
        CHECK(norm(out.rho, NormRequest::lp(2)) == 0.0);
        CHECK(norm(out.vel, NormRequest::lp(2)) == 0.0);
        CHECK(out.time == doctest::Approx(0.05));
    }
}

TEST_CASE("linear-only ETDRK4 step equals the exact mode exponential") {
    Grid g(16, 2 * pi);
    PhysParams params(0.8, 0.3);
    IntegratorConfig cfg;
    cfg.dt = 0.1;
    cfg.linear_only = true;
    Integrator stepper(cfg, params, g);

    NspState st{ScalarField(g), VectorField(g)};
    const int mx = 2, my = -1, mz = 1;
    const int ix = (mx + g.n) % g.n, iy = (my + g.n) % g.n, iz = (mz + g.n) % g.n;
    const cplx rv{0.4, 0.1};
    const std::array<cplx, 3> uv = {cplx{0.2, -0.3}, cplx{-0.1, 0.5}, cplx{0.7, 0.2}};
    st.rho.at(ix, iy, iz) = rv;
    st.rho.at((g.n - ix) % g.n, (g.n - iy) % g.n, (g.n - iz) % g.n) = std::conj(rv);
    for (int d = 0; d < 3; ++d) {
        st.vel.c[d][g.index(ix, iy, iz)] = uv[d];
        st.vel.c[d][g.index((g.n - ix) % g.n, (g.n - iy) % g.n, (g.n - iz) % g.n)] =
            std::conj(uv[d]);
    }
    NspState out = stepper.step(st);

    const double ku = g.k_unit();
    LinearSymbol sym = symbol_matrix({ku * mx, ku * my, ku * mz}, params);
    ModeState exact = evolve_mode(sym, ModeState{rv, uv}, cfg.dt);
    CHECK(std::abs(out.rho.at(ix, iy, iz) - exact.rho) < 1e-13);
    for (int d = 0; d < 3; ++d)
        CHECK(std::abs(out.vel.c[d][g.index(ix, iy, iz)] - exact.u[d]) < 1e-13);
}

TEST_CASE("integrate with t_end=0 returns the initial state") {
    Grid g(16, 2 * pi);
    PhysParams params;
    NspState st = random_state(g, 1e-2, 3);
    IntegratorConfig cfg;
    cfg.t_end = 0.0;
    EnergyRequest req;
    TrajectorySummary sum = integrate(st, cfg, params, req);
    CHECK(state_dist(sum.final_state, st) == 0.0);
    CHECK(sum.series.samples.size() == 1);
}

TEST_CASE("linear-only integrate matches mode-wise exponentials at t_end") {
    Grid g(16, 4 * pi);
    PhysParams params(1.0, 0.0);
    NspState st = random_state(g, 0.1, 7);
    IntegratorConfig cfg;
    cfg.dt = 0.1;
    cfg.t_end = 2.0;
    cfg.linear_only = true;
    EnergyRequest req;
    TrajectorySummary sum = integrate(st, cfg, params, req);

    const double ku = g.k_unit();
    double worst = 0.0;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz) {
                const int mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
                if (mx == 0 && my == 0 && mz == 0) continue;
                LinearSymbol sym =
                    symbol_matrix({ku * mx, ku * my, ku * mz}, params);
                ModeState init{st.rho.at(ix, iy, iz),
                               {st.vel.c[0][g.index(ix, iy, iz)],
                                st.vel.c[1][g.index(ix, iy, iz)],
                                st.vel.c[2][g.index(ix, iy, iz)]}};
                ModeState exact = evolve_mode(sym, init, 2.0);
                worst = std::max(worst,
                                 std::abs(sum.final_state.rho.at(ix, iy, iz) - exact.rho));
                for (int d = 0; d < 3; ++d)
                    worst = std::max(worst, std::abs(sum.final_state.vel.c[d][g.index(
                                                         ix, iy, iz)] -
                                                     exact.u[d]));
            }
    CHECK(worst < 1e-11);
}

TEST_CASE("ETDRK4 self-convergence on the nonlinear system is fourth order") {
    Grid g(16, 2 * pi);
    PhysParams params;
    NspState st = random_state(g, 0.05, 11);
    auto run = [&](double dt) {
        IntegratorConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 0.4;
        cfg.output_stride = 1 << 20;
        EnergyRequest req;
        return integrate(st, cfg, params, req).final_state;
    };
    NspState s1 = run(0.1), s2 = run(0.05), s3 = run(0.025);
    const double e1 = state_dist(s1, s2);
    const double e2 = state_dist(s2, s3);
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.5);
    CHECK(order < 4.8);
}

TEST_CASE("IMEX-CNAB2 self-convergence is at least second order") {
    Grid g(16, 2 * pi);
    PhysParams params;
    NspState st = random_state(g, 0.05, 13);
    auto run = [&](double dt) {
        IntegratorConfig cfg;
        cfg.scheme = Scheme::imex_cnab2;
        cfg.dt = dt;
        cfg.t_end = 0.4;
        cfg.output_stride = 1 << 20;
        EnergyRequest req;
        return integrate(st, cfg, params, req).final_state;
    };
    NspState s1 = run(0.05), s2 = run(0.025), s3 = run(0.0125);
    const double e1 = state_dist(s1, s2);
    const double e2 = state_dist(s2, s3);
    const double order = std::log2(e1 / e2);
    CHECK(order > 1.8);
}

TEST_CASE("mass stays exactly zero along a nonlinear run") {
    Grid g(16, 2 * pi);
    PhysParams params;
    NspState st = random_state(g, 0.02, 17);
    IntegratorConfig cfg;
    cfg.dt = 0.05;
    cfg.t_end = 1.0;
    cfg.output_stride = 4;
    EnergyRequest req;
    TrajectorySummary sum = integrate(st, cfg, params, req);
    CHECK_FALSE(sum.aborted);
    CHECK(std::abs(sum.final_state.rho.zero_mode()) <= 1e-12);
}

TEST_CASE("dt above the oscillation bound is rejected") {
    Grid g(16, 2 * pi);
    PhysParams params;
    NspState st = random_state(g, 0.01, 19);
    IntegratorConfig cfg;
    cfg.dt = 10.0;
    cfg.t_end = 20.0;
    CHECK_THROWS_AS(integrate(st, cfg, params, EnergyRequest{}), ConfigError);
    CHECK(max_dt_allowed(g, params, st, 1.0) > 0.0);
}

TEST_CASE("vacuum breach aborts and serializes the last good state") {
    Grid g(16, 2 * pi);
    PhysParams params;
    // Large-amplitude density: the first nonlinear evaluation trips the
    // vacuum guard.
    NspState st = random_state(g, 0.02, 23);
    std::vector<double> s(g.size());
    const double h = g.L / g.n;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz)
                s[g.index(ix, iy, iz)] = -0.9 * std::cos(ix * h);
    st.rho = to_spectral(s, g);
    IntegratorConfig cfg;
    cfg.dt = 0.05;
    cfg.t_end = 1.0;
    cfg.checkpoint_dir = "ckpt_test_dir";
    EnergyRequest req;
    TrajectorySummary sum = integrate(st, cfg, params, req);
    CHECK(sum.aborted);
    CHECK(sum.abort_reason.find("vacuum") != std::string::npos);
    CHECK(std::filesystem::exists(sum.checkpoint_path));

    Checkpoint back = read_checkpoint(sum.checkpoint_path);
    CHECK(back.state.grid().n == g.n);
    CHECK(state_dist(back.state, sum.final_state) == 0.0);
    std::filesystem::remove_all("ckpt_test_dir");
}

TEST_CASE("checkpoint round trip is bit exact") {
    Grid g(16, 2 * pi);
    PhysParams params(1.2, -0.4, PhysParams::PressureLaw::gamma_law, 1.4);
    NspState st = random_state(g, 0.03, 29);
    st.time = 4.25;
    write_checkpoint("roundtrip.ckpt", st, params);
    Checkpoint back = read_checkpoint("roundtrip.ckpt");
    CHECK(state_dist(back.state, st) == 0.0);
    CHECK(back.state.time == st.time);
    CHECK(back.params.mu == params.mu);
    CHECK(back.params.lambda == params.lambda);
    CHECK(back.params.gamma == params.gamma);
    std::filesystem::remove("roundtrip.ckpt");
    CHECK_THROWS_AS(read_checkpoint("missing.ckpt"), Error);
}
