#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nsp/model.hpp"
#include "nsp/symbol.hpp"

using namespace nsp;
namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> sample(const Grid& g, auto&& fn) {
    std::vector<double> out(g.size());
    const double h = g.L / g.n;
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz)
                out[g.index(ix, iy, iz)] = fn(ix * h, iy * h, iz * h);
    return out;
}

ScalarField random_mean_zero(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> s(g.size());
    for (auto& v : s) v = gauss(rng);
    ScalarField f = to_spectral(s, g);
    dealias(f);
    f.c[0] = cplx{0.0, 0.0};
    return f;
}

}  // namespace

TEST_CASE("closures at reference points") {
    PhysParams params;  // linear law
    std::vector<double> rho = {0.0, 1.0, 0.2};
    auto h = closure_h(rho);
    auto f = closure_f(rho, params);
    CHECK(h[0] == 0.0);
    CHECK(f[0] == 0.0);
    CHECK(h[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(h[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(f[2] == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("linear pressure law gives f = -h identically") {
    PhysParams params;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-0.5, 1.0);
    std::vector<double> rho(1000);
    for (auto& v : rho) v = uni(rng);
    auto h = closure_h(rho);
    auto f = closure_f(rho, params);
    for (std::size_t i = 0; i < rho.size(); ++i) CHECK(f[i] == doctest::Approx(-h[i]).epsilon(1e-14));
}

TEST_CASE("gamma pressure law satisfies p'(1)=1 and linear-in-rho closure bound") {
    PhysParams params(1.0, 0.0, PhysParams::PressureLaw::gamma_law, 1.4);
    CHECK(params.dpressure(1.0) == doctest::Approx(1.0));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> uni(-0.5, 1.0);
    std::vector<double> rho(1000);
    for (auto& v : rho) v = uni(rng);
    auto h = closure_h(rho);
    auto f = closure_f(rho, params);
    // |h|,|f| <= C |rho| on the admissible range; measure C.
    double c = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] == 0.0) continue;
        c = std::max({c, std::abs(h[i] / rho[i]), std::abs(f[i] / rho[i])});
    }
    CHECK(c < 5.0);
}

TEST_CASE("closures raise VacuumError at or below vacuum") {
    std::vector<double> rho = {0.0, -1.0};
    CHECK_THROWS_AS(closure_h(rho), VacuumError);
    rho[1] = -1.5;
    PhysParams params;
    CHECK_THROWS_AS(closure_f(rho, params), VacuumError);
}

TEST_CASE("enforce_neutrality zeroes exactly the mean") {
    Grid g(16, 2 * pi);
    auto s = sample(g, [&](double x, double, double) { return 2.0 + std::cos(x); });
    ScalarField f = to_spectral(s, g);
    ScalarField fn = enforce_neutrality(f);
    CHECK(std::abs(fn.zero_mode()) == 0.0);
    for (std::size_t i = 1; i < f.c.size(); ++i) CHECK(fn.c[i] == f.c[i]);

    ScalarField zero_mean = random_mean_zero(g, 5);
    ScalarField same = enforce_neutrality(zero_mean);
    for (std::size_t i = 0; i < same.c.size(); ++i) CHECK(same.c[i] == zero_mean.c[i]);
}

TEST_CASE("poisson_solve: single cosine mode inverts analytically") {
    Grid g(16, 8.0);
    const double a = 2 * pi / g.L;
    auto s = sample(g, [&](double x, double, double) { return std::cos(a * x); });
    ScalarField rho = to_spectral(s, g);
    VectorField gp = poisson_solve(rho);
    auto phys = to_physical(gp);
    // Delta Phi = rho with rho = cos(ax) gives grad Phi = (L/2pi) sin(ax) e1.
    for (int ix = 0; ix < g.n; ++ix) {
        const double x = ix * g.L / g.n;
        CHECK(phys[0][g.index(ix, 3, 5)] ==
              doctest::Approx(std::sin(a * x) / a).epsilon(1e-12).scale(1.0 / a));
    }
    double other = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        other = std::max({other, std::abs(phys[1][i]), std::abs(phys[2][i])});
    CHECK(other < 1e-13 / a);
}

TEST_CASE("poisson_solve: zero density gives zero field; nonzero mean rejected") {
    Grid g(16, 2 * pi);
    ScalarField zero(g);
    VectorField gp = poisson_solve(zero);
    CHECK(norm(gp, NormRequest::lp(2)) == 0.0);

    auto s = sample(g, [](double, double, double) { return 1.0; });
    CHECK_THROWS_AS(poisson_solve(to_spectral(s, g)), NeutralityError);
}

TEST_CASE("poisson identities: ||nabla^{k+1} grad Phi|| = ||nabla^k rho|| to 1e-12") {
    Grid g(16, 4 * pi);
    for (unsigned seed : {10u, 11u, 12u}) {
        ScalarField rho = random_mean_zero(g, seed);
        VectorField gp = poisson_solve(rho);
        for (int k = 0; k <= 2; ++k) {
            const double lhs = std::sqrt(hdot_sq(gp, k + 1.0));
            const double rhs_v = std::sqrt(hdot_sq(rho, static_cast<double>(k)));
            CHECK(lhs == doctest::Approx(rhs_v).epsilon(1e-12));
        }
        // div grad Phi recovers rho exactly.
        ScalarField div_gp = divergence(gp);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < rho.c.size(); ++i) {
            diff = std::max(diff, std::abs(div_gp.c[i] - rho.c[i]));
            scale = std::max(scale, std::abs(rho.c[i]));
        }
        CHECK(diff < 1e-12 * scale);
    }
}

TEST_CASE("rhs at equilibrium is exactly zero") {
    Grid g(16, 2 * pi);
    PhysParams params;
    NspState state{ScalarField(g), VectorField(g)};
    Tendency t = rhs(state, params);
    CHECK(norm(t.drho, NormRequest::lp(2)) == 0.0);
    CHECK(norm(t.dvel, NormRequest::lp(2)) == 0.0);
}

TEST_CASE("mass is conserved: d/dt mean(rho) = 0 to machine precision") {
    Grid g(16, 2 * pi);
    PhysParams params;
    NspState state;
    state.rho = random_mean_zero(g, 21);
    for (auto& v : state.rho.c) v *= 0.05;
    VectorField u(g);
    for (int d = 0; d < 3; ++d) {
        ScalarField comp = random_mean_zero(g, 22 + d);
        u.c[d] = comp.c;
        for (auto& v : u.c[d]) v *= 0.05;
    }
    state.vel = u;
    Tendency t = rhs(state, params);
    const double scale = norm(t.drho, NormRequest::lp(2));
    CHECK(std::abs(t.drho.zero_mode()) <= 1e-12 * (scale + 1e-300));
}

TEST_CASE("rhs linearization matches the per-mode symbol") {
    Grid g(16, 2 * pi);
    PhysParams params(0.7, 0.3);
    // Single Hermitian mode pair in rho and u with arbitrary complex values.
    NspState state{ScalarField(g), VectorField(g)};
    const int mx = 2, my = 1, mz = 3;
    const cplx rv{0.3, -0.2};
    const std::array<cplx, 3> uv = {cplx{0.1, 0.4}, cplx{-0.2, 0.1}, cplx{0.05, -0.3}};
    auto put = [&](int sx, int sy, int sz, cplx r, std::array<cplx, 3> u) {
        const int ix = (sx + g.n) % g.n, iy = (sy + g.n) % g.n, iz = (sz + g.n) % g.n;
        state.rho.at(ix, iy, iz) = r;
        for (int d = 0; d < 3; ++d) state.vel.c[d][g.index(ix, iy, iz)] = u[d];
    };
    put(mx, my, mz, rv, uv);
    put(-mx, -my, -mz, std::conj(rv),
        {std::conj(uv[0]), std::conj(uv[1]), std::conj(uv[2])});

    Tendency lin = rhs_linear(state, params);
    const double ku = g.k_unit();
    LinearSymbol sym = symbol_matrix({ku * mx, ku * my, ku * mz}, params);
    auto a4 = sym.full_matrix();
    // Expected tendency = A * (rho, u) at the (+m) mode.
    cplx expected[4] = {};
    const cplx in[4] = {rv, uv[0], uv[1], uv[2]};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) expected[i] += a4[i][j] * in[j];
    const std::size_t idx = g.index(mx, my, mz);
    CHECK(std::abs(lin.drho.c[idx] - expected[0]) < 1e-12);
    for (int d = 0; d < 3; ++d) CHECK(std::abs(lin.dvel.c[d][idx] - expected[1 + d]) < 1e-12);
}

TEST_CASE("nonlinear remainder scales quadratically in the amplitude") {
    Grid g(16, 2 * pi);
    PhysParams params;
    auto make_state = [&](double eps) {
        NspState st{ScalarField(g), VectorField(g)};
        auto s = sample(g, [&](double x, double y, double) {
            return std::cos(x) + 0.5 * std::cos(y + 2 * x);
        });
        st.rho = to_spectral(s, g);
        for (auto& v : st.rho.c) v *= eps;
        auto su = sample(g, [&](double x, double, double z) { return std::sin(x + z); });
        ScalarField f = to_spectral(su, g);
        for (int d = 0; d < 3; ++d) st.vel.c[d] = f.c;
        for (int d = 0; d < 3; ++d)
            for (auto& v : st.vel.c[d]) v *= eps;
        return st;
    };
    auto remainder = [&](double eps) {
        NspState st = make_state(eps);
        Tendency nl = rhs_nonlinear(st, params);
        return std::sqrt(std::pow(norm(nl.drho, NormRequest::lp(2)), 2) +
                         std::pow(norm(nl.dvel, NormRequest::lp(2)), 2));
    };
    const double r1 = remainder(1e-3);
    const double r2 = remainder(5e-4);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("manufactured solution: spectral rhs matches a finite-difference oracle") {
    // Trig-polynomial fields with modes <= 2 on n = 32: every quadratic
    // product stays inside the dealias sphere, so the spectral evaluation is
    // exact up to the tiny aliasing of the non-polynomial closures. The
    // oracle applies second-order central differences to the analytic
    // expressions, with Phi available in closed form mode by mode.
    Grid g(32, 2 * pi);
    PhysParams params(0.8, 0.2);
    const double amp = 0.05;

    auto rho_fn = [&](double x, double y, double z) {
        return amp * (std::cos(x) + 0.7 * std::cos(y + z) + 0.4 * std::cos(2 * x - y));
    };
    // Phi solves Delta Phi = rho: each cosine divides by -|k|^2.
    auto phi_fn = [&](double x, double y, double z) {
        return amp * (-std::cos(x) - 0.7 * std::cos(y + z) / 2.0 - 0.4 * std::cos(2 * x - y) / 5.0);
    };
    auto u_fn = [&](int d, double x, double y, double z) {
        switch (d) {
            case 0: return amp * (std::sin(y) + 0.3 * std::cos(x + z));
            case 1: return amp * (std::sin(z + x) * 0.5);
            default: return amp * (std::cos(y - x) * 0.8);
        }
    };

    NspState state{ScalarField(g), VectorField(g)};
    state.rho = to_spectral(sample(g, rho_fn), g);
    std::array<std::vector<double>, 3> us;
    for (int d = 0; d < 3; ++d)
        us[d] = sample(g, [&](double x, double y, double z) { return u_fn(d, x, y, z); });
    state.vel = to_spectral(us, g);
    Tendency spectral = rhs(state, params);
    auto drho_s = to_physical(spectral.drho);
    auto dvel_s = to_physical(spectral.dvel);

    auto oracle_error = [&](double h) {
        // FD helpers on analytic functions.
        auto d1 = [&](auto&& fn, int axis, double x, double y, double z) {
            double p[3] = {x, y, z};
            p[axis] += h;
            const double fp = fn(p[0], p[1], p[2]);
            p[axis] -= 2 * h;
            const double fm = fn(p[0], p[1], p[2]);
            return (fp - fm) / (2 * h);
        };
        auto lap = [&](auto&& fn, double x, double y, double z) {
            double acc = 0.0;
            for (int axis = 0; axis < 3; ++axis) {
                double p[3] = {x, y, z};
                p[axis] += h;
                const double fp = fn(p[0], p[1], p[2]);
                p[axis] -= 2 * h;
                const double fm = fn(p[0], p[1], p[2]);
                acc += (fp - 2 * fn(x, y, z) + fm) / (h * h);
            }
            return acc;
        };

        double worst = 0.0;
        // Probe a coarse sub-lattice of grid points.
        for (int ix = 0; ix < g.n; ix += 8)
            for (int iy = 0; iy < g.n; iy += 8)
                for (int iz = 0; iz < g.n; iz += 8) {
                    const double x = ix * g.L / g.n, y = iy * g.L / g.n, z = iz * g.L / g.n;
                    // d/dt rho = -div u - div(rho u)
                    double divu = 0.0, div_rho_u = 0.0;
                    for (int axis = 0; axis < 3; ++axis) {
                        divu += d1([&](double a, double b, double c) { return u_fn(axis, a, b, c); },
                                   axis, x, y, z);
                        div_rho_u += d1(
                            [&](double a, double b, double c) {
                                return rho_fn(a, b, c) * u_fn(axis, a, b, c);
                            },
                            axis, x, y, z);
                    }
                    const double drho_o = -divu - div_rho_u;
                    worst = std::max(worst, std::abs(drho_o - drho_s[g.index(ix, iy, iz)]));
                    // d/dt u_i
                    const double rho = rho_fn(x, y, z);
                    const double hv = rho / (1.0 + rho);
                    const double fv = params.dpressure(1.0 + rho) / (1.0 + rho) - 1.0;
                    double div_u_grad[3];
                    for (int i = 0; i < 3; ++i)
                        div_u_grad[i] = d1(
                            [&](double a, double b, double c) {
                                double acc = 0.0;
                                for (int axis = 0; axis < 3; ++axis) {
                                    // div u at shifted point via nested FD
                                    double q[3] = {a, b, c};
                                    q[axis] += h;
                                    const double fp = u_fn(axis, q[0], q[1], q[2]);
                                    q[axis] -= 2 * h;
                                    const double fm = u_fn(axis, q[0], q[1], q[2]);
                                    acc += (fp - fm) / (2 * h);
                                }
                                return acc;
                            },
                            i, x, y, z);
                    for (int i = 0; i < 3; ++i) {
                        const double lap_ui =
                            lap([&](double a, double b, double c) { return u_fn(i, a, b, c); }, x,
                                y, z);
                        const double Lu = params.mu * lap_ui +
                                          (params.mu + params.lambda) * div_u_grad[i];
                        double conv = 0.0;
                        for (int j = 0; j < 3; ++j)
                            conv += u_fn(j, x, y, z) *
                                    d1([&](double a, double b, double c) { return u_fn(i, a, b, c); },
                                       j, x, y, z);
                        const double grad_rho = d1(rho_fn, i, x, y, z);
                        const double grad_phi = d1(phi_fn, i, x, y, z);
                        const double dui_o =
                            Lu - grad_rho + grad_phi - conv - hv * Lu - fv * grad_rho;
                        worst = std::max(worst,
                                         std::abs(dui_o - dvel_s[i][g.index(ix, iy, iz)]));
                    }
                }
        return worst;
    };

    const double e1 = oracle_error(g.L / 64.0);
    const double e2 = oracle_error(g.L / 128.0);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));  // oracle converges at its own O(h^2)
    CHECK(e2 < 2e-2 * amp);
}

TEST_CASE("rhs propagates vacuum errors") {
    Grid g(16, 2 * pi);
    PhysParams params;
    NspState state{ScalarField(g), VectorField(g)};
    auto s = sample(g, [](double x, double, double) { return -0.8 * std::cos(x); });
    state.rho = to_spectral(s, g);  // min(1+rho) = 0.2, below the 0.4 guard
    CHECK_THROWS_AS(rhs(state, params), VacuumError);
    CHECK(min_density(state.rho) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK_THROWS_AS(validate_state(state), VacuumError);
}

TEST_CASE("physical parameter validation") {
    CHECK_THROWS_AS(PhysParams(0.0, 0.0), ConfigError);
    CHECK_THROWS_AS(PhysParams(1.0, -0.7), ConfigError);
    CHECK_NOTHROW(PhysParams(1.0, -2.0 / 3.0 + 1e-9));
}
