#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nsp/field.hpp"
#include "nsp/norms.hpp"

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

// Random band-limited real field, mean zero unless told otherwise.
ScalarField random_field(const Grid& g, unsigned seed, bool zero_mean = true) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> s(g.size());
    for (auto& v : s) v = gauss(rng);
    ScalarField f = to_spectral(s, g);
    dealias(f);
    if (zero_mean) f.c[0] = cplx{0.0, 0.0};
    return f;
}

VectorField random_vector_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::array<std::vector<double>, 3> s;
    for (auto& comp : s) {
        comp.resize(g.size());
        for (auto& v : comp) v = gauss(rng);
    }
    VectorField u = to_spectral(s, g);
    dealias(u);
    return u;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("constant field transforms to a pure zero mode") {
    Grid g(16, 2 * pi);
    auto s = sample(g, [](double, double, double) { return 3.25; });
    ScalarField f = to_spectral(s, g);
    CHECK(std::abs(f.c[0] - cplx{3.25, 0.0}) < 1e-13);
    double offmode = 0.0;
    for (std::size_t i = 1; i < f.c.size(); ++i) offmode = std::max(offmode, std::abs(f.c[i]));
    CHECK(offmode < 1e-13);
}

TEST_CASE("cosine splits into two conjugate modes of value 1/2") {
    Grid g(16, 4.0);
    auto s = sample(g, [&](double x, double, double) { return std::cos(2 * pi * x / g.L); });
    ScalarField f = to_spectral(s, g);
    CHECK(std::abs(f.at(1, 0, 0) - cplx{0.5, 0.0}) < 1e-13);
    CHECK(std::abs(f.at(g.n - 1, 0, 0) - cplx{0.5, 0.0}) < 1e-13);
    CHECK(hermitian_defect(f) < 1e-13);
}

TEST_CASE("round trip reproduces a random field to 1e-12") {
    Grid g(16, 2 * pi);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> s(g.size());
    for (auto& v : s) v = gauss(rng);
    auto back = to_physical(to_spectral(s, g));
    double scale = 0.0;
    for (double v : s) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(s, back) < 1e-12 * scale);
}

TEST_CASE("to_spectral rejects non-finite input with a diagnostic") {
    Grid g(16, 1.0);
    std::vector<double> s(g.size(), 0.0);
    s[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(to_spectral(s, g), doctest::Contains("non-finite"), Error);
}

TEST_CASE("multiplier identity and Laplacian eigenfunction") {
    Grid g(16, 4.0);
    auto s = sample(g, [&](double x, double, double) { return std::cos(2 * pi * x / g.L); });
    ScalarField f = to_spectral(s, g);

    ScalarField same = apply_multiplier(
        f, [](double, double, double) { return cplx{1.0, 0.0}; }, cplx{1.0, 0.0});
    for (std::size_t i = 0; i < f.c.size(); ++i) CHECK(std::abs(same.c[i] - f.c[i]) == 0.0);

    // Lambda^2 cos(kx) = k^2 cos(kx), matching -Laplacian.
    ScalarField l2 = lambda_s(f, 2.0);
    const double k = 2 * pi / g.L;
    auto phys = to_physical(l2);
    auto expect = sample(g, [&](double x, double, double) { return k * k * std::cos(k * x); });
    CHECK(max_abs_diff(phys, expect) < 1e-12);

    ScalarField lap = laplacian(f);
    auto physl = to_physical(lap);
    for (std::size_t i = 0; i < physl.size(); ++i) CHECK(physl[i] == doctest::Approx(-expect[i]).epsilon(1e-12));
}

TEST_CASE("multiplier error names the offending wavevector") {
    Grid g(16, 2 * pi);
    ScalarField f = random_field(g, 1);
    auto bad = [](double kx, double ky, double kz) {
        if (std::abs(kx - 2.0) < 0.5 && std::abs(ky) < 0.5 && std::abs(kz) < 0.5)
            return cplx{std::numeric_limits<double>::infinity(), 0.0};
        return cplx{1.0, 0.0};
    };
    CHECK_THROWS_WITH_AS(apply_multiplier(f, bad, cplx{0, 0}), doctest::Contains("wavevector (2"),
                         Error);
}

TEST_CASE("Lambda^-1 Lambda^1 is the identity on zero-mean fields") {
    Grid g(16, 2 * pi);
    ScalarField f = random_field(g, 42);
    ScalarField g2 = lambda_s(lambda_s(f, 1.0), -1.0);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        num = std::max(num, std::abs(g2.c[i] - f.c[i]));
        den = std::max(den, std::abs(f.c[i]));
    }
    CHECK(num < 1e-12 * den);
}

TEST_CASE("Lambda composition law on zero-mean fields") {
    Grid g(16, 3.0);
    ScalarField f = random_field(g, 9);
    ScalarField a = lambda_s(lambda_s(f, 0.7), -1.3);
    ScalarField b = lambda_s(f, -0.6);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        num = std::max(num, std::abs(a.c[i] - b.c[i]));
        den = std::max(den, std::abs(b.c[i]));
    }
    CHECK(num < 1e-12 * den);
}

TEST_CASE("norms: zero field, single mode, Parseval") {
    Grid g(16, 4.0);
    ScalarField zero(g);
    CHECK(norm(zero, NormRequest::lp(2)) == 0.0);
    CHECK(norm(zero, NormRequest::hdot(-0.5)) == 0.0);
    CHECK(norm(zero, NormRequest::hk(3)) == 0.0);
    CHECK(norm(zero, NormRequest::linf()) == 0.0);

    // Single cosine: Hdot^s norm is k^s * ||cos||_L2 with ||cos||_L2 = sqrt(L^3/2).
    auto s = sample(g, [&](double x, double, double) { return std::cos(2 * pi * x / g.L); });
    ScalarField f = to_spectral(s, g);
    const double k = 2 * pi / g.L;
    const double l2 = std::sqrt(g.volume() / 2.0);
    for (double sidx : {-1.0, -0.5, 0.0, 1.0, 2.5}) {
        CHECK(norm(f, NormRequest::hdot(sidx)) ==
              doctest::Approx(std::pow(k, sidx) * l2).epsilon(1e-12));
    }
    CHECK(norm(f, NormRequest::lp(2)) == doctest::Approx(l2).epsilon(1e-12));

    // Physical-space L2 quadrature agrees with the Parseval sum.
    double quad = 0.0;
    for (double v : s) quad += v * v;
    quad = std::sqrt(quad * g.cell_volume());
    CHECK(quad == doctest::Approx(norm(f, NormRequest::lp(2))).epsilon(1e-12));
}

TEST_CASE("Parseval oracle: Lambda^-1 Lambda f preserves the L2 norm") {
    Grid g(16, 2 * pi);
    ScalarField f = random_field(g, 1234);
    ScalarField h = lambda_s(lambda_s(f, 1.0), -1.0);
    CHECK(norm(h, NormRequest::lp(2)) ==
          doctest::Approx(norm(f, NormRequest::lp(2))).epsilon(1e-12));
}

TEST_CASE("norm(Hdot(0)) equals norm(Lp(2)) exactly") {
    Grid g(16, 5.0);
    ScalarField f = random_field(g, 77, /*zero_mean=*/false);
    CHECK(norm(f, NormRequest::hdot(0.0)) == norm(f, NormRequest::lp(2)));
}

TEST_CASE("Hdot(s<0) with retained nonzero zero mode is an error") {
    Grid g(16, 1.0);
    auto s = sample(g, [](double, double, double) { return 1.0; });
    ScalarField f = to_spectral(s, g);
    CHECK_THROWS_AS(norm(f, NormRequest::hdot(-0.5, ZeroMode::include)), Error);
    // Excluding the zero mode is fine.
    CHECK(norm(f, NormRequest::hdot(-0.5, ZeroMode::exclude)) == doctest::Approx(0.0));
}

TEST_CASE("Hk is the root sum of squared Hdot^j seminorms") {
    Grid g(16, 2 * pi);
    ScalarField f = random_field(g, 5);
    double sum = 0.0;
    for (int j = 0; j <= 3; ++j) {
        const double v = norm(f, NormRequest::hdot(static_cast<double>(j)));
        sum += v * v;
    }
    CHECK(norm(f, NormRequest::hk(3)) == doctest::Approx(std::sqrt(sum)).epsilon(1e-12));
}

TEST_CASE("helmholtz: gradient fields are purely compressible") {
    Grid g(16, 2 * pi);
    ScalarField f = random_field(g, 11);
    VectorField grad = gradient(f);
    auto parts = helmholtz_split(grad);
    CHECK(norm(parts.solenoidal, NormRequest::lp(2)) < 1e-12 * norm(grad, NormRequest::lp(2)));
}

TEST_CASE("helmholtz: curl-type fields are purely solenoidal") {
    Grid g(16, 2 * pi);
    ScalarField psi = random_field(g, 12);
    VectorField grad = gradient(psi);
    VectorField curl(g);
    curl.c[0] = grad.c[1];
    for (auto& v : curl.c[0]) v = -v;
    curl.c[1] = grad.c[0];
    // third component zero
    auto parts = helmholtz_split(curl);
    CHECK(norm(parts.compressible, NormRequest::lp(2)) < 1e-12 * norm(curl, NormRequest::lp(2)));
}

TEST_CASE("helmholtz: Pythagoras and projection idempotence") {
    Grid g(16, 2 * pi);
    VectorField u = random_vector_field(g, 21);
    auto parts = helmholtz_split(u);
    const double nu2 = std::pow(norm(u, NormRequest::lp(2)), 2);
    const double nc2 = std::pow(norm(parts.compressible, NormRequest::lp(2)), 2);
    const double ns2 = std::pow(norm(parts.solenoidal, NormRequest::lp(2)), 2);
    CHECK(nc2 + ns2 == doctest::Approx(nu2).epsilon(1e-12));
    CHECK(inner(parts.compressible, parts.solenoidal) ==
          doctest::Approx(0.0).epsilon(1e-12).scale(nu2));

    // Sum of parts reproduces the input.
    double diff = 0.0;
    for (int d = 0; d < 3; ++d)
        for (std::size_t i = 0; i < u.c[d].size(); ++i)
            diff = std::max(diff,
                            std::abs(parts.compressible.c[d][i] + parts.solenoidal.c[d][i] -
                                     u.c[d][i]));
    CHECK(diff < 1e-13);

    // Applying the split to each part is the identity on that part.
    auto pc = helmholtz_split(parts.compressible);
    auto ps = helmholtz_split(parts.solenoidal);
    CHECK(norm(pc.solenoidal, NormRequest::lp(2)) < 1e-12 * (1 + norm(u, NormRequest::lp(2))));
    CHECK(norm(ps.compressible, NormRequest::lp(2)) < 1e-12 * (1 + norm(u, NormRequest::lp(2))));
}

TEST_CASE("dealias zeroes modes outside the 2/3 sphere") {
    Grid g(18, 2 * pi);
    ScalarField f(g);
    for (auto& v : f.c) v = cplx{1.0, 0.0};
    dealias(f);
    for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
            for (int iz = 0; iz < g.n; ++iz) {
                const bool in = g.in_band(g.freq(ix), g.freq(iy), g.freq(iz));
                CHECK(std::abs(f.at(ix, iy, iz)) == (in ? 1.0 : 0.0));
            }
}

TEST_CASE("t_max follows the box validity window") {
    Grid g(64, 32 * pi);
    CHECK(g.t_max() == doctest::Approx(64.0));
    CHECK(g.k_unit() == doctest::Approx(1.0 / 16.0));
}
