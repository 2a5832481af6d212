#include "nsp/model.hpp"

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

// Closures reject 1 + rho <= 0 (inclusive); the rhs guard rejects dipping
// strictly below kVacuumGuard.
void check_above_vacuum(const std::vector<double>& rho_pert, double floor_value,
                        bool inclusive) {
    const double worst = kernels::blocked_max(
        rho_pert.size(), [&](std::size_t i) { return floor_value - (1.0 + rho_pert[i]); });
    if (worst > 0.0 || (inclusive && worst == 0.0)) {
        std::ostringstream os;
        os << "vacuum guard: min(1 + rho) = " << floor_value - worst
           << (inclusive ? " <= " : " < ") << floor_value;
        throw VacuumError(os.str());
    }
}

}  // namespace

std::vector<double> closure_h(const std::vector<double>& rho_pert) {
    check_above_vacuum(rho_pert, 0.0, /*inclusive=*/true);
    std::vector<double> out(rho_pert.size());
    kernels::parallel_for(out.size(),
                          [&](std::size_t i) { out[i] = rho_pert[i] / (rho_pert[i] + 1.0); });
    return out;
}

std::vector<double> closure_f(const std::vector<double>& rho_pert, const PhysParams& params) {
    check_above_vacuum(rho_pert, 0.0, /*inclusive=*/true);
    std::vector<double> out(rho_pert.size());
    kernels::parallel_for(out.size(), [&](std::size_t i) {
        const double rho = rho_pert[i] + 1.0;
        out[i] = params.dpressure(rho) / rho - 1.0;
    });
    return out;
}

ScalarField enforce_neutrality(ScalarField rho) {
    if (!rho.c.empty()) rho.c[0] = cplx{0.0, 0.0};
    return rho;
}

VectorField poisson_solve(const ScalarField& rho) {
    const Grid& g = rho.grid;
    const double scale = std::sqrt(hdot_sq(rho, 0.0, ZeroMode::exclude));
    if (std::abs(rho.zero_mode()) > 1e-12 * (scale + 1e-300))
        throw NeutralityError("poisson_solve: density perturbation has nonzero mean");
    VectorField grad_phi(g);
    const double ku = g.k_unit();
    kernels::parallel_for(g.size(), [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        const double mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
        const double m2 = mx * mx + my * my + mz * mz;
        if (m2 == 0.0) return;
        const cplx v = cplx{0.0, -1.0} * rho.c[idx] / (ku * m2);
        grad_phi.c[0][idx] = mx * v;
        grad_phi.c[1][idx] = my * v;
        grad_phi.c[2][idx] = mz * v;
    });
    return grad_phi;
}

Tendency rhs_linear(const NspState& state, const PhysParams& params) {
    const Grid& g = state.grid();
    Tendency out{ScalarField(g), VectorField(g)};
    const double ku = g.k_unit();
    const double mu = params.mu, muplam = params.mu + params.lambda;
    kernels::parallel_for(g.size(), [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        const double kx = ku * g.freq(ix), ky = ku * g.freq(iy), kz = ku * g.freq(iz);
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0.0) return;  // neutrality: no linear dynamics at the zero mode
        const cplx ux = state.vel.c[0][idx], uy = state.vel.c[1][idx], uz = state.vel.c[2][idx];
        const cplx rhoh = state.rho.c[idx];
        const cplx kdotu = kx * ux + ky * uy + kz * uz;
        out.drho.c[idx] = cplx{0.0, -1.0} * kdotu;
        // -grad rho + grad Phi = -i k rho (1 + 1/|k|^2)
        const cplx force = cplx{0.0, -1.0} * rhoh * (1.0 + 1.0 / k2);
        const cplx visc = -muplam * kdotu;  // -(mu+lambda) k (k.u)
        out.dvel.c[0][idx] = -mu * k2 * ux + kx * visc + kx * force;
        out.dvel.c[1][idx] = -mu * k2 * uy + ky * visc + ky * force;
        out.dvel.c[2][idx] = -mu * k2 * uz + kz * visc + kz * force;
    });
    return out;
}

Tendency rhs_nonlinear(const NspState& state, const PhysParams& params) {
    const Grid& g = state.grid();
    const std::size_t nn = g.size();
    const double ku = g.k_unit();
    const double mu = params.mu, muplam = params.mu + params.lambda;

    // Spectral quantities to take to physical space: rho, u (3), grad u (9,
    // layout [i][j] = d u_i / d x_j), Lu = mu Lap u + (mu+lambda) grad div u
    // (3), grad rho (3). 19 inverse transforms, batched across components.
    constexpr int kBufs = 19;
    std::vector<aligned_vector<cplx>> buf(kBufs);
    for (auto& b : buf) b.assign(nn, cplx{0.0, 0.0});
    auto& rho_b = buf[0];
    auto u_b = [&](int i) -> aligned_vector<cplx>& { return buf[1 + i]; };
    auto gu_b = [&](int i, int j) -> aligned_vector<cplx>& { return buf[4 + 3 * i + j]; };
    auto lu_b = [&](int i) -> aligned_vector<cplx>& { return buf[13 + i]; };
    auto gr_b = [&](int i) -> aligned_vector<cplx>& { return buf[16 + i]; };

    kernels::parallel_for(nn, [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        const double k[3] = {ku * g.freq(ix), ku * g.freq(iy), ku * g.freq(iz)};
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        const cplx rhoh = state.rho.c[idx];
        const cplx u[3] = {state.vel.c[0][idx], state.vel.c[1][idx], state.vel.c[2][idx]};
        const cplx kdotu = k[0] * u[0] + k[1] * u[1] + k[2] * u[2];
        rho_b[idx] = rhoh;
        for (int i = 0; i < 3; ++i) {
            u_b(i)[idx] = u[i];
            for (int j = 0; j < 3; ++j) gu_b(i, j)[idx] = cplx{0.0, 1.0} * k[j] * u[i];
            lu_b(i)[idx] = -mu * k2 * u[i] - muplam * k[i] * kdotu;
            gr_b(i)[idx] = cplx{0.0, 1.0} * k[i] * rhoh;
        }
    });

    const bool par = kernels::parallel_enabled();
#pragma omp parallel for schedule(dynamic) if (par)
    for (int b = 0; b < kBufs; ++b) fft::inverse(g, buf[b].data());

    // Vacuum guard with margin inside the a priori regime.
    {
        const double worst = kernels::blocked_max(
            nn, [&](std::size_t i) { return kVacuumGuard - (1.0 + rho_b[i].real()); });
        if (worst > 0.0) {
            std::ostringstream os;
            os << "vacuum guard: min(1 + rho) = " << kVacuumGuard - worst << " < "
               << kVacuumGuard;
            throw VacuumError(os.str());
        }
    }

    // Physical-space products: rho*u_i and the velocity-equation nonlinearity
    // u.grad(u_i) + h(rho) Lu_i + f(rho) d_i rho, negated later in spectral
    // space where the sign bookkeeping lives.
    std::vector<aligned_vector<cplx>> prod(6);
    for (auto& b : prod) b.assign(nn, cplx{0.0, 0.0});
    const bool is_linear_law = params.law == PhysParams::PressureLaw::linear;
    const double gamma = params.gamma;
    kernels::parallel_for(nn, [&](std::size_t idx) {
        const double rho = rho_b[idx].real();
        const double hval = rho / (rho + 1.0);
        const double fval = is_linear_law
                                ? -hval
                                : std::pow(rho + 1.0, gamma - 2.0) - 1.0;
        const double u[3] = {u_b(0)[idx].real(), u_b(1)[idx].real(), u_b(2)[idx].real()};
        for (int i = 0; i < 3; ++i) {
            prod[i][idx] = cplx{rho * u[i], 0.0};
            const double conv = u[0] * gu_b(i, 0)[idx].real() + u[1] * gu_b(i, 1)[idx].real() +
                                u[2] * gu_b(i, 2)[idx].real();
            prod[3 + i][idx] =
                cplx{conv + hval * lu_b(i)[idx].real() + fval * gr_b(i)[idx].real(), 0.0};
        }
    });

#pragma omp parallel for schedule(dynamic) if (par)
    for (int b = 0; b < 6; ++b) {
        fft::forward(g, prod[b].data());
    }

    Tendency out{ScalarField(g), VectorField(g)};
    kernels::parallel_for(nn, [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        const int mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
        if (!g.in_band(mx, my, mz)) return;  // 2/3 rule after the products
        const cplx kdotp = ku * (static_cast<double>(mx) * prod[0][idx] +
                                 static_cast<double>(my) * prod[1][idx] +
                                 static_cast<double>(mz) * prod[2][idx]);
        out.drho.c[idx] = cplx{0.0, -1.0} * kdotp;  // -div(rho u)
        for (int i = 0; i < 3; ++i) out.dvel.c[i][idx] = -prod[3 + i][idx];
    });
    return out;
}

Tendency rhs(const NspState& state, const PhysParams& params) {
    Tendency lin = rhs_linear(state, params);
    Tendency nl = rhs_nonlinear(state, params);
    kernels::parallel_for(state.grid().size(), [&](std::size_t i) {
        lin.drho.c[i] += nl.drho.c[i];
        for (int d = 0; d < 3; ++d) lin.dvel.c[d][i] += nl.dvel.c[d][i];
    });
    return lin;
}

double min_density(const ScalarField& rho) {
    auto phys = to_physical(rho);
    const double worst =
        kernels::blocked_max(phys.size(), [&](std::size_t i) { return -(1.0 + phys[i]); });
    return -worst;
}

void validate_state(const NspState& state) {
    const double scale = std::sqrt(hdot_sq(state.rho, 0.0, ZeroMode::exclude));
    if (std::abs(state.rho.zero_mode()) > 1e-12 * (scale + 1e-300))
        throw NeutralityError("state: density perturbation has nonzero mean");
    const double rho_min = min_density(state.rho);
    if (rho_min < kVacuumGuard) {
        std::ostringstream os;
        os << "state: min(1 + rho) = " << rho_min << " < " << kVacuumGuard;
        throw VacuumError(os.str());
    }
}

}  // namespace nsp
