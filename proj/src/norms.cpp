#include "nsp/norms.hpp"

#include <cmath>

#include "nsp/kernels.hpp"

namespace nsp {

namespace {

inline void decode(const Grid& g, std::size_t idx, int& ix, int& iy, int& iz) {
    iz = static_cast<int>(idx % g.n);
    iy = static_cast<int>((idx / g.n) % g.n);
    ix = static_cast<int>(idx / (static_cast<std::size_t>(g.n) * g.n));
}

inline double k2_at(const Grid& g, std::size_t idx) {
    int ix, iy, iz;
    decode(g, idx, ix, iy, iz);
    const double mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
    return g.k_unit() * g.k_unit() * (mx * mx + my * my + mz * mz);
}

double lp_physical(const std::vector<double>& mag, const Grid& g, double p) {
    if (std::isinf(p))
        return kernels::blocked_max(mag.size(), [&](std::size_t i) { return mag[i]; });
    const double cell = g.cell_volume();
    const double sum =
        kernels::blocked_sum(mag.size(), [&](std::size_t i) { return std::pow(mag[i], p); });
    return std::pow(cell * sum, 1.0 / p);
}

void check_negative_zero_mode(double s, ZeroMode zm, cplx zero, double scale) {
    if (s < 0.0 && zm == ZeroMode::include && std::abs(zero) > 1e-13 * (scale + 1e-300))
        throw Error("norm: Hdot(s<0) undefined with a retained nonzero zero mode");
}

}  // namespace

double hdot_sq(const ScalarField& f, double s, ZeroMode zm) {
    const Grid& g = f.grid;
    const double vol = g.volume();
    return vol * kernels::blocked_sum(g.size(), [&](std::size_t i) {
               const double k2 = k2_at(g, i);
               if (k2 == 0.0) {
                   if (zm == ZeroMode::exclude || s != 0.0) return 0.0;
                   return std::norm(f.c[i]);
               }
               return std::pow(k2, s) * std::norm(f.c[i]);
           });
}

double hdot_sq(const VectorField& u, double s, ZeroMode zm) {
    const Grid& g = u.grid;
    const double vol = g.volume();
    return vol * kernels::blocked_sum(g.size(), [&](std::size_t i) {
               const double k2 = k2_at(g, i);
               const double a = std::norm(u.c[0][i]) + std::norm(u.c[1][i]) + std::norm(u.c[2][i]);
               if (k2 == 0.0) {
                   if (zm == ZeroMode::exclude || s != 0.0) return 0.0;
                   return a;
               }
               return std::pow(k2, s) * a;
           });
}

double div_hdot_sq(const VectorField& u, double j) {
    const Grid& g = u.grid;
    const double ku = g.k_unit();
    return g.volume() * kernels::blocked_sum(g.size(), [&](std::size_t i) {
               int ix, iy, iz;
               decode(g, i, ix, iy, iz);
               const double mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
               const double k2 = ku * ku * (mx * mx + my * my + mz * mz);
               if (k2 == 0.0) return 0.0;
               const cplx kdotu = ku * (mx * u.c[0][i] + my * u.c[1][i] + mz * u.c[2][i]);
               return (j == 0.0 ? 1.0 : std::pow(k2, j)) * std::norm(kdotu);
           });
}

double inner(const ScalarField& a, const ScalarField& b) {
    return a.grid.volume() * kernels::blocked_sum(a.grid.size(), [&](std::size_t i) {
               return (std::conj(a.c[i]) * b.c[i]).real();
           });
}

double inner(const VectorField& a, const VectorField& b) {
    return a.grid.volume() * kernels::blocked_sum(a.grid.size(), [&](std::size_t i) {
               double s = 0.0;
               for (int d = 0; d < 3; ++d) s += (std::conj(a.c[d][i]) * b.c[d][i]).real();
               return s;
           });
}

double cross_functional(const VectorField& u, const ScalarField& rho, int j) {
    const Grid& g = u.grid;
    const double ku = g.k_unit();
    return g.volume() * kernels::blocked_sum(g.size(), [&](std::size_t i) {
               int ix, iy, iz;
               decode(g, i, ix, iy, iz);
               const double mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
               const double k2 = ku * ku * (mx * mx + my * my + mz * mz);
               if (k2 == 0.0) return 0.0;
               // conj(nabla^j u) . (i k) nabla^j rho summed over components
               const cplx kdotu_conj =
                   ku * (mx * std::conj(u.c[0][i]) + my * std::conj(u.c[1][i]) +
                         mz * std::conj(u.c[2][i]));
               const double wj = j == 0 ? 1.0 : std::pow(k2, j);
               return wj * (kdotu_conj * cplx{0.0, 1.0} * rho.c[i]).real();
           });
}

double norm(const ScalarField& f, const NormRequest& req) {
    switch (req.kind) {
        case NormRequest::Kind::Hdot: {
            check_negative_zero_mode(req.s, req.zero_mode, f.zero_mode(),
                                     std::sqrt(hdot_sq(f, 0.0, ZeroMode::exclude)));
            return std::sqrt(hdot_sq(f, req.s, req.zero_mode));
        }
        case NormRequest::Kind::Hk: {
            double sum = 0.0;
            for (int j = 0; j <= req.k; ++j) sum += hdot_sq(f, j, ZeroMode::include);
            return std::sqrt(sum);
        }
        case NormRequest::Kind::Lp: {
            if (req.p < 1.0) throw Error("norm: Lp requires p >= 1");
            if (req.p == 2.0) return std::sqrt(hdot_sq(f, 0.0, req.zero_mode));
            std::vector<double> phys = to_physical(f);
            for (double& v : phys) v = std::abs(v);
            return lp_physical(phys, f.grid, req.p);
        }
    }
    throw Error("norm: unknown request kind");
}

double norm(const VectorField& u, const NormRequest& req) {
    switch (req.kind) {
        case NormRequest::Kind::Hdot: {
            cplx z0{0.0, 0.0};
            for (int d = 0; d < 3; ++d) z0 += u.c[d].empty() ? cplx{} : u.c[d][0];
            check_negative_zero_mode(req.s, req.zero_mode, z0,
                                     std::sqrt(hdot_sq(u, 0.0, ZeroMode::exclude)));
            return std::sqrt(hdot_sq(u, req.s, req.zero_mode));
        }
        case NormRequest::Kind::Hk: {
            double sum = 0.0;
            for (int j = 0; j <= req.k; ++j) sum += hdot_sq(u, j, ZeroMode::include);
            return std::sqrt(sum);
        }
        case NormRequest::Kind::Lp: {
            if (req.p < 1.0) throw Error("norm: Lp requires p >= 1");
            if (req.p == 2.0) return std::sqrt(hdot_sq(u, 0.0, req.zero_mode));
            auto phys = to_physical(u);
            std::vector<double> mag(u.grid.size());
            kernels::parallel_for(mag.size(), [&](std::size_t i) {
                mag[i] = std::sqrt(phys[0][i] * phys[0][i] + phys[1][i] * phys[1][i] +
                                   phys[2][i] * phys[2][i]);
            });
            return lp_physical(mag, u.grid, req.p);
        }
    }
    throw Error("norm: unknown request kind");
}

}  // namespace nsp
