#include "nsp/integrator.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <set>
#include <sstream>

#include "nsp/kernels.hpp"
#include "nsp/symbol.hpp"

namespace nsp {

namespace {

inline void decode(const Grid& g, std::size_t idx, int& ix, int& iy, int& iz) {
    iz = static_cast<int>(idx % g.n);
    iy = static_cast<int>((idx / g.n) % g.n);
    ix = static_cast<int>(idx / (static_cast<std::size_t>(g.n) * g.n));
}

constexpr int kE = 0, kE2 = 1, kQ = 2, kA = 3, kB = 4, kG = 5, kMinv = 6, kMinvMp = 7;

Mat2 mat2_inverse(const Mat2& a) {
    const cplx d = a.det();
    return {a.m11 / d, -a.m01 / d, -a.m10 / d, a.m00 / d};
}

}  // namespace

double max_dt_allowed(const Grid& grid, const PhysParams& params, const NspState& state,
                      double safety) {
    // Plasma-oscillation resolution over the dealias band.
    const double nu = params.nu();
    double max_im = 0.0;
    const double r_max = grid.k_band_max();
    for (int i = 0; i <= 400; ++i) {
        const double r = r_max * i / 400.0;
        if (r == 0.0) continue;
        const double disc = r * r + 1.0 - 0.25 * nu * nu * std::pow(r, 4);
        if (disc > 0.0) max_im = std::max(max_im, std::sqrt(disc));
    }
    const double osc = max_im > 0.0 ? 2.0 * std::numbers::pi / (10.0 * max_im)
                                    : std::numeric_limits<double>::infinity();
    const double umax = norm(state.vel, NormRequest::linf());
    const double cfl = umax > 0.0 ? (grid.L / grid.n) / umax
                                  : std::numeric_limits<double>::infinity();
    return safety * std::min(osc, cfl);
}

PropagatorTable::PropagatorTable(const Grid& grid, const PhysParams& params, double dt,
                                 Scheme scheme)
    : grid_(grid), dt_(dt) {
    const int half = grid.n / 2;
    const int m2_max = 3 * half * half;
    slot_of_m2_.assign(m2_max + 1, -1);
    std::set<int> m2_values;
    for (int ix = 0; ix < grid.n; ++ix)
        for (int iy = 0; iy < grid.n; ++iy)
            for (int iz = 0; iz < grid.n; ++iz) {
                const int mx = grid.freq(ix), my = grid.freq(iy), mz = grid.freq(iz);
                m2_values.insert(mx * mx + my * my + mz * mz);
            }
    entries_.reserve(m2_values.size());
    const double ku2 = grid.k_unit() * grid.k_unit();
    auto fexp = [](cplx z) { return std::exp(z); };
    for (int m2 : m2_values) {
        Entry e{};
        const double k2 = ku2 * m2;
        const double zsol = -params.mu * k2 * dt;
        if (m2 == 0) {
            // No wave block at k=0; both paths reduce to scalars on a zero
            // linear operator.
            e.sol[kE] = e.sol[kE2] = 1.0;
            e.sol[kQ] = 0.5 * dt;
            e.sol[kA] = dt * etd_alpha(cplx{0, 0}).real();
            e.sol[kB] = dt * etd_beta(cplx{0, 0}).real();
            e.sol[kG] = dt * etd_gamma(cplx{0, 0}).real();
            e.sol[kMinv] = 1.0;
            e.sol[kMinvMp] = 1.0;
            for (int c = 0; c < 8; ++c) e.comp[c] = e.sol[c] * Mat2::identity();
        } else {
            const LinearSymbol sym = symbol_matrix({std::sqrt(k2), 0.0, 0.0}, params);
            const Mat2 hA = cplx{dt, 0} * sym.comp;
            const Mat2 hA2 = cplx{0.5 * dt, 0} * sym.comp;
            e.comp[kE] = mat2_func(hA, fexp, fexp);
            e.comp[kE2] = mat2_func(hA2, fexp, fexp);
            e.comp[kQ] = cplx{0.5 * dt, 0} *
                         mat2_func(hA2, [](cplx z) { return phi(1, z); }, phi1_d);
            e.comp[kA] = cplx{dt, 0} * mat2_func(hA, etd_alpha, etd_alpha_d);
            e.comp[kB] = cplx{dt, 0} * mat2_func(hA, etd_beta, etd_beta_d);
            e.comp[kG] = cplx{dt, 0} * mat2_func(hA, etd_gamma, etd_gamma_d);
            const Mat2 id = Mat2::identity();
            const Mat2 m_minus = id - cplx{0.5 * dt, 0} * sym.comp;
            const Mat2 m_plus = id + cplx{0.5 * dt, 0} * sym.comp;
            e.comp[kMinv] = mat2_inverse(m_minus);
            e.comp[kMinvMp] = e.comp[kMinv] * m_plus;

            e.sol[kE] = std::exp(zsol);
            e.sol[kE2] = std::exp(0.5 * zsol);
            e.sol[kQ] = 0.5 * dt * phi(1, cplx{0.5 * zsol, 0}).real();
            e.sol[kA] = dt * etd_alpha(cplx{zsol, 0}).real();
            e.sol[kB] = dt * etd_beta(cplx{zsol, 0}).real();
            e.sol[kG] = dt * etd_gamma(cplx{zsol, 0}).real();
            e.sol[kMinv] = 1.0 / (1.0 - 0.5 * zsol);
            e.sol[kMinvMp] = (1.0 + 0.5 * zsol) / (1.0 - 0.5 * zsol);
        }
        slot_of_m2_[m2] = static_cast<int>(entries_.size());
        entries_.push_back(e);
    }
    (void)scheme;
}

void PropagatorTable::apply(Coeff c, const ScalarField& rho_in, const VectorField& u_in,
                            ScalarField& rho_out, VectorField& u_out, bool accumulate,
                            double scale) const {
    const int ci = static_cast<int>(c);
    const Grid& g = grid_;
    kernels::parallel_for(g.size(), [&](std::size_t idx) {
        int ix, iy, iz;
        decode(g, idx, ix, iy, iz);
        const int mx = g.freq(ix), my = g.freq(iy), mz = g.freq(iz);
        const int m2 = mx * mx + my * my + mz * mz;
        const Entry& e = entries_[slot_of_m2_[m2]];
        cplx rho_new;
        cplx u_new[3];
        if (m2 == 0) {
            const double s = e.sol[ci];
            rho_new = s * rho_in.c[idx];
            for (int d = 0; d < 3; ++d) u_new[d] = s * u_in.c[d][idx];
        } else {
            const double inv = 1.0 / std::sqrt(static_cast<double>(m2));
            const double kh[3] = {mx * inv, my * inv, mz * inv};
            const cplx v = kh[0] * u_in.c[0][idx] + kh[1] * u_in.c[1][idx] +
                           kh[2] * u_in.c[2][idx];
            cplx w = cplx{0, 1} * v;
            rho_new = rho_in.c[idx];
            e.comp[ci].apply(rho_new, w);
            const cplx v_new = cplx{0, -1} * w;
            const double s = e.sol[ci];
            for (int d = 0; d < 3; ++d)
                u_new[d] = s * (u_in.c[d][idx] - kh[d] * v) + kh[d] * v_new;
        }
        if (accumulate) {
            rho_out.c[idx] += scale * rho_new;
            for (int d = 0; d < 3; ++d) u_out.c[d][idx] += scale * u_new[d];
        } else {
            rho_out.c[idx] = scale * rho_new;
            for (int d = 0; d < 3; ++d) u_out.c[d][idx] = scale * u_new[d];
        }
    });
}

Integrator::Integrator(const IntegratorConfig& cfg, const PhysParams& params, const Grid& grid)
    : cfg_(cfg), params_(params), table_(grid, params, cfg.dt, cfg.scheme) {
    if (!(cfg.dt > 0.0)) throw ConfigError("Integrator: dt must be positive");
    if (cfg.output_stride < 1) throw ConfigError("Integrator: output_stride must be >= 1");
    if (cfg.safety <= 0.0 || cfg.safety > 1.0)
        throw ConfigError("Integrator: safety must lie in (0, 1]");
}

NspState Integrator::step(const NspState& state) {
    using C = PropagatorTable::Coeff;
    const Grid& g = state.grid();
    const double h = cfg_.dt;
    NspState out;
    out.time = state.time + h;
    out.rho = ScalarField(g);
    out.vel = VectorField(g);

    if (cfg_.linear_only) {
        if (cfg_.scheme == Scheme::etdrk4) {
            table_.apply(C::E, state.rho, state.vel, out.rho, out.vel, false);
        } else {
            table_.apply(C::MinvMp, state.rho, state.vel, out.rho, out.vel, false);
        }
        out.rho = enforce_neutrality(std::move(out.rho));
        return out;
    }

    if (cfg_.scheme == Scheme::etdrk4) {
        const Tendency n1 = rhs_nonlinear(state, params_);
        NspState a;
        a.rho = ScalarField(g);
        a.vel = VectorField(g);
        table_.apply(C::E2, state.rho, state.vel, a.rho, a.vel, false);
        table_.apply(C::Q, n1.drho, n1.dvel, a.rho, a.vel, true);
        const Tendency n2 = rhs_nonlinear(a, params_);

        NspState b;
        b.rho = ScalarField(g);
        b.vel = VectorField(g);
        table_.apply(C::E2, state.rho, state.vel, b.rho, b.vel, false);
        table_.apply(C::Q, n2.drho, n2.dvel, b.rho, b.vel, true);
        const Tendency n3 = rhs_nonlinear(b, params_);

        NspState cst;
        cst.rho = ScalarField(g);
        cst.vel = VectorField(g);
        table_.apply(C::E2, a.rho, a.vel, cst.rho, cst.vel, false);
        // Q o (2 N3 - N1)
        Tendency mix{ScalarField(g), VectorField(g)};
        kernels::parallel_for(g.size(), [&](std::size_t i) {
            mix.drho.c[i] = 2.0 * n3.drho.c[i] - n1.drho.c[i];
            for (int d = 0; d < 3; ++d) mix.dvel.c[d][i] = 2.0 * n3.dvel.c[d][i] - n1.dvel.c[d][i];
        });
        table_.apply(C::Q, mix.drho, mix.dvel, cst.rho, cst.vel, true);
        const Tendency n4 = rhs_nonlinear(cst, params_);

        table_.apply(C::E, state.rho, state.vel, out.rho, out.vel, false);
        table_.apply(C::A, n1.drho, n1.dvel, out.rho, out.vel, true);
        Tendency n23{ScalarField(g), VectorField(g)};
        kernels::parallel_for(g.size(), [&](std::size_t i) {
            n23.drho.c[i] = n2.drho.c[i] + n3.drho.c[i];
            for (int d = 0; d < 3; ++d) n23.dvel.c[d][i] = n2.dvel.c[d][i] + n3.dvel.c[d][i];
        });
        table_.apply(C::B, n23.drho, n23.dvel, out.rho, out.vel, true, 2.0);
        table_.apply(C::G, n4.drho, n4.dvel, out.rho, out.vel, true);
    } else {
        // CNAB2: (I - h/2 L) y+ = (I + h/2 L) y + h (3/2 N - 1/2 N_prev);
        // the first step uses N_prev = N (CNAB1).
        const Tendency n = rhs_nonlinear(state, params_);
        const Tendency& np = prev_nonlinear_ ? *prev_nonlinear_ : n;
        Tendency forcing{ScalarField(g), VectorField(g)};
        kernels::parallel_for(g.size(), [&](std::size_t i) {
            forcing.drho.c[i] = h * (1.5 * n.drho.c[i] - 0.5 * np.drho.c[i]);
            for (int d = 0; d < 3; ++d)
                forcing.dvel.c[d][i] = h * (1.5 * n.dvel.c[d][i] - 0.5 * np.dvel.c[d][i]);
        });
        table_.apply(C::MinvMp, state.rho, state.vel, out.rho, out.vel, false);
        table_.apply(C::Minv, forcing.drho, forcing.dvel, out.rho, out.vel, true);
        prev_nonlinear_ = n;
    }
    out.rho = enforce_neutrality(std::move(out.rho));
    return out;
}

namespace {

bool state_finite(const NspState& state) {
    const double probe = hdot_sq(state.rho, 0.0, ZeroMode::include) +
                         hdot_sq(state.vel, 0.0, ZeroMode::include);
    return std::isfinite(probe);
}

Tendency monitor_tendency(const NspState& state, const PhysParams& params, bool linear_only) {
    return linear_only ? rhs_linear(state, params) : rhs(state, params);
}

}  // namespace

TrajectorySummary integrate(const NspState& state0, const IntegratorConfig& cfg,
                            const PhysParams& params, const EnergyRequest& request,
                            const std::function<void(const EnergyReport&)>& callback) {
    TrajectorySummary summary;
    summary.series.request = request;

    const double bound = max_dt_allowed(state0.grid(), params, state0, cfg.safety);
    if (cfg.dt > bound) {
        std::ostringstream os;
        os << "integrate: dt = " << cfg.dt << " exceeds the allowed bound " << bound;
        throw ConfigError(os.str());
    }

    NspState state = state0;
    state.rho = enforce_neutrality(std::move(state.rho));

    auto sample = [&](const NspState& st) {
        const Tendency tend = monitor_tendency(st, params, cfg.linear_only);
        EnergyReport rep = energy_report(st, params, request, &tend);
        summary.series.samples.push_back(rep);
        if (callback) callback(rep);
    };
    auto abort_with = [&](const Error& err) {
        std::filesystem::create_directories(cfg.checkpoint_dir);
        const std::string path = cfg.checkpoint_dir + "/abort_state.ckpt";
        write_checkpoint(path, state, params);
        summary.aborted = true;
        summary.abort_reason = err.what();
        summary.checkpoint_path = path;
        summary.final_state = state;
        fill_centered_residuals(summary.series);
    };

    try {
        sample(state);
    } catch (const Error& err) {
        abort_with(err);
        return summary;
    }
    if (cfg.t_end <= 0.0) {
        summary.final_state = state;
        fill_centered_residuals(summary.series);
        return summary;
    }

    const long long n_steps = static_cast<long long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    Integrator stepper(cfg, params, state.grid());
    for (long long i = 0; i < n_steps; ++i) {
        try {
            NspState next = stepper.step(state);
            if (!state_finite(next)) throw Error("integrate: non-finite state detected");
            state = std::move(next);
            if ((i + 1) % cfg.output_stride == 0 || i + 1 == n_steps) sample(state);
        } catch (const Error& err) {
            abort_with(err);
            return summary;
        }
    }
    summary.final_state = state;
    fill_centered_residuals(summary.series);
    return summary;
}

void write_checkpoint(const std::string& path, const NspState& state, const PhysParams& params) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("write_checkpoint: cannot open " + path);
    const char magic[8] = {'N', 'S', 'P', 'C', 'K', 'P', 'T', '1'};
    std::fwrite(magic, 1, 8, f);
    const std::int32_t n = state.grid().n;
    const std::int32_t law = params.law == PhysParams::PressureLaw::linear ? 0 : 1;
    std::fwrite(&n, sizeof n, 1, f);
    std::fwrite(&state.grid().L, sizeof(double), 1, f);
    std::fwrite(&state.time, sizeof(double), 1, f);
    std::fwrite(&params.mu, sizeof(double), 1, f);
    std::fwrite(&params.lambda, sizeof(double), 1, f);
    std::fwrite(&law, sizeof law, 1, f);
    std::fwrite(&params.gamma, sizeof(double), 1, f);
    const std::size_t nn = state.grid().size();
    std::fwrite(state.rho.c.data(), sizeof(cplx), nn, f);
    for (int d = 0; d < 3; ++d) std::fwrite(state.vel.c[d].data(), sizeof(cplx), nn, f);
    std::fclose(f);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw Error("read_checkpoint: cannot open " + path);
    char magic[8];
    if (std::fread(magic, 1, 8, f) != 8 || std::memcmp(magic, "NSPCKPT1", 8) != 0) {
        std::fclose(f);
        throw Error("read_checkpoint: bad magic in " + path);
    }
    std::int32_t n = 0, law = 0;
    double L = 0, time = 0, mu = 0, lambda = 0, gamma = 0;
    bool ok = std::fread(&n, sizeof n, 1, f) == 1 && std::fread(&L, sizeof L, 1, f) == 1 &&
              std::fread(&time, sizeof time, 1, f) == 1 &&
              std::fread(&mu, sizeof mu, 1, f) == 1 &&
              std::fread(&lambda, sizeof lambda, 1, f) == 1 &&
              std::fread(&law, sizeof law, 1, f) == 1 &&
              std::fread(&gamma, sizeof gamma, 1, f) == 1;
    if (!ok) {
        std::fclose(f);
        throw Error("read_checkpoint: truncated header in " + path);
    }
    Checkpoint out{NspState{}, PhysParams(mu, lambda,
                                          law == 0 ? PhysParams::PressureLaw::linear
                                                   : PhysParams::PressureLaw::gamma_law,
                                          gamma)};
    Grid grid(n, L);
    out.state.rho = ScalarField(grid);
    out.state.vel = VectorField(grid);
    out.state.time = time;
    const std::size_t nn = grid.size();
    ok = std::fread(out.state.rho.c.data(), sizeof(cplx), nn, f) == nn;
    for (int d = 0; d < 3 && ok; ++d)
        ok = std::fread(out.state.vel.c[d].data(), sizeof(cplx), nn, f) == nn;
    std::fclose(f);
    if (!ok) throw Error("read_checkpoint: truncated payload in " + path);
    return out;
}

}  // namespace nsp
