#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nsp/mat2.hpp"
#include "nsp/model.hpp"
#include "nsp/monitor.hpp"

namespace nsp {

enum class Scheme { etdrk4, imex_cnab2 };

struct IntegratorConfig {
    Scheme scheme = Scheme::etdrk4;
    double dt = 0.05;
    double t_end = 1.0;
    int output_stride = 10;  // steps between monitor samples
    double safety = 1.0;     // fraction of the dt bound actually allowed
    bool linear_only = false;
    std::string checkpoint_dir = ".";
};

// dt bound: safety * min(advection CFL, plasma-oscillation resolution
// 2 pi / (10 max|Im lambda|)). The linear part is propagated exactly, so
// these are accuracy constraints on the nonlinear terms and monitors.
double max_dt_allowed(const Grid& grid, const PhysParams& params, const NspState& state,
                      double safety);

// Per-mode propagator coefficients for one (grid, params, dt, scheme),
// keyed by the integer squared wavenumber index m^2 (the coefficients are
// radial functions).
class PropagatorTable {
  public:
    PropagatorTable(const Grid& grid, const PhysParams& params, double dt, Scheme scheme);

    enum class Coeff { E, E2, Q, A, B, G, Minv, MinvMp };

    // out (+)= scale * (coeff o in), applied block-wise per mode: the 2x2
    // compressible block acts on (rho_hat, i k^.u_hat), the scalar factor on
    // the solenoidal remainder.
    void apply(Coeff c, const ScalarField& rho_in, const VectorField& u_in, ScalarField& rho_out,
               VectorField& u_out, bool accumulate, double scale = 1.0) const;

    double dt() const { return dt_; }
    const Grid& grid() const { return grid_; }

  private:
    struct Entry {
        Mat2 comp[8];
        double sol[8];
    };
    Grid grid_;
    double dt_;
    std::vector<int> slot_of_m2_;
    std::vector<Entry> entries_;
};

// One-step integrator; owns the propagator table and the CNAB2 history.
class Integrator {
  public:
    Integrator(const IntegratorConfig& cfg, const PhysParams& params, const Grid& grid);
    NspState step(const NspState& state);
    void reset_history() { prev_nonlinear_.reset(); }
    const IntegratorConfig& config() const { return cfg_; }

  private:
    IntegratorConfig cfg_;
    PhysParams params_;
    PropagatorTable table_;
    std::optional<Tendency> prev_nonlinear_;
};

struct TrajectorySummary {
    NspState final_state;
    MonitorSeries series;
    bool aborted = false;
    std::string abort_reason;
    std::string checkpoint_path;
};

// Advance to t_end, sampling the energy monitor every output_stride steps
// (plus the endpoints). On vacuum breach or NaN the last good state is
// serialized into checkpoint_dir and the summary reports the abort.
TrajectorySummary integrate(const NspState& state0, const IntegratorConfig& cfg,
                            const PhysParams& params, const EnergyRequest& request,
                            const std::function<void(const EnergyReport&)>& callback = {});

// Versioned binary checkpoint of grid metadata + coefficient arrays.
void write_checkpoint(const std::string& path, const NspState& state, const PhysParams& params);
struct Checkpoint {
    NspState state;
    PhysParams params;
};
Checkpoint read_checkpoint(const std::string& path);

}  // namespace nsp
