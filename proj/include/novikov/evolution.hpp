#pragma once

#include "novikov/system.hpp"

#include <string>
#include <vector>

namespace novikov {

enum class Formulation { momentum, convolution };

std::string to_string(Formulation f);
Formulation formulation_from_string(const std::string& name);

struct StepperConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    std::string scheme = "rk4";
    double cfl_guard = 0.5;
    int snapshot_stride = 1;
    double speed_floor = 1e-8;
    /// Integrates s' = -F(s) instead of s' = F(s); used for reversibility checks.
    bool negate_rhs = false;
    RhsOptions rhs{};

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
    /// Number of steps; dt is shrunk (never grown) so that steps * dt == t_end.
    int n_steps() const;
    double effective_dt() const;
};

struct StepRecord {
    double time = 0.0;
    double max_speed = 0.0; ///< max |u v|
    double mass = 0.0;      ///< integral of rho
    double max_u = 0.0;
    double max_v = 0.0;
    double max_rho = 0.0;
};

enum class RunStatus { completed, aborted };

struct Trajectory {
    std::vector<PrimitiveState> snapshots;
    StepperConfig config;
    Formulation form = Formulation::momentum;
    std::vector<StepRecord> diagnostics; ///< one record per step, plus the initial state
    RunStatus status = RunStatus::completed;
    std::string reason;

    bool ok() const { return status == RunStatus::completed; }
    const PrimitiveState& final_state() const { return snapshots.back(); }
    std::vector<double> times() const;
};

StepRecord measure(const PrimitiveState& s);

/// Classical RK4 over the chosen right-hand side. Snapshots are stored every
/// `snapshot_stride` steps and at the final step. A CFL-guard violation or a
/// non-finite field stops the run and returns the trajectory so far with
/// status aborted and a reason; this function does not throw for those.
Trajectory evolve(const PrimitiveState& s0, const StepperConfig& cfg, Formulation form = Formulation::momentum);

} // namespace novikov
