#pragma once

#include "novikov/besov.hpp"
#include "novikov/evolution.hpp"

#include <vector>

namespace novikov {

struct IterateRecord {
    int index = 0;               ///< 1-based; iterate k starts from S_k data
    double besov_sup = 0.0;      ///< sup_t of ||rho||+||m||+||n|| in B^{1/2}_{2,1}
    double diff_weak = 0.0;      ///< sup_t distance to iterate k-1 in B^{-1/2}_{2,inf} (0 for k = 1)
    double diff_critical = 0.0;  ///< same in B^{1/2}_{2,1}
    double gap_direct = 0.0;     ///< sup_t max-component sup-norm distance to the direct solve
    double linear_residual = 0.0; ///< residual of the iterate's own linear system, relative to max(|y_t|, |y|)
    bool diverged = false;
};

struct IterationReport {
    std::vector<IterateRecord> iterates;
    double ratio = 0.0; ///< exp(slope) of log diff_weak over the fit window
    int fit_lo = 2;
    int fit_hi = 8;
    bool gap_monotone = false;
    bool diverged = false;
    RunStatus direct_status = RunStatus::completed;
    std::string reason;
};

struct FriedrichsResult {
    std::vector<Trajectory> iterates; ///< snapshots thinned to cfg.snapshot_stride
    Trajectory direct;
    IterationReport report;
};

/// Runs the linear transport iteration
///   rho'_t + a rho'_x = -rho (u_x v + u v_x)
///   m'_t   + a m'_x   = -3 m u_x v - rho^2 u
///   n'_t   + a n'_x   = -3 n u v_x + rho^2 v,    a = u v,
/// where unprimed fields come from the previous iterate (linearly interpolated in
/// time between its stored steps) and primed fields start from S_{k} of the data.
/// Iterate 1 is S_1 of the data, constant in time. Every step of every iterate is
/// kept internally; the returned trajectories are thinned to the requested stride.
FriedrichsResult friedrichs_iterate(const MomentumState& s0, int n_iters, const StepperConfig& cfg,
                                    int fit_lo = 2, int fit_hi = 8);

struct DependenceRecord {
    double epsilon = 0.0;
    double difference = 0.0; ///< sum over rho, m, n of the B^{1/2}_{2,1} distance at t_end
    double scaled = 0.0;     ///< difference / epsilon^theta (0 when epsilon = 0)
    RunStatus status = RunStatus::completed;
};

struct DependenceReport {
    double theta = 0.5;
    std::vector<DependenceRecord> ladder;
    bool monotone = false; ///< difference strictly decreases along the ladder
    double fitted_c = 0.0; ///< max of `scaled`, the smallest C with difference <= C epsilon^theta
    double spread = 0.0;   ///< max/min of `scaled` over the nonzero epsilons
    std::string reason;
};

/// Evolves s0 and s0 + epsilon * d for each epsilon, where d is `direction`
/// rescaled to unit B^{1/2}_{2,1} norm (summed over components).
DependenceReport continuous_dependence_probe(const MomentumState& s0, const MomentumState& direction,
                                             const std::vector<double>& epsilons, const StepperConfig& cfg,
                                             double theta = 0.5);

/// Least-squares slope of log(values[i]) against i + first_index, exponentiated.
double geometric_ratio(const std::vector<double>& values, int first_index);

} // namespace novikov
