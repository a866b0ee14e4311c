#pragma once

#include "novikov/evolution.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace novikov {

enum class WeightKind {
    exp_sym,   ///< exp(a |x|)
    phi_left,  ///< exp(alpha N) for x < -N, exp(-alpha x) on [-N, 0], 1 for x > 0
    phi_right, ///< mirror image of phi_left
    phi_min,   ///< min(exp|x|, N)
    psi,       ///< exp(a |x|^b) (1 + |x|)^c log(e + |x|)^d
};

struct WeightSpec {
    WeightKind kind = WeightKind::exp_sym;
    double a = 0.5;
    double alpha = 0.5;
    double n_cap = 20.0; ///< N for the phi weights and phi_min
    double b = 1.0;
    double c = 0.0;
    double d = 0.0;

    static WeightSpec exp_sym(double a);
    static WeightSpec phi_left(double alpha, double n);
    static WeightSpec phi_right(double alpha, double n);
    static WeightSpec phi_min(double n);
    static WeightSpec psi(double a, double b, double c, double d);

    double log_value(double x) const;
    double value(double x) const { return std::exp(log_value(x)); }
    /// log of the largest value the weight attains (infinity when unbounded).
    double log_cap() const;
    /// Points where the weight is not smooth.
    std::vector<double> breakpoints() const;
    std::string describe() const;
};

std::string to_string(WeightKind k);
WeightKind weight_kind_from_string(const std::string& name);

/// sup_x w(x)|f(x)|, accumulated in log space.
double weighted_sup(const SpectralField& f, const WeightSpec& w);

/// (int |w f|^p dx)^{1/p} by the trapezoid rule in log space; p = infinity gives weighted_sup.
double weighted_lp(const SpectralField& f, const WeightSpec& w, double p);

struct WeightCheck {
    bool property_i = false;          ///< |w'| <= w at every sampled point inside a smooth piece
    bool literal_nonnegative = false; ///< w' >= 0 at the same points
    double max_derivative_ratio = 0.0; ///< max |w'|/w
    double min_derivative = 0.0;       ///< min w' / w over the sampled points
    double c0 = 0.0;                   ///< sup of w (g * 1/w) over the sampled window
    double c0_derivative = 0.0;        ///< sup of w |g' * 1/w|
    bool c0_finite = false;
    double c0_growth_rate = 0.0;       ///< d log C0(X)/dX over the outer half of the window
    double c0_inner_growth_rate = 0.0; ///< same over the middle quarter
    std::vector<std::string> notes;
};

/// Checks |w'| <= w by centered differences inside smooth pieces and estimates
/// C0 = sup_x w(x) (g * w^{-1})(x) with g = exp(-|x|)/2 on the line by quadrature.
/// C0 is reported infinite when sup over |x| <= X keeps growing exponentially in X
/// instead of levelling off. Throws for phi weights with alpha outside (0, 1).
WeightCheck check_weight(const WeightSpec& w, double half_width = 400.0, double spacing = 0.05);

enum class TailSide { left, right, both };

std::string to_string(TailSide s);
TailSide tail_side_from_string(const std::string& name);

struct TailFit {
    double rate = 0.0;      ///< minus the slope of log|f| against |x|
    double intercept = 0.0;
    double window_lo = 0.0; ///< |x| range actually used
    double window_hi = 0.0;
    double residual = 0.0;  ///< rms misfit of the log-linear model
    double floor = 0.0;     ///< absolute noise floor
    int points = 0;
    bool super_exponential = false;
    double inner_rate = 0.0;
    double outer_rate = 0.0;
    std::optional<std::string> warning;
};

struct TailOptions {
    TailSide side = TailSide::both;
    double floor_relative = 1e-13;  ///< floor = floor_relative * max|f|
    double window_lo_fraction = 0.25; ///< window in units of L/2
    double window_hi_fraction = 0.45;
    int min_points = 8;
};

/// Least-squares exponential tail fit. Scanning outward from the inner window
/// edge, the window ends at the first sample below the floor. Throws
/// std::runtime_error when fewer than `min_points` samples remain.
TailFit fit_tail_rate(const SpectralField& f, const TailOptions& opt = {});

/// Number of samples the fit would use (0 when the window starts below the floor).
int usable_tail_points(const SpectralField& f, const TailOptions& opt = {});

struct DecayExpectation {
    std::string component; ///< rho, rho_x, u, u_x, v, v_x, m, n
    double min_rate = 0.0;
    double max_rate = std::numeric_limits<double>::infinity();
};

struct DecayScenario {
    PrimitiveState initial;
    StepperConfig stepper;
    Formulation form = Formulation::momentum;
    std::vector<double> sample_times; ///< fits are made at the snapshots nearest these times
    std::vector<DecayExpectation> expectations; ///< checked at the last sample time
    TailOptions tail{};
};

struct DecayFit {
    double time = 0.0;
    std::string component;
    TailFit fit;
    /// "ok", "below_floor" (no usable points; rate reported as infinity) or "insufficient".
    std::string status = "ok";
};

struct DecayVerdict {
    std::string component;
    double time = 0.0;
    double rate = 0.0;
    double min_rate = 0.0;
    double max_rate = 0.0;
    double margin = 0.0; ///< distance to the nearest bound, negative when violated
    bool pass = false;
};

struct DecayReport {
    std::vector<DecayFit> fits;
    std::vector<DecayVerdict> verdicts;
    bool pass = false;
    RunStatus run_status = RunStatus::completed;
    std::string reason;
    std::vector<std::string> warnings;
    Trajectory trajectory;
};

const std::vector<std::string>& decay_components();

/// The named component of a state: rho, rho_x, u, u_x, v, v_x, m or n.
SpectralField decay_component(const PrimitiveState& s, const std::string& name);

DecayReport decay_persistence_experiment(const DecayScenario& scenario);

} // namespace novikov
