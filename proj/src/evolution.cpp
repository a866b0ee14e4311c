#include "novikov/evolution.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace novikov {

std::string to_string(Formulation f)
{
    return f == Formulation::momentum ? "momentum" : "convolution";
}

Formulation formulation_from_string(const std::string& name)
{
    if (name == "momentum") {
        return Formulation::momentum;
    }
    if (name == "convolution") {
        return Formulation::convolution;
    }
    throw std::invalid_argument("unknown formulation '" + name + "' (expected momentum or convolution)");
}

void StepperConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("stepper: dt must be positive");
    }
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw std::invalid_argument("stepper: t_end must be non-negative");
    }
    if (scheme != "rk4") {
        throw std::invalid_argument("stepper: unsupported scheme '" + scheme + "' (only rk4)");
    }
    if (!(cfl_guard > 0.0 && cfl_guard <= 1.0)) {
        throw std::invalid_argument("stepper: cfl_guard must lie in (0, 1]");
    }
    if (snapshot_stride < 1) {
        throw std::invalid_argument("stepper: snapshot_stride must be >= 1");
    }
    if (!(speed_floor > 0.0)) {
        throw std::invalid_argument("stepper: speed_floor must be positive");
    }
}

int StepperConfig::n_steps() const
{
    return static_cast<int>(std::ceil(t_end / dt - 1e-9));
}

double StepperConfig::effective_dt() const
{
    const int n = n_steps();
    return n == 0 ? dt : t_end / n;
}

std::vector<double> Trajectory::times() const
{
    std::vector<double> t;
    t.reserve(snapshots.size());
    for (const auto& s : snapshots) {
        t.push_back(s.time);
    }
    return t;
}

StepRecord measure(const PrimitiveState& s)
{
    StepRecord r;
    r.time = s.time;
    const auto u = s.u.values();
    const auto v = s.v.values();
    for (std::size_t i = 0; i < u.size(); ++i) {
        r.max_speed = std::max(r.max_speed, std::abs(u[i] * v[i]));
    }
    r.mass = s.grid().length() * s.rho.coefficients()[0].real();
    r.max_u = s.u.max_abs();
    r.max_v = s.v.max_abs();
    r.max_rho = s.rho.max_abs();
    return r;
}

namespace {

struct Triple {
    SpectralField a;
    SpectralField b;
    SpectralField c;

    Triple plus(double h, const Triple& k) const { return {axpy(a, h, k.a), axpy(b, h, k.b), axpy(c, h, k.c)}; }
    bool finite() const { return a.is_finite() && b.is_finite() && c.is_finite(); }
};

class Stepper {
public:
    Stepper(Formulation form, const StepperConfig& cfg, ReductionTag tag) : form_(form), cfg_(cfg), tag_(tag) {}

    Triple pack(const PrimitiveState& s) const
    {
        if (form_ == Formulation::momentum) {
            auto ms = to_momentum(s);
            return {ms.rho, ms.m, ms.n};
        }
        return {s.rho, s.u, s.v};
    }

    PrimitiveState primitive(const Triple& y, double t) const
    {
        if (form_ == Formulation::momentum) {
            return to_primitive(MomentumState{y.a, y.b, y.c, t, tag_});
        }
        return {y.a, y.b, y.c, t, tag_};
    }

    Triple rhs(const Triple& y, const PrimitiveState& p) const
    {
        Triple k = [&]() -> Triple {
            if (form_ == Formulation::momentum) {
                auto t = rhs_momentum(MomentumState{y.a, y.b, y.c, p.time, tag_}, p, cfg_.rhs);
                return {std::move(t.rho_t), std::move(t.m_t), std::move(t.n_t)};
            }
            auto t = rhs_convolution(p, cfg_.rhs);
            return {std::move(t.rho_t), std::move(t.u_t), std::move(t.v_t)};
        }();
        if (cfg_.negate_rhs) {
            k = {-k.a, -k.b, -k.c};
        }
        return k;
    }

    Triple rhs(const Triple& y, double t) const { return rhs(y, primitive(y, t)); }

private:
    Formulation form_;
    const StepperConfig& cfg_;
    ReductionTag tag_;
};

} // namespace

Trajectory evolve(const PrimitiveState& s0, const StepperConfig& cfg, Formulation form)
{
    cfg.validate();
    s0.validate();

    Trajectory traj;
    traj.config = cfg;
    traj.form = form;

    Stepper stepper(form, cfg, s0.reduction);
    Triple y = stepper.pack(s0);
    PrimitiveState p = stepper.primitive(y, s0.time);
    traj.snapshots.push_back(p);
    traj.diagnostics.push_back(measure(p));

    const int steps = cfg.n_steps();
    const double dt = cfg.effective_dt();
    const double h = p.grid().spacing();
    for (int step = 0; step < steps; ++step) {
        const double t = s0.time + step * dt;
        const double speed = traj.diagnostics.back().max_speed;
        const double limit = cfg.cfl_guard * h / std::max(speed, cfg.speed_floor);
        if (dt > limit) {
            std::ostringstream os;
            os << "CFL guard violated at t = " << t << ": dt = " << dt << " exceeds " << limit
               << " (max|uv| = " << speed << ", spacing = " << h << ")";
            traj.status = RunStatus::aborted;
            traj.reason = os.str();
            if (traj.snapshots.back().time != t) {
                traj.snapshots.push_back(p);
            }
            return traj;
        }

        const Triple k1 = stepper.rhs(y, p);
        const Triple k2 = stepper.rhs(y.plus(0.5 * dt, k1), t + 0.5 * dt);
        const Triple k3 = stepper.rhs(y.plus(0.5 * dt, k2), t + 0.5 * dt);
        const Triple k4 = stepper.rhs(y.plus(dt, k3), t + dt);
        Triple next = y.plus(dt / 6.0, k1).plus(dt / 3.0, k2).plus(dt / 3.0, k3).plus(dt / 6.0, k4);

        const double t_next = (step + 1 == steps) ? s0.time + cfg.t_end : t + dt;
        if (!next.finite()) {
            std::ostringstream os;
            os << "non-finite field produced by the step ending at t = " << t_next;
            traj.status = RunStatus::aborted;
            traj.reason = os.str();
            if (traj.snapshots.back().time != t) {
                traj.snapshots.push_back(p);
            }
            return traj;
        }
        y = std::move(next);
        p = stepper.primitive(y, t_next);
        traj.diagnostics.push_back(measure(p));
        if ((step + 1) % cfg.snapshot_stride == 0 || step + 1 == steps) {
            traj.snapshots.push_back(p);
        }
    }
    return traj;
}

} // namespace novikov
