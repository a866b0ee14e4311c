#include "novikov/friedrichs.hpp"

#include "novikov/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace novikov {

namespace {

struct Frame {
    SpectralField rho;
    SpectralField m;
    SpectralField n;
};

// Frozen coefficient a = u v and the three source terms built from one frame.
struct Coefficients {
    SpectralField a;
    SpectralField s_rho;
    SpectralField s_m;
    SpectralField s_n;

    Coefficients midpoint(const Coefficients& next) const
    {
        return {axpy(0.5 * a, 0.5, next.a), axpy(0.5 * s_rho, 0.5, next.s_rho), axpy(0.5 * s_m, 0.5, next.s_m),
                axpy(0.5 * s_n, 0.5, next.s_n)};
    }
};

SpectralField pointwise(const Grid1D& g, auto&& fn)
{
    std::vector<double> out(static_cast<std::size_t>(g.n_points()));
    for (int i = 0; i < g.n_points(); ++i) {
        out[static_cast<std::size_t>(i)] = fn(i);
    }
    return SpectralField::from_values(g, std::move(out));
}

Coefficients coefficients_of(const Frame& f, double fraction)
{
    const Grid1D& g = f.rho.grid();
    const auto uf = helmholtz_inverse(f.m);
    const auto vf = helmholtz_inverse(f.n);
    const auto uxf = spectral_derivative(uf, 1);
    const auto vxf = spectral_derivative(vf, 1);
    const auto r = f.rho.values();
    const auto m = f.m.values();
    const auto n = f.n.values();
    const auto u = uf.values();
    const auto v = vf.values();
    const auto ux = uxf.values();
    const auto vx = vxf.values();
    return {
        pointwise(g, [&](int i) { return u[i] * v[i]; }),
        dealias(pointwise(g, [&](int i) { return -r[i] * (ux[i] * v[i] + u[i] * vx[i]); }), fraction),
        dealias(pointwise(g, [&](int i) { return -3.0 * m[i] * ux[i] * v[i] - r[i] * r[i] * u[i]; }), fraction),
        dealias(pointwise(g, [&](int i) { return -3.0 * n[i] * u[i] * vx[i] + r[i] * r[i] * v[i]; }), fraction),
    };
}

SpectralField transport(const SpectralField& a, const SpectralField& y, const SpectralField& source, double fraction)
{
    const auto yx = spectral_derivative(y, 1);
    return source - dealias(multiply(a, yx), fraction);
}

Frame tendency(const Coefficients& c, const Frame& y, double fraction)
{
    return {transport(c.a, y.rho, c.s_rho, fraction), transport(c.a, y.m, c.s_m, fraction),
            transport(c.a, y.n, c.s_n, fraction)};
}

Frame plus(const Frame& y, double h, const Frame& k)
{
    return {axpy(y.rho, h, k.rho), axpy(y.m, h, k.m), axpy(y.n, h, k.n)};
}

bool finite(const Frame& f)
{
    return f.rho.is_finite() && f.m.is_finite() && f.n.is_finite();
}

double frame_besov(const Frame& f, double s, double r, const DyadicPartition& part)
{
    const BesovParams p{s, 2.0, r};
    return besov_norm(f.rho, p, part) + besov_norm(f.m, p, part) + besov_norm(f.n, p, part);
}

double frame_sup_diff(const Frame& a, const Frame& b)
{
    return std::max({(a.rho - b.rho).max_abs(), (a.m - b.m).max_abs(), (a.n - b.n).max_abs()});
}

Frame diff(const Frame& a, const Frame& b)
{
    return {a.rho - b.rho, a.m - b.m, a.n - b.n};
}

// One iterate stored at every step (or a single frame when constant in time).
struct IterateHistory {
    std::vector<Frame> frames;
    std::vector<Coefficients> coeffs;
    bool constant = false;

    const Frame& frame(std::size_t i) const { return constant ? frames.front() : frames[i]; }
    const Coefficients& coeff(std::size_t i) const { return constant ? coeffs.front() : coeffs[i]; }
};

Trajectory to_trajectory(const IterateHistory& h, int steps, double dt, double t0, const StepperConfig& cfg,
                         ReductionTag tag)
{
    Trajectory traj;
    traj.config = cfg;
    traj.form = Formulation::momentum;
    for (int i = 0; i <= steps; ++i) {
        const double t = (i == steps) ? t0 + cfg.t_end : t0 + i * dt;
        const Frame& f = h.frame(static_cast<std::size_t>(i));
        PrimitiveState p = to_primitive(MomentumState{f.rho, f.m, f.n, t, tag});
        traj.diagnostics.push_back(measure(p));
        if (i % cfg.snapshot_stride == 0 || i == steps) {
            traj.snapshots.push_back(std::move(p));
        }
    }
    return traj;
}

// Residual of y_t + a y_x - S at interior steps relative to max(|y_t|, |y|), y_t by
// 5-point centered differences.
double linear_residual(const IterateHistory& next, const IterateHistory& prev, int steps, double dt, double fraction)
{
    if (steps < 5 || next.constant) {
        return 0.0;
    }
    double worst = 0.0;
    const int stride = std::max(1, (steps - 4) / 16);
    for (int i = 2; i <= steps - 2; i += stride) {
        const auto at = [&](int j) -> const Frame& { return next.frame(static_cast<std::size_t>(j)); };
        const auto ddt = [&](auto member) {
            return (1.0 / (12.0 * dt)) *
                   (at(i - 2).*member - 8.0 * (at(i - 1).*member) + 8.0 * (at(i + 1).*member) - at(i + 2).*member);
        };
        const Frame rhs = tendency(prev.coeff(static_cast<std::size_t>(i)), at(i), fraction);
        const Frame lhs{ddt(&Frame::rho), ddt(&Frame::m), ddt(&Frame::n)};
        const Frame& y = at(i);
        const double scale = std::max({lhs.rho.max_abs(), lhs.m.max_abs(), lhs.n.max_abs(), y.rho.max_abs(),
                                       y.m.max_abs(), y.n.max_abs(), 1e-300});
        worst = std::max(worst, frame_sup_diff(lhs, rhs) / scale);
    }
    return worst;
}

} // namespace

double geometric_ratio(const std::vector<double>& values, int first_index)
{
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > 0.0 && std::isfinite(values[i])) {
            xs.push_back(first_index + static_cast<double>(i));
            ys.push_back(std::log(values[i]));
        }
    }
    if (xs.size() < 2) {
        throw std::invalid_argument("geometric_ratio: need at least two positive values");
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::exp(slope);
}

FriedrichsResult friedrichs_iterate(const MomentumState& s0, int n_iters, const StepperConfig& cfg, int fit_lo,
                                    int fit_hi)
{
    if (n_iters < 1) {
        throw std::invalid_argument("friedrichs_iterate: n_iters must be positive");
    }
    if (fit_lo < 2 || fit_hi <= fit_lo) {
        throw std::invalid_argument("friedrichs_iterate: fit window must satisfy 2 <= lo < hi");
    }
    cfg.validate();
    s0.validate();

    const Grid1D& g = s0.grid();
    const DyadicPartition part(g);
    const double fraction = cfg.rhs.dealias_fraction;
    const int steps = cfg.n_steps();
    const double dt = cfg.effective_dt();
    const double t0 = s0.time;

    FriedrichsResult out;
    out.report.fit_lo = fit_lo;
    out.report.fit_hi = fit_hi;

    StepperConfig direct_cfg = cfg;
    direct_cfg.snapshot_stride = 1;
    Trajectory direct = evolve(to_primitive(s0), direct_cfg, Formulation::momentum);
    out.report.direct_status = direct.status;
    std::vector<Frame> direct_frames;
    for (const auto& p : direct.snapshots) {
        auto ms = to_momentum(p);
        direct_frames.push_back({ms.rho, ms.m, ms.n});
    }
    if (!direct.ok()) {
        out.report.reason = "direct solve: " + direct.reason;
    }

    const auto data_cut = [&](int k) {
        return Frame{low_cutoff(s0.rho, k - 1, part), low_cutoff(s0.m, k - 1, part), low_cutoff(s0.n, k - 1, part)};
    };

    IterateHistory prev;
    prev.constant = true;
    prev.frames.push_back(data_cut(1));
    prev.coeffs.push_back(coefficients_of(prev.frames.front(), fraction));

    const double b0 = frame_besov(data_cut(n_iters), 0.5, 1.0, part);
    std::vector<double> gaps;

    auto record = [&](int k, const IterateHistory& cur, const IterateHistory* before) {
        IterateRecord rec;
        rec.index = k;
        for (int i = 0; i <= steps; ++i) {
            const Frame& f = cur.frame(static_cast<std::size_t>(i));
            rec.besov_sup = std::max(rec.besov_sup, frame_besov(f, 0.5, 1.0, part));
            if (before != nullptr) {
                const Frame d = diff(f, before->frame(static_cast<std::size_t>(i)));
                rec.diff_weak = std::max(rec.diff_weak, frame_besov(d, -0.5, BesovParams::inf, part));
                rec.diff_critical = std::max(rec.diff_critical, frame_besov(d, 0.5, 1.0, part));
            }
            if (static_cast<std::size_t>(i) < direct_frames.size()) {
                rec.gap_direct = std::max(rec.gap_direct, frame_sup_diff(f, direct_frames[static_cast<std::size_t>(i)]));
            }
        }
        if (!std::isfinite(rec.besov_sup) || rec.besov_sup > 1e6 * std::max(b0, 1e-300)) {
            rec.diverged = true;
        }
        return rec;
    };

    out.report.iterates.push_back(record(1, prev, nullptr));
    out.iterates.push_back(to_trajectory(prev, steps, dt, t0, cfg, s0.reduction));

    for (int k = 2; k <= n_iters; ++k) {
        IterateHistory cur;
        cur.frames.reserve(static_cast<std::size_t>(steps + 1));
        cur.frames.push_back(data_cut(k));
        bool ok = true;
        for (int i = 0; i < steps; ++i) {
            const Coefficients& c0 = prev.coeff(static_cast<std::size_t>(i));
            const Coefficients& c1 = prev.coeff(static_cast<std::size_t>(i + 1));
            const Coefficients ch = c0.midpoint(c1);
            const Frame& y = cur.frames.back();
            const Frame k1 = tendency(c0, y, fraction);
            const Frame k2 = tendency(ch, plus(y, 0.5 * dt, k1), fraction);
            const Frame k3 = tendency(ch, plus(y, 0.5 * dt, k2), fraction);
            const Frame k4 = tendency(c1, plus(y, dt, k3), fraction);
            Frame next = plus(plus(plus(plus(y, dt / 6.0, k1), dt / 3.0, k2), dt / 3.0, k3), dt / 6.0, k4);
            if (!finite(next)) {
                ok = false;
                break;
            }
            cur.frames.push_back(std::move(next));
        }
        if (!ok) {
            IterateRecord rec;
            rec.index = k;
            rec.diverged = true;
            out.report.iterates.push_back(rec);
            out.report.diverged = true;
            out.report.reason = "iterate " + std::to_string(k) + " produced non-finite values";
            break;
        }
        cur.coeffs.reserve(cur.frames.size());
        for (const auto& f : cur.frames) {
            cur.coeffs.push_back(coefficients_of(f, fraction));
        }
        IterateRecord rec = record(k, cur, &prev);
        rec.linear_residual = linear_residual(cur, prev, steps, dt, fraction);
        out.report.iterates.push_back(rec);
        out.iterates.push_back(to_trajectory(cur, steps, dt, t0, cfg, s0.reduction));
        if (rec.diverged) {
            out.report.diverged = true;
            out.report.reason = "iterate " + std::to_string(k) + " exceeded 1e6 times the data norm";
            break;
        }
        prev = std::move(cur);
    }

    std::vector<double> window;
    for (const auto& rec : out.report.iterates) {
        if (rec.index >= fit_lo && rec.index <= fit_hi) {
            window.push_back(rec.diff_weak);
        }
    }
    out.report.ratio = window.size() >= 2 ? geometric_ratio(window, fit_lo) : std::nan("");
    out.report.gap_monotone = direct.ok();
    for (std::size_t i = 1; i < out.report.iterates.size(); ++i) {
        if (!(out.report.iterates[i].gap_direct < out.report.iterates[i - 1].gap_direct)) {
            out.report.gap_monotone = false;
        }
    }
    out.direct = std::move(direct);
    return out;
}

DependenceReport continuous_dependence_probe(const MomentumState& s0, const MomentumState& direction,
                                             const std::vector<double>& epsilons, const StepperConfig& cfg,
                                             double theta)
{
    s0.validate();
    direction.validate();
    require_same_grid(s0.grid(), direction.grid(), "continuous_dependence_probe");
    const DyadicPartition part(s0.grid());
    const Frame d{direction.rho, direction.m, direction.n};
    const double dnorm = frame_besov(d, 0.5, 1.0, part);
    if (!(dnorm > 0.0)) {
        throw std::invalid_argument("continuous_dependence_probe: perturbation direction is zero");
    }

    StepperConfig run_cfg = cfg;
    run_cfg.snapshot_stride = std::max(1, cfg.n_steps());
    DependenceReport rep;
    rep.theta = theta;
    const Trajectory base = evolve(to_primitive(s0), run_cfg, Formulation::momentum);
    if (!base.ok()) {
        rep.reason = "unperturbed run: " + base.reason;
        return rep;
    }
    const MomentumState end0 = to_momentum(base.final_state());

    for (double eps : epsilons) {
        DependenceRecord rec;
        rec.epsilon = eps;
        const double c = eps / dnorm;
        MomentumState pert{axpy(s0.rho, c, d.rho), axpy(s0.m, c, d.m), axpy(s0.n, c, d.n), s0.time, s0.reduction};
        const Trajectory run = evolve(to_primitive(pert), run_cfg, Formulation::momentum);
        rec.status = run.status;
        if (!run.ok()) {
            rep.reason = "perturbed run (epsilon " + std::to_string(eps) + "): " + run.reason;
        } else {
            const MomentumState end = to_momentum(run.final_state());
            rec.difference = frame_besov(Frame{end.rho - end0.rho, end.m - end0.m, end.n - end0.n}, 0.5, 1.0, part);
            rec.scaled = eps > 0.0 ? rec.difference / std::pow(eps, theta) : 0.0;
        }
        rep.ladder.push_back(rec);
    }

    rep.monotone = rep.reason.empty();
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < rep.ladder.size(); ++i) {
        const auto& r = rep.ladder[i];
        if (i > 0 && !(r.difference < rep.ladder[i - 1].difference)) {
            rep.monotone = false;
        }
        if (r.epsilon > 0.0 && r.status == RunStatus::completed) {
            lo = std::min(lo, r.scaled);
            hi = std::max(hi, r.scaled);
        }
    }
    rep.fitted_c = hi;
    rep.spread = (hi > 0.0 && lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
    return rep;
}

} // namespace novikov
