#include "novikov/decay.hpp"

#include "novikov/field_io.hpp"
#include "novikov/spectral_ops.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace novikov {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void require_phi_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("phi_N weight needs alpha in (0, 1), got " + format_double(alpha) +
                                    "; properties (i) and (ii) are only claimed for 0 < alpha < 1");
    }
}

double log_sum_exp(const std::vector<double>& v)
{
    double mx = -inf;
    for (double x : v) {
        mx = std::max(mx, x);
    }
    if (mx == -inf) {
        return -inf;
    }
    double s = 0.0;
    for (double x : v) {
        s += std::exp(x - mx);
    }
    return mx + std::log(s);
}

std::vector<double> log_weighted(const SpectralField& f, const WeightSpec& w)
{
    f.require_finite("weighted norm");
    const Grid1D& g = f.grid();
    std::vector<double> out(static_cast<std::size_t>(g.n_points()));
    for (int i = 0; i < g.n_points(); ++i) {
        const double a = std::abs(f.value(i));
        out[static_cast<std::size_t>(i)] = a == 0.0 ? -inf : w.log_value(g.x(i)) + std::log(a);
    }
    return out;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

// Common slope with a separate intercept per group (the two tails of a field
// need not have the same amplitude). `intercept` is the mean of the group intercepts.
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y, const std::vector<int>& group)
{
    std::vector<int> ids(group);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<double> mx(ids.size(), 0.0), my(ids.size(), 0.0), cnt(ids.size(), 0.0);
    auto slot = [&](std::size_t i) {
        return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), group[i]) - ids.begin());
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto k = slot(i);
        mx[k] += x[i];
        my[k] += y[i];
        cnt[k] += 1.0;
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
        mx[k] /= cnt[k];
        my[k] /= cnt[k];
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto k = slot(i);
        sxx += (x[i] - mx[k]) * (x[i] - mx[k]);
        sxy += (x[i] - mx[k]) * (y[i] - my[k]);
    }
    LineFit f;
    f.slope = sxy / sxx;
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto k = slot(i);
        const double e = y[i] - (my[k] + f.slope * (x[i] - mx[k]));
        r += e * e;
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
        f.intercept += (my[k] - f.slope * mx[k]) / static_cast<double>(ids.size());
    }
    f.rms = std::sqrt(r / static_cast<double>(x.size()));
    return f;
}

struct TailSamples {
    std::vector<double> r;
    std::vector<double> logf;
    std::vector<int> side; ///< +1 right, -1 left
    double floor = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

TailSamples collect_tail(const SpectralField& f, const TailOptions& opt)
{
    if (!(opt.window_lo_fraction >= 0.0 && opt.window_lo_fraction < opt.window_hi_fraction &&
          opt.window_hi_fraction <= 1.0)) {
        throw std::invalid_argument("tail window fractions must satisfy 0 <= lo < hi <= 1");
    }
    f.require_finite("fit_tail_rate");
    const Grid1D& g = f.grid();
    TailSamples t;
    t.floor = opt.floor_relative * f.max_abs();
    t.lo = opt.window_lo_fraction * 0.5 * g.length();
    t.hi = opt.window_hi_fraction * 0.5 * g.length();

    auto scan = [&](int dir) {
        std::vector<int> idx;
        for (int i = 0; i < g.n_points(); ++i) {
            const double x = g.x(i) * dir;
            if (x >= t.lo && x <= t.hi) {
                idx.push_back(i);
            }
        }
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return g.x(a) * dir < g.x(b) * dir; });
        for (int i : idx) {
            const double a = std::abs(f.value(i));
            if (!(a > t.floor) || a == 0.0) {
                break;
            }
            t.r.push_back(std::abs(g.x(i)));
            t.logf.push_back(std::log(a));
            t.side.push_back(dir);
        }
    };
    if (opt.side != TailSide::left) {
        scan(+1);
    }
    if (opt.side != TailSide::right) {
        scan(-1);
    }
    return t;
}

// sup over the sampled x of log(w(x)) + log|(k * w^{-1})(x)| with k = g or g'.
struct C0Samples {
    std::vector<double> x;
    std::vector<double> log_c;
    std::vector<double> log_cd;
};

C0Samples sample_c0(const WeightSpec& w, double half_width, double spacing)
{
    using Quad = boost::math::quadrature::gauss<double, 20>;
    const double reach = 40.0;
    std::vector<double> bp = w.breakpoints();
    C0Samples out;

    const double fine = std::min(half_width, 60.0);
    std::vector<double> xs;
    for (double x = -fine; x <= fine + 1e-12; x += spacing) {
        xs.push_back(x);
    }
    for (double x = fine + 2.0; x <= half_width + 1e-12; x += 2.0) {
        xs.push_back(x);
        xs.push_back(-x);
    }

    for (double x : xs) {
        const double lwx = w.log_value(x);
        std::vector<double> cuts{std::min(x, 0.0) - reach, x, std::max(x, 0.0) + reach};
        for (double b : bp) {
            if (b > cuts.front() && b < cuts.back()) {
                cuts.push_back(b);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

        double c = 0.0, cd = 0.0;
        bool overflow = false;
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            const double a = cuts[p], b = cuts[p + 1];
            const int panels = std::max(1, static_cast<int>(std::ceil(b - a)));
            const double hw = (b - a) / panels;
            for (int q = 0; q < panels; ++q) {
                const double ya = a + q * hw, yb = ya + hw;
                const double side = 0.5 * (ya + yb) < x ? 1.0 : -1.0;
                const double v = Quad::integrate(
                    [&](double y) {
                        const double e = lwx - w.log_value(y) - std::abs(x - y);
                        if (e > 700.0) {
                            overflow = true;
                            return 0.0;
                        }
                        return 0.5 * std::exp(e);
                    },
                    ya, yb);
                c += v;
                // g'(x - y) = -sign(x - y) g(x - y)
                cd -= side * v;
            }
        }
        out.x.push_back(x);
        out.log_c.push_back(overflow ? inf : std::log(c));
        out.log_cd.push_back(overflow ? inf : (cd == 0.0 ? -inf : std::log(std::abs(cd))));
    }
    return out;
}

double sup_within(const C0Samples& s, const std::vector<double>& v, double radius)
{
    double m = -inf;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (std::abs(s.x[i]) <= radius + 1e-12) {
            m = std::max(m, v[i]);
        }
    }
    return m;
}

} // namespace

WeightSpec WeightSpec::exp_sym(double a)
{
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument("exp_sym weight needs a > 0");
    }
    WeightSpec w;
    w.kind = WeightKind::exp_sym;
    w.a = a;
    return w;
}

WeightSpec WeightSpec::phi_left(double alpha, double n)
{
    require_phi_alpha(alpha);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("phi_N weight needs N > 0");
    }
    WeightSpec w;
    w.kind = WeightKind::phi_left;
    w.alpha = alpha;
    w.n_cap = n;
    return w;
}

WeightSpec WeightSpec::phi_right(double alpha, double n)
{
    WeightSpec w = phi_left(alpha, n);
    w.kind = WeightKind::phi_right;
    return w;
}

WeightSpec WeightSpec::phi_min(double n)
{
    if (!(n >= 1.0) || !std::isfinite(n)) {
        throw std::invalid_argument("phi_min weight needs N >= 1");
    }
    WeightSpec w;
    w.kind = WeightKind::phi_min;
    w.n_cap = n;
    return w;
}

WeightSpec WeightSpec::psi(double a, double b, double c, double d)
{
    if (!(a >= 0.0) || !(b > 0.0) || !(c >= 0.0) || !(d >= 0.0)) {
        throw std::invalid_argument("psi weight needs a >= 0, b > 0, c >= 0, d >= 0");
    }
    WeightSpec w;
    w.kind = WeightKind::psi;
    w.a = a;
    w.b = b;
    w.c = c;
    w.d = d;
    return w;
}

double WeightSpec::log_value(double x) const
{
    const double r = std::abs(x);
    switch (kind) {
    case WeightKind::exp_sym:
        return a * r;
    case WeightKind::phi_left:
        if (x >= 0.0) {
            return 0.0;
        }
        return alpha * std::min(-x, n_cap);
    case WeightKind::phi_right:
        if (x <= 0.0) {
            return 0.0;
        }
        return alpha * std::min(x, n_cap);
    case WeightKind::phi_min:
        return std::min(r, std::log(n_cap));
    case WeightKind::psi:
        return a * std::pow(r, b) + c * std::log1p(r) + d * std::log(std::log(std::numbers::e + r));
    }
    throw std::logic_error("unknown weight kind");
}

double WeightSpec::log_cap() const
{
    switch (kind) {
    case WeightKind::phi_left:
    case WeightKind::phi_right:
        return alpha * n_cap;
    case WeightKind::phi_min:
        return std::log(n_cap);
    default:
        return inf;
    }
}

std::vector<double> WeightSpec::breakpoints() const
{
    switch (kind) {
    case WeightKind::exp_sym:
    case WeightKind::psi:
        return {0.0};
    case WeightKind::phi_left:
        return {-n_cap, 0.0};
    case WeightKind::phi_right:
        return {0.0, n_cap};
    case WeightKind::phi_min: {
        const double r = std::log(n_cap);
        return r > 0.0 ? std::vector<double>{-r, 0.0, r} : std::vector<double>{0.0};
    }
    }
    return {};
}

std::string WeightSpec::describe() const
{
    switch (kind) {
    case WeightKind::exp_sym:
        return "exp_sym(a=" + format_double(a) + ")";
    case WeightKind::phi_left:
    case WeightKind::phi_right:
        return to_string(kind) + "(alpha=" + format_double(alpha) + ", N=" + format_double(n_cap) + ")";
    case WeightKind::phi_min:
        return "phi_min(N=" + format_double(n_cap) + ")";
    case WeightKind::psi:
        return "psi(a=" + format_double(a) + ", b=" + format_double(b) + ", c=" + format_double(c) +
               ", d=" + format_double(d) + ")";
    }
    return "?";
}

std::string to_string(WeightKind k)
{
    switch (k) {
    case WeightKind::exp_sym:
        return "exp_sym";
    case WeightKind::phi_left:
        return "phi_left";
    case WeightKind::phi_right:
        return "phi_right";
    case WeightKind::phi_min:
        return "phi_min";
    case WeightKind::psi:
        return "psi";
    }
    return "?";
}

WeightKind weight_kind_from_string(const std::string& name)
{
    for (auto k : {WeightKind::exp_sym, WeightKind::phi_left, WeightKind::phi_right, WeightKind::phi_min,
                   WeightKind::psi}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown weight '" + name + "'");
}

double weighted_sup(const SpectralField& f, const WeightSpec& w)
{
    const auto l = log_weighted(f, w);
    const double m = *std::max_element(l.begin(), l.end());
    return m == -inf ? 0.0 : std::exp(m);
}

double weighted_lp(const SpectralField& f, const WeightSpec& w, double p)
{
    if (std::isinf(p) && p > 0.0) {
        return weighted_sup(f, w);
    }
    if (!(p >= 1.0)) {
        throw std::invalid_argument("weighted_lp needs p >= 1");
    }
    auto l = log_weighted(f, w);
    for (double& x : l) {
        x *= p;
    }
    const double s = log_sum_exp(l);
    if (s == -inf) {
        return 0.0;
    }
    return std::exp((std::log(f.grid().spacing()) + s) / p);
}

WeightCheck check_weight(const WeightSpec& w, double half_width, double spacing)
{
    if (w.kind == WeightKind::phi_left || w.kind == WeightKind::phi_right) {
        require_phi_alpha(w.alpha);
    }
    if (!(half_width > 0.0) || !(spacing > 0.0) || spacing > 1.0) {
        throw std::invalid_argument("check_weight needs half_width > 0 and 0 < spacing <= 1");
    }
    WeightCheck r;
    const auto bp = w.breakpoints();
    const double h = spacing;
    // Centered differences overestimate |w'|/w by about h^2/6 for exponential pieces.
    const double tol = 1.0 + h * h / 4.0;
    double max_ratio = 0.0, min_d = inf;
    bool magnitude_ok = true, nonneg = true;
    const double reach = std::min(half_width, 60.0);
    for (double x = -reach; x <= reach + 1e-12; x += h / 2.0) {
        bool smooth = true;
        for (double b : bp) {
            if (std::abs(x - b) <= h) {
                smooth = false;
            }
        }
        if (!smooth) {
            continue;
        }
        const double l0 = w.log_value(x);
        const double d = (std::exp(w.log_value(x + h) - l0) - std::exp(w.log_value(x - h) - l0)) / (2.0 * h);
        max_ratio = std::max(max_ratio, std::abs(d));
        min_d = std::min(min_d, d);
        if (std::abs(d) > tol) {
            magnitude_ok = false;
        }
        if (d < -1e-12) {
            nonneg = false;
        }
        if (l0 < -1e-15 || l0 > w.log_cap() + 1e-12) {
            r.notes.push_back("weight leaves [1, cap] at x = " + format_double(x));
        }
    }
    r.property_i = magnitude_ok;
    r.literal_nonnegative = nonneg;
    r.max_derivative_ratio = max_ratio;
    r.min_derivative = min_d;
    if (magnitude_ok && !nonneg) {
        r.notes.push_back("w' <= 0 somewhere: |w'| <= w holds, the sign is that of a left-facing weight");
    }

    const auto s = sample_c0(w, half_width, spacing);
    const double x1 = half_width / 4.0, x2 = half_width / 2.0, x3 = half_width;
    const double c1 = sup_within(s, s.log_c, x1);
    const double c2 = sup_within(s, s.log_c, x2);
    const double c3 = sup_within(s, s.log_c, x3);
    const double d3 = sup_within(s, s.log_cd, x3);
    r.c0_inner_growth_rate = (c2 - c1) / (x2 - x1);
    r.c0_growth_rate = (c3 - c2) / (x3 - x2);
    const bool overflow = std::isinf(c3);
    const bool growing = r.c0_growth_rate > 1e-3 && r.c0_growth_rate >= 0.5 * r.c0_inner_growth_rate;
    r.c0_finite = !overflow && !growing;
    if (r.c0_finite) {
        r.c0 = std::exp(c3);
        r.c0_derivative = std::exp(d3);
    } else {
        r.c0 = inf;
        r.c0_derivative = inf;
        r.notes.push_back("w (g * 1/w) grows like exp(" + format_double(r.c0_growth_rate) +
                          " |x|); no finite C0");
    }
    return r;
}

std::string to_string(TailSide s)
{
    switch (s) {
    case TailSide::left:
        return "left";
    case TailSide::right:
        return "right";
    case TailSide::both:
        return "both";
    }
    return "?";
}

TailSide tail_side_from_string(const std::string& name)
{
    for (auto s : {TailSide::left, TailSide::right, TailSide::both}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw std::invalid_argument("unknown tail side '" + name + "'");
}

int usable_tail_points(const SpectralField& f, const TailOptions& opt)
{
    return static_cast<int>(collect_tail(f, opt).r.size());
}

TailFit fit_tail_rate(const SpectralField& f, const TailOptions& opt)
{
    const auto t = collect_tail(f, opt);
    const int n = static_cast<int>(t.r.size());
    if (n < std::max(opt.min_points, 2)) {
        throw std::runtime_error("fit_tail_rate: " + std::to_string(n) + " samples above floor " +
                                 format_double(t.floor) + " in |x| window [" + format_double(t.lo) + ", " +
                                 format_double(t.hi) + "], need " + std::to_string(opt.min_points));
    }
    const auto line = least_squares(t.r, t.logf, t.side);
    TailFit fit;
    fit.rate = -line.slope;
    fit.intercept = line.intercept;
    fit.residual = line.rms;
    fit.floor = t.floor;
    fit.points = n;
    fit.window_lo = *std::min_element(t.r.begin(), t.r.end());
    fit.window_hi = *std::max_element(t.r.begin(), t.r.end());

    if (n >= 8) {
        const double mid = 0.5 * (fit.window_lo + fit.window_hi);
        std::vector<double> ri, li, ro, lo;
        std::vector<int> si, so;
        for (std::size_t i = 0; i < t.r.size(); ++i) {
            const bool inner = t.r[i] < mid;
            (inner ? ri : ro).push_back(t.r[i]);
            (inner ? li : lo).push_back(t.logf[i]);
            (inner ? si : so).push_back(t.side[i]);
        }
        if (ri.size() >= 4 && ro.size() >= 4) {
            fit.inner_rate = -least_squares(ri, li, si).slope;
            fit.outer_rate = -least_squares(ro, lo, so).slope;
            if (fit.inner_rate > 0.0 && fit.outer_rate > 1.1 * fit.inner_rate) {
                fit.super_exponential = true;
                fit.warning = "local rate rises from " + format_double(fit.inner_rate) + " to " +
                              format_double(fit.outer_rate) + " across the window; tail is faster than exponential";
            }
        }
    }
    return fit;
}

const std::vector<std::string>& decay_components()
{
    static const std::vector<std::string> names{"rho", "rho_x", "u", "u_x", "v", "v_x", "m", "n"};
    return names;
}

SpectralField decay_component(const PrimitiveState& s, const std::string& name)
{
    if (name == "rho") {
        return s.rho;
    }
    if (name == "rho_x") {
        return spectral_derivative(s.rho, 1);
    }
    if (name == "u") {
        return s.u;
    }
    if (name == "u_x") {
        return spectral_derivative(s.u, 1);
    }
    if (name == "v") {
        return s.v;
    }
    if (name == "v_x") {
        return spectral_derivative(s.v, 1);
    }
    if (name == "m") {
        return helmholtz_forward(s.u);
    }
    if (name == "n") {
        return helmholtz_forward(s.v);
    }
    throw std::invalid_argument("unknown decay component '" + name + "'");
}

DecayReport decay_persistence_experiment(const DecayScenario& sc)
{
    for (const auto& e : sc.expectations) {
        decay_component(sc.initial, e.component); // validates the name
        if (!(e.min_rate <= e.max_rate)) {
            throw std::invalid_argument("decay expectation for " + e.component + " has min_rate > max_rate");
        }
    }
    if (sc.sample_times.empty()) {
        throw std::invalid_argument("decay experiment needs at least one sample time");
    }

    DecayReport rep;
    rep.trajectory = evolve(sc.initial, sc.stepper, sc.form);
    rep.run_status = rep.trajectory.status;
    rep.reason = rep.trajectory.reason;

    auto seam_check = [&](const PrimitiveState& s) {
        for (const char* name : {"rho", "u", "v"}) {
            const SpectralField f = decay_component(s, name);
            const double peak = f.max_abs();
            if (peak == 0.0) {
                continue;
            }
            const double edge = std::abs(f.value(0));
            if (edge > 1e-12 * peak) {
                rep.warnings.push_back(std::string(name) + " at the seam is " + format_double(edge / peak) +
                                       " of its peak at t = " + format_double(s.time) + " (tail condition 1e-12)");
            }
        }
    };
    seam_check(rep.trajectory.snapshots.front());
    if (rep.trajectory.snapshots.size() > 1) {
        seam_check(rep.trajectory.snapshots.back());
    }

    const auto times = rep.trajectory.times();
    const double t_last = rep.trajectory.ok() ? sc.stepper.t_end : times.back();
    std::vector<const PrimitiveState*> picked;
    for (double ts : sc.sample_times) {
        if (!rep.trajectory.ok() && ts > t_last + 1e-12) {
            rep.warnings.push_back("sample time " + format_double(ts) + " not reached");
            continue;
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (std::abs(times[i] - ts) < std::abs(times[best] - ts)) {
                best = i;
            }
        }
        picked.push_back(&rep.trajectory.snapshots[best]);
    }

    for (const PrimitiveState* s : picked) {
        for (const auto& name : decay_components()) {
            DecayFit df;
            df.time = s->time;
            df.component = name;
            const SpectralField f = decay_component(*s, name);
            const int pts = usable_tail_points(f, sc.tail);
            if (pts == 0) {
                df.status = "below_floor";
                df.fit.rate = inf;
                df.fit.floor = sc.tail.floor_relative * f.max_abs();
            } else if (pts < sc.tail.min_points) {
                df.status = "insufficient";
                df.fit.rate = std::numeric_limits<double>::quiet_NaN();
                df.fit.points = pts;
                df.fit.floor = sc.tail.floor_relative * f.max_abs();
            } else {
                df.fit = fit_tail_rate(f, sc.tail);
            }
            rep.fits.push_back(df);
        }
    }

    rep.pass = rep.trajectory.ok() && !picked.empty();
    if (!picked.empty()) {
        const double t_check = picked.back()->time;
        for (const auto& e : sc.expectations) {
            DecayVerdict v;
            v.component = e.component;
            v.time = t_check;
            v.min_rate = e.min_rate;
            v.max_rate = e.max_rate;
            for (const auto& df : rep.fits) {
                if (df.time == t_check && df.component == e.component) {
                    v.rate = df.fit.rate;
                }
            }
            if (std::isnan(v.rate)) {
                v.margin = -inf;
                v.pass = false;
            } else {
                const double lo = v.rate - e.min_rate;
                const double hi = std::isinf(e.max_rate) ? inf : e.max_rate - v.rate;
                v.margin = std::isinf(v.rate) && std::isinf(e.max_rate) ? inf : std::min(lo, hi);
                v.pass = v.rate >= e.min_rate && v.rate <= e.max_rate;
            }
            rep.pass = rep.pass && v.pass;
            rep.verdicts.push_back(v);
        }
    }
    if (!rep.trajectory.ok()) {
        rep.reason = "evolution aborted: " + rep.trajectory.reason;
    }
    return rep;
}

} // namespace novikov
