#include "novikov/verification.hpp"

#include "novikov/field_io.hpp"
#include "novikov/profiles.hpp"
#include "novikov/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace novikov {

namespace {

using Values = std::vector<double>;
using Mat = std::array<Values, 9>;

Values vals(const SpectralField& f)
{
    return {f.values().begin(), f.values().end()};
}

Values filled(std::size_t n, double c)
{
    return Values(n, c);
}

Mat matmul(const Mat& a, const Mat& b)
{
    const std::size_t n = a[0].size();
    Mat out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            Values e(n, 0.0);
            for (int k = 0; k < 3; ++k) {
                const Values& x = a[static_cast<std::size_t>(3 * i + k)];
                const Values& y = b[static_cast<std::size_t>(3 * k + j)];
                for (std::size_t p = 0; p < n; ++p) {
                    e[p] += x[p] * y[p];
                }
            }
            out[static_cast<std::size_t>(3 * i + j)] = std::move(e);
        }
    }
    return out;
}

struct Derived {
    Values rho, u, v, ux, vx, uxx, vxx, m, n;
};

Derived derive(const PrimitiveState& s)
{
    s.validate();
    Derived d;
    d.rho = vals(s.rho);
    d.u = vals(s.u);
    d.v = vals(s.v);
    d.ux = vals(spectral_derivative(s.u, 1));
    d.vx = vals(spectral_derivative(s.v, 1));
    d.uxx = vals(spectral_derivative(s.u, 2));
    d.vxx = vals(spectral_derivative(s.v, 2));
    d.m = vals(helmholtz_forward(s.u));
    d.n = vals(helmholtz_forward(s.v));
    return d;
}

Mat u_matrix(const Derived& d, double l)
{
    const std::size_t n = d.u.size();
    Mat U;
    for (auto& e : U) {
        e = filled(n, 0.0);
    }
    U[1] = filled(n, 1.0);
    for (std::size_t p = 0; p < n; ++p) {
        U[3][p] = 1.0 + l * d.rho[p] * d.rho[p];
        U[5][p] = d.m[p];
        U[6][p] = l * d.n[p];
    }
    return U;
}

Mat v_matrix(const Derived& d, double l)
{
    const std::size_t n = d.u.size();
    Mat V;
    for (auto& e : V) {
        e = filled(n, 0.0);
    }
    const double third = 1.0 / (3.0 * l);
    for (std::size_t p = 0; p < n; ++p) {
        const double u = d.u[p], v = d.v[p], ux = d.ux[p], vx = d.vx[p], r2 = d.rho[p] * d.rho[p];
        V[0][p] = third + u * vx;
        V[1][p] = -u * v;
        V[2][p] = u / l;
        V[3][p] = ux * vx - l * r2 * u * v;
        V[4][p] = third - ux * v;
        V[5][p] = ux / l - d.m[p] * u * v;
        V[6][p] = -l * d.n[p] * u * v - vx;
        V[7][p] = v;
        V[8][p] = ux * v - u * vx - 2.0 * third;
    }
    return V;
}

MatrixField to_fields(const Grid1D& g, Mat m)
{
    MatrixField f;
    for (auto& e : m) {
        f.entries.push_back(SpectralField::from_values(g, std::move(e)));
    }
    return f;
}

double l2_of(const SpectralField& f)
{
    double s = 0.0;
    for (double x : f.values()) {
        s += x * x;
    }
    return std::sqrt(s * f.grid().spacing());
}

// Squared L^2 distance between f and its reflection about b, from the coefficients.
double reflection_gap2(const SpectralField& f, double b)
{
    const Grid1D& g = f.grid();
    const auto c = f.coefficients();
    const double shift = 2.0 * (b + 0.5 * g.length());
    double s = 0.0;
    for (int k = 0; k <= g.nyquist(); ++k) {
        const double kappa = g.wavenumber(k);
        Complex d = std::conj(c[static_cast<std::size_t>(k)]) * std::polar(1.0, -kappa * shift);
        if (k == g.nyquist()) {
            d = d.real();
        }
        const double w = (k == 0 || k == g.nyquist()) ? 1.0 : 2.0;
        s += w * std::norm(c[static_cast<std::size_t>(k)] - d);
    }
    return s * g.length();
}

double state_defect(const PrimitiveState& s, double b)
{
    return std::sqrt(reflection_gap2(s.rho, b)) + std::sqrt(reflection_gap2(s.u, b)) +
           std::sqrt(reflection_gap2(s.v, b));
}

double canonical_axis(double b, double length)
{
    const double q = 0.5 * length;
    b = std::fmod(b, q);
    if (b <= -0.5 * q) {
        b += q;
    }
    if (b > 0.5 * q) {
        b -= q;
    }
    return b;
}

} // namespace

void LaxPairSpec::validate() const
{
    if (!(lambda != 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("Lax pair needs a finite nonzero lambda (V has 1/(3 lambda) entries)");
    }
}

LaxPair lax_matrices(const PrimitiveState& s, const LaxPairSpec& spec)
{
    spec.validate();
    const Derived d = derive(s);
    return {to_fields(s.grid(), u_matrix(d, spec.lambda)), to_fields(s.grid(), v_matrix(d, spec.lambda))};
}

MatrixField zero_curvature_at(const PrimitiveState& s, const SpectralField& rho2_t, const SpectralField& m_t,
                              const SpectralField& n_t, const LaxPairSpec& spec)
{
    spec.validate();
    const double l = spec.lambda;
    const Derived d = derive(s);
    const Mat U = u_matrix(d, l);
    const Mat V = v_matrix(d, l);
    const Mat UV = matmul(U, V);
    const Mat VU = matmul(V, U);
    const std::size_t n = d.u.size();
    Mat R;
    for (std::size_t e = 0; e < 9; ++e) {
        const Values vx = vals(spectral_derivative(SpectralField::from_values(s.grid(), V[e]), 1));
        R[e] = Values(n);
        for (std::size_t p = 0; p < n; ++p) {
            R[e][p] = -vx[p] + UV[e][p] - VU[e][p];
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        R[3][p] += l * rho2_t.value(static_cast<int>(p));
        R[5][p] += m_t.value(static_cast<int>(p));
        R[6][p] += l * n_t.value(static_cast<int>(p));
    }
    return to_fields(s.grid(), std::move(R));
}

ZeroCurvatureReport zero_curvature_residual(const Trajectory& traj, const LaxPairSpec& spec, int order)
{
    spec.validate();
    if (order != 2 && order != 4) {
        throw std::invalid_argument("zero_curvature_residual: order must be 2 or 4");
    }
    const auto& snaps = traj.snapshots;
    const int half = order / 2;
    if (static_cast<int>(snaps.size()) < order + 1) {
        throw std::invalid_argument("zero_curvature_residual needs at least " + std::to_string(order + 1) +
                                    " snapshots, got " + std::to_string(snaps.size()));
    }
    const auto times = traj.times();
    ZeroCurvatureReport rep;
    rep.lambda = spec.lambda;
    rep.order = order;

    std::vector<SpectralField> rho2, m, n;
    for (const auto& s : snaps) {
        rho2.push_back(multiply(s.rho, s.rho));
        m.push_back(helmholtz_forward(s.u));
        n.push_back(helmholtz_forward(s.v));
    }
    auto stencil = [&](const std::vector<SpectralField>& f, std::size_t i, double dt) {
        if (order == 2) {
            return (1.0 / (2.0 * dt)) * (f[i + 1] - f[i - 1]);
        }
        return (1.0 / (12.0 * dt)) * (8.0 * (f[i + 1] - f[i - 1]) - (f[i + 2] - f[i - 2]));
    };

    for (std::size_t i = static_cast<std::size_t>(half); i + static_cast<std::size_t>(half) < snaps.size(); ++i) {
        const double dt = times[i + 1] - times[i];
        bool uniform = dt > 0.0;
        for (int k = -half; k < half; ++k) {
            const double step = times[i + static_cast<std::size_t>(k + 1)] - times[i + static_cast<std::size_t>(k)];
            uniform = uniform && std::abs(step - dt) <= 1e-9 * dt;
        }
        if (!uniform) {
            continue;
        }
        const auto R = zero_curvature_at(snaps[i], stencil(rho2, i, dt), stencil(m, i, dt), stencil(n, i, dt), spec);
        double mx = 0.0, l2 = 0.0;
        for (std::size_t e = 0; e < 9; ++e) {
            const double a = R.entries[e].max_abs();
            rep.entry_max[e] = std::max(rep.entry_max[e], a);
            mx = std::max(mx, a);
            const double q = l2_of(R.entries[e]);
            l2 += q * q;
        }
        rep.times.push_back(times[i]);
        rep.max_entry.push_back(mx);
        rep.l2.push_back(std::sqrt(l2));
        rep.max_norm = std::max(rep.max_norm, mx);
        rep.l2_norm = std::max(rep.l2_norm, std::sqrt(l2));
    }
    if (rep.times.empty()) {
        throw std::invalid_argument("zero_curvature_residual: no equally spaced snapshot stencil available");
    }
    return rep;
}

double mass_integral(const SpectralField& rho)
{
    return rho.grid().length() * rho.coefficients()[0].real();
}

double TestFunction::bump(double s, int derivative) const
{
    if (std::abs(s) >= 1.0) {
        return 0.0;
    }
    const double K = order;
    const double q = 1.0 - s * s;
    switch (derivative) {
    case 0:
        return std::pow(q, K);
    case 1:
        return -2.0 * K * s * std::pow(q, K - 1);
    case 2:
        return -2.0 * K * std::pow(q, K - 1) + 4.0 * K * (K - 1) * s * s * std::pow(q, K - 2);
    case 3:
        return 12.0 * K * (K - 1) * s * std::pow(q, K - 2) - 8.0 * K * (K - 1) * (K - 2) * s * s * s * std::pow(q, K - 3);
    default:
        throw std::invalid_argument("TestFunction: derivatives above third order are not provided");
    }
}

double TestFunction::eval_space(double x, int dx) const
{
    return amplitude * bump((x - x_center) / x_width, dx) / std::pow(x_width, dx);
}

double TestFunction::eval(double t, double x, int dx, int dt) const
{
    return eval_space(x, dx) * bump((t - t_center) / t_width, dt) / std::pow(t_width, dt);
}

std::optional<std::string> TestFunction::support_violation(const Grid1D& g, double t_end) const
{
    if (order < 4) {
        return "order " + std::to_string(order) + " bump has fewer than 3 continuous derivatives";
    }
    const double half = 0.5 * g.length();
    if (!(x_width > 0.0) || x_center - x_width <= -half || x_center + x_width >= half) {
        return "space support [" + format_double(x_center - x_width) + ", " + format_double(x_center + x_width) +
               "] leaves the domain";
    }
    if (t_end > 0.0 && (!(t_width > 0.0) || t_center - t_width <= 0.0 || t_center + t_width >= t_end)) {
        return "time support [" + format_double(t_center - t_width) + ", " + format_double(t_center + t_width) +
               "] leaves (0, " + format_double(t_end) + ")";
    }
    return std::nullopt;
}

std::vector<TestFunction> make_test_functions(std::uint64_t seed, int count, const Grid1D& g, double t_end)
{
    std::mt19937_64 rng(seed);
    const double L = g.length();
    std::uniform_real_distribution<double> xc(-0.2 * L, 0.2 * L);
    std::uniform_real_distribution<double> xw(0.05 * L, 0.1 * L);
    std::uniform_real_distribution<double> tc(0.4, 0.6);
    std::uniform_real_distribution<double> tw(0.2, 0.35);
    std::vector<TestFunction> out;
    for (int i = 0; i < count; ++i) {
        TestFunction f;
        f.x_center = xc(rng);
        f.x_width = xw(rng);
        f.t_center = tc(rng) * t_end;
        f.t_width = tw(rng) * t_end;
        out.push_back(f);
    }
    return out;
}

WeakReport weak_residual(const Trajectory& traj, const std::vector<TestFunction>& tests)
{
    const auto& snaps = traj.snapshots;
    if (snaps.size() < 2) {
        throw std::invalid_argument("weak_residual needs at least two snapshots");
    }
    const Grid1D& g = snaps.front().grid();
    const auto times = traj.times();
    const double t0 = times.front(), t1 = times.back();
    const double h = g.spacing();
    const std::size_t np = static_cast<std::size_t>(g.n_points());

    WeakReport rep;
    rep.per_test.resize(tests.size());
    for (std::size_t k = 0; k < tests.size(); ++k) {
        TestFunction shifted = tests[k];
        shifted.t_center -= t0;
        if (auto v = shifted.support_violation(g, t1 - t0)) {
            rep.per_test[k].rejected = true;
            rep.per_test[k].reason = *v;
            ++rep.rejected;
        }
    }

    for (std::size_t i = 0; i < snaps.size(); ++i) {
        const double w_t = 0.5 * ((i > 0 ? times[i] - times[i - 1] : 0.0) + (i + 1 < snaps.size() ? times[i + 1] - times[i] : 0.0));
        const Derived d = derive(snaps[i]);
        for (std::size_t k = 0; k < tests.size(); ++k) {
            if (rep.per_test[k].rejected) {
                continue;
            }
            const TestFunction& tf = tests[k];
            const double t = times[i];
            if (std::abs(t - tf.t_center) >= tf.t_width) {
                continue;
            }
            double e0 = 0.0, e1 = 0.0, e2 = 0.0;
            for (std::size_t p = 0; p < np; ++p) {
                const double x = g.x(static_cast<int>(p));
                if (std::abs(x - tf.x_center) >= tf.x_width) {
                    continue;
                }
                const double ph = tf.eval(t, x, 0, 0);
                const double ph_x = tf.eval(t, x, 1, 0);
                const double ph_xx = tf.eval(t, x, 2, 0);
                const double ph_t = tf.eval(t, x, 0, 1);
                const double ph_txx = tf.eval(t, x, 2, 1);
                const double r = d.rho[p], u = d.u[p], v = d.v[p], ux = d.ux[p], vx = d.vx[p];
                const double uxx = d.uxx[p], vxx = d.vxx[p];
                e0 += r * ph_t + r * u * v * ph_x;
                e1 += u * (ph_t - ph_txx) - (4.0 * u * v * ux + r * r * u - u * ux * vxx) * ph +
                      2.0 * u * ux * vx * ph_x + u * v * ux * ph_xx;
                e2 += v * (ph_t - ph_txx) - (4.0 * u * v * vx - r * r * v - uxx * v * vx) * ph +
                      2.0 * ux * v * vx * ph_x + u * v * vx * ph_xx;
            }
            auto& out = rep.per_test[k].value;
            out[0] += w_t * h * e0;
            out[1] += w_t * h * e1;
            out[2] += w_t * h * e2;
        }
    }
    for (const auto& r : rep.per_test) {
        if (!r.rejected) {
            for (int e = 0; e < 3; ++e) {
                rep.max_abs[static_cast<std::size_t>(e)] =
                    std::max(rep.max_abs[static_cast<std::size_t>(e)], std::abs(r.value[static_cast<std::size_t>(e)]));
            }
        }
    }
    return rep;
}

TravelingResidual traveling_weak_residual(const PrimitiveState& z, double c, const std::vector<TestFunction>& tests)
{
    const Derived d = derive(z);
    const Grid1D& g = z.grid();
    const double h = g.spacing();
    TravelingResidual out;
    double sq = 0.0;
    for (const auto& tf : tests) {
        if (auto v = tf.support_violation(g, 0.0)) {
            throw std::invalid_argument("traveling_weak_residual: " + *v);
        }
        std::array<double, 3> e{};
        for (int p = 0; p < g.n_points(); ++p) {
            const double x = g.x(p);
            if (std::abs(x - tf.x_center) >= tf.x_width) {
                continue;
            }
            const auto q = static_cast<std::size_t>(p);
            const double ph = tf.eval_space(x, 0), ph_x = tf.eval_space(x, 1);
            const double ph_xx = tf.eval_space(x, 2), ph_xxx = tf.eval_space(x, 3);
            const double P = d.rho[q], U = d.u[q], V = d.v[q], Ux = d.ux[q], Vx = d.vx[q];
            const double Uxx = d.uxx[q], Vxx = d.vxx[q];
            e[0] += -c * P * ph_x + P * U * V * ph_x;
            e[1] += -c * U * (ph_x - ph_xxx) - (4.0 * U * V * Ux + P * P * U - U * Ux * Vxx) * ph +
                    2.0 * Ux * Vx * U * ph_x + U * V * Ux * ph_xx;
            e[2] += -c * V * (ph_x - ph_xxx) - (4.0 * U * V * Vx - P * P * V - Uxx * V * Vx) * ph +
                    2.0 * Ux * Vx * V * ph_x + U * V * Vx * ph_xx;
        }
        for (double& x : e) {
            x *= h;
            sq += x * x;
        }
        out.per_test.push_back(e);
    }
    out.norm = std::sqrt(sq);
    return out;
}

SpeedFit best_traveling_speed(const PrimitiveState& z, const std::vector<TestFunction>& tests)
{
    const auto r0 = traveling_weak_residual(z, 0.0, tests);
    const auto r1 = traveling_weak_residual(z, 1.0, tests);
    double ab = 0.0, bb = 0.0;
    for (std::size_t k = 0; k < tests.size(); ++k) {
        for (std::size_t e = 0; e < 3; ++e) {
            const double a = r0.per_test[k][e];
            const double b = r1.per_test[k][e] - a;
            ab += a * b;
            bb += b * b;
        }
    }
    SpeedFit fit;
    fit.c = bb > 0.0 ? -ab / bb : 0.0;
    fit.norm = traveling_weak_residual(z, fit.c, tests).norm;
    return fit;
}

SpectralField reflect_about(const SpectralField& f, double b)
{
    const Grid1D& g = f.grid();
    const auto c = f.coefficients();
    const double shift = 2.0 * (b + 0.5 * g.length());
    std::vector<Complex> out(c.size());
    for (int k = 0; k <= g.nyquist(); ++k) {
        out[static_cast<std::size_t>(k)] = std::conj(c[static_cast<std::size_t>(k)]) * std::polar(1.0, -g.wavenumber(k) * shift);
        if (k == g.nyquist()) {
            out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k)].real();
        }
    }
    return SpectralField::from_coefficients(g, std::move(out));
}

SymmetryReport symmetry_defect(const PrimitiveState& s, double b)
{
    s.validate();
    SymmetryReport r;
    r.best_axis = b;
    r.defect = state_defect(s, b);
    return r;
}

SymmetryReport symmetry_defect_optimized(const PrimitiveState& s)
{
    s.validate();
    const Grid1D& g = s.grid();
    const double q = 0.25 * g.length();
    const double step = 0.5 * g.spacing();
    double best_b = 0.0, best = std::numeric_limits<double>::infinity();
    for (double b = -q + step; b <= q + 1e-12; b += step) {
        const double d = state_defect(s, b);
        if (d < best) {
            best = d;
            best_b = b;
        }
    }
    // golden-section refinement inside the bracketing scan cell
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = best_b - step, c = best_b + step;
    double x1 = c - phi * (c - a), x2 = a + phi * (c - a);
    double f1 = state_defect(s, x1), f2 = state_defect(s, x2);
    for (int it = 0; it < 80 && c - a > 1e-13 * std::max(1.0, std::abs(best_b)); ++it) {
        if (f1 < f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - phi * (c - a);
            f1 = state_defect(s, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (c - a);
            f2 = state_defect(s, x2);
        }
    }
    const double refined = f1 < f2 ? x1 : x2;
    const double fr = std::min(f1, f2);
    SymmetryReport r;
    r.best_axis = canonical_axis(fr < best ? refined : best_b, g.length());
    r.defect = std::min(fr, best);
    return r;
}

void attach_symmetrized_residual(SymmetryReport& r, const PrimitiveState& s, const std::vector<TestFunction>& tests)
{
    PrimitiveState sym = s;
    sym.rho = 0.5 * (s.rho + reflect_about(s.rho, r.best_axis));
    sym.u = 0.5 * (s.u + reflect_about(s.u, r.best_axis));
    sym.v = 0.5 * (s.v + reflect_about(s.v, r.best_axis));
    r.symmetrized_residual = best_traveling_speed(sym, tests).norm;
}

AsymmetryReport asymmetry_probe(const AsymmetryFamily& fam)
{
    if (fam.epsilons.empty()) {
        throw std::invalid_argument("asymmetry_probe needs at least one epsilon");
    }
    const Grid1D& g = fam.grid;
    ProfileSpec peak{ProfileFamily::peakon, fam.peak_amplitude, 0.0};
    peak.mollifier = fam.mollifier;
    const SpectralField U = sample_profile(g, peak);
    const SpectralField G = sample_profile(g, {ProfileFamily::gaussian, 1.0, 0.0, fam.rho_width});

    // spatial tests concentrated where the profile lives
    std::mt19937_64 rng(fam.seed);
    std::uniform_real_distribution<double> xc(-4.0, 4.0);
    std::uniform_real_distribution<double> xw(1.0, 3.0);
    std::vector<TestFunction> tests;
    for (int i = 0; i < fam.test_count; ++i) {
        TestFunction tf;
        tf.x_center = xc(rng);
        tf.x_width = xw(rng);
        tests.push_back(tf);
    }

    AsymmetryReport rep;
    const double h = g.spacing();
    for (double eps : fam.epsilons) {
        PrimitiveState z{eps * G, U, U, 0.0, ReductionTag::full_3ns};
        const auto fit = best_traveling_speed(z, tests);
        AsymmetryRow row;
        row.epsilon = eps;
        row.best_c = fit.c;
        row.residual = fit.norm;
        double sq = 0.0;
        for (const auto& tf : tests) {
            double acc = 0.0;
            for (int p = 0; p < g.n_points(); ++p) {
                const double r = z.rho.value(p);
                acc += r * r * U.value(p) * tf.eval_space(g.x(p), 0);
            }
            sq += (acc * h) * (acc * h);
        }
        row.obstruction = std::sqrt(sq);
        rep.rows.push_back(row);
    }

    rep.strictly_increasing = true;
    rep.floor_at_zero = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        rep.strictly_increasing = rep.strictly_increasing && rep.rows[i].residual > rep.rows[i - 1].residual;
    }
    for (const auto& r : rep.rows) {
        if (r.epsilon != 0.0 && r.residual <= rep.rows.front().residual) {
            rep.floor_at_zero = false;
        }
    }
    if (rep.rows.front().epsilon != 0.0) {
        rep.floor_at_zero = false;
    }

    std::vector<double> lx, ly;
    for (const auto& r : rep.rows) {
        if (r.epsilon > 0.0 && r.obstruction > 0.0) {
            lx.push_back(std::log(r.epsilon));
            ly.push_back(std::log(r.obstruction));
        }
    }
    if (lx.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= static_cast<double>(lx.size());
        my /= static_cast<double>(lx.size());
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxx += (lx[i] - mx) * (lx[i] - mx);
            sxy += (lx[i] - mx) * (ly[i] - my);
        }
        rep.obstruction_exponent = sxy / sxx;
    }
    return rep;
}

} // namespace novikov
