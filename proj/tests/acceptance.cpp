// Acceptance sweep: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--expect-fail N[,N...]] [--only N[,N...]]
// Exits 0 when every failing criterion is listed in --expect-fail.

#include "novikov/besov.hpp"
#include "novikov/decay.hpp"
#include "novikov/friedrichs.hpp"
#include "novikov/runner.hpp"
#include "novikov/verification.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <unistd.h>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace novikov;
using novikov::testing::max_diff;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double state_diff(const PrimitiveState& a, const PrimitiveState& b)
{
    return std::max({max_diff(a.rho, b.rho), max_diff(a.u, b.u), max_diff(a.v, b.v)});
}

PrimitiveState smooth_state(const Grid1D& g)
{
    return {sample_profile(g, {ProfileFamily::gaussian, 0.6, -1.0, 2.0}),
            sample_profile(g, {ProfileFamily::gaussian, 0.9, 0.5, 2.5}),
            sample_profile(g, {ProfileFamily::gaussian, 0.8, 1.0, 2.2}), 0.0};
}

std::set<int> parse_list(const char* s)
{
    std::set<int> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        out.insert(std::stoi(item));
    }
    return out;
}

Outcome c1_cross_formulation()
{
    Grid1D g(512, 40.0 * M_PI);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        PrimitiveState s = novikov::testing::random_state(g, seed);
        PrimitiveTendency a = to_primitive_tendency(rhs_momentum(to_momentum(s)));
        PrimitiveTendency b = rhs_convolution(s);
        for (auto [x, y] : {std::pair{&a.rho_t, &b.rho_t}, std::pair{&a.u_t, &b.u_t}, std::pair{&a.v_t, &b.v_t}}) {
            worst = std::max(worst, max_diff(*x, *y) / std::max(y->max_abs(), 1e-300));
        }
    }
    return {worst < 1e-8, fmt("max relative error %.3e over 20 states (< 1e-8)", worst)};
}

Outcome c2_conservation()
{
    Grid1D g(512, 40.0 * M_PI);
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 1000;
    Trajectory tr = evolve(smooth_state(g), cfg);
    if (!tr.ok()) {
        return {false, "run aborted: " + tr.reason};
    }
    double m0 = mass_integral(tr.snapshots.front().rho);
    double drift = 0.0;
    for (const auto& d : tr.diagnostics) {
        drift = std::max(drift, std::abs(d.mass - m0) / std::abs(m0));
    }
    return {drift < 1e-8, fmt("max |dM|/|M0| = %.3e over T = 1 (< 1e-8)", drift)};
}

Outcome c3_integrator_order()
{
    Grid1D g(256, 40.0 * M_PI);
    StepperConfig cfg;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 1000000;
    std::vector<PrimitiveState> finals;
    for (double dt : {0.1, 0.05, 0.025}) {
        cfg.dt = dt;
        Trajectory tr = evolve(smooth_state(g), cfg);
        if (!tr.ok()) {
            return {false, "run aborted: " + tr.reason};
        }
        finals.push_back(tr.final_state());
    }
    double e1 = state_diff(finals[0], finals[1]);
    double e2 = state_diff(finals[1], finals[2]);
    double order = std::log2(e1 / e2);
    return {order >= 3.8, fmt("observed order %.4f (>= 3.8)", order)};
}

Outcome c4_friedrichs()
{
    ExperimentConfig c = default_config("well_posedness");
    auto res = friedrichs_iterate(to_momentum(c.initial_state()), c.analysis.iterations, c.stepper, 2, 8);
    const auto& r = res.report;
    if (r.diverged || r.direct_status != RunStatus::completed) {
        return {false, "iteration failed: " + r.reason};
    }
    bool ok = r.ratio <= 0.6 && r.gap_monotone;
    return {ok, fmt("geometric ratio %.4f over iterates 2-8 (<= 0.6); gap to direct solve monotone: %s, final %.3e",
                    r.ratio, r.gap_monotone ? "yes" : "no", r.iterates.back().gap_direct)};
}

Outcome c5_continuous_dependence()
{
    ExperimentConfig c = default_config("continuous_dependence");
    SpectralField d = sample_profile(c.grid(), c.perturbation);
    auto rep = continuous_dependence_probe(to_momentum(c.initial_state()), to_momentum(PrimitiveState{d, d, d, 0.0}),
                                           c.analysis.epsilons, c.stepper, c.analysis.theta);
    if (!rep.reason.empty()) {
        return {false, "run aborted: " + rep.reason};
    }
    std::string diffs;
    for (const auto& r : rep.ladder) {
        diffs += fmt(" %.0e:%.6e", r.epsilon, r.difference);
    }
    bool ok = rep.monotone && rep.spread < 10.0;
    return {ok, fmt("monotone: %s; C spread %.6f (< 10); differences", rep.monotone ? "yes" : "no", rep.spread) +
                    diffs};
}

Outcome c6_littlewood_paley()
{
    Grid1D g(512, 40.0);
    DyadicPartition part(g);
    auto [lo, hi] = part.square_sum_band();
    double recon = 0.0;
    double rmin = 1e300, rmax = 0.0;
    int monotone_fail = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        int modes = 8 + static_cast<int>((seed * 37) % 190);
        SpectralField f = novikov::testing::random_trig(40.0, modes, seed).on(g);
        SpectralField sum = SpectralField::zeros(g);
        for (int j = part.j_min(); j <= part.j_max(); ++j) {
            sum = sum + dyadic_block(f, j, part);
        }
        recon = std::max(recon, max_diff(sum, f));
        double r = besov_norm(f, {0.0, 2.0, 2.0}, part) / l2_norm(f);
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        for (double s : {-0.5, 0.0, 0.5, 1.0}) {
            double n1 = besov_norm(f, {s, 2.0, 1.0}, part);
            double n2 = besov_norm(f, {s, 2.0, 2.0}, part);
            double ni = besov_norm(f, {s, 2.0, BesovParams::inf}, part);
            if (!(ni <= n2 && n2 <= n1)) {
                ++monotone_fail;
            }
        }
    }
    bool ok = recon < 1e-12 && rmin >= lo && rmax <= hi && monotone_fail == 0;
    return {ok, fmt("reconstruction %.2e (< 1e-12); B0_22/L2 in [%.6f, %.6f] vs band [%.6f, %.6f]; "
                    "r-monotonicity violations %d",
                    recon, rmin, rmax, lo, hi, monotone_fail)};
}

Outcome c7_interpolation()
{
    double worst[2] = {0.0, 0.0};
    for (int level = 0; level < 2; ++level) {
        Grid1D g(512 << level, 40.0);
        DyadicPartition part(g);
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            int modes = 8 + static_cast<int>((seed * 37) % 190);
            SpectralField f = novikov::testing::random_trig(40.0, modes, 1000 + seed).on(g);
            worst[level] = std::max(worst[level], interpolation_probe(f, 0.5, part).ratio);
        }
    }
    double change = std::abs(worst[1] / worst[0] - 1.0);
    bool ok = std::isfinite(worst[0]) && std::isfinite(worst[1]) && change <= 0.2;
    return {ok, fmt("max ratio %.6f at N = 512, %.6f at N = 1024; change %.2f%% (<= 20%%)", worst[0], worst[1],
                    100.0 * change)};
}

Outcome decay_criterion(const std::string& scenario)
{
    ExperimentConfig c = default_config(scenario);
    DecayScenario sc{c.initial_state(), c.stepper, c.form, c.analysis.sample_times, c.analysis.expectations};
    sc.tail.side = tail_side_from_string(c.analysis.tail_side);
    sc.tail.floor_relative = c.analysis.tail_floor;
    DecayReport rep = decay_persistence_experiment(sc);
    if (rep.run_status != RunStatus::completed) {
        return {false, "run aborted: " + rep.reason};
    }
    std::string detail;
    for (const auto& v : rep.verdicts) {
        detail += fmt("%s%s %.4f", detail.empty() ? "" : ", ", v.component.c_str(), v.rate);
        detail += std::isfinite(v.max_rate) ? fmt(" in [%.3f, %.3f]", v.min_rate, v.max_rate)
                                            : fmt(" >= %.3f", v.min_rate);
    }
    return {rep.pass && !rep.verdicts.empty(), "t = 0.5: " + detail};
}

Outcome c11_zero_curvature()
{
    ExperimentConfig c = default_config("zero_curvature");
    Grid1D g0 = c.grid();
    StepperConfig zc = c.stepper;
    zc.t_end = 10 * zc.dt;
    Trajectory zero = evolve(PrimitiveState::zeros(g0), zc);
    double zero_res = 0.0;
    for (double lam : c.analysis.lambdas) {
        zero_res = std::max(zero_res, zero_curvature_residual(zero, {lam}).max_norm);
    }
    std::vector<Trajectory> runs;
    for (int level = 0; level < 2; ++level) {
        Grid1D g(c.n_points << level, c.length);
        StepperConfig s = c.stepper;
        s.dt = c.stepper.dt / (1 << level);
        runs.push_back(evolve(smooth_state(g), s));
        if (!runs.back().ok()) {
            return {false, "run aborted: " + runs.back().reason};
        }
    }
    bool ok = zero_res <= 1e-14;
    std::string detail = fmt("zero solution %.1e", zero_res);
    for (double lam : c.analysis.lambdas) {
        auto a = zero_curvature_residual(runs[0], {lam}, c.analysis.curvature_order);
        auto b = zero_curvature_residual(runs[1], {lam}, c.analysis.curvature_order);
        double ratio = a.l2_norm / b.l2_norm;
        double ratio_max = a.max_norm / b.max_norm;
        ok = ok && ratio >= 4.0 && ratio_max >= 4.0;
        detail += fmt("; lambda %.1f: L2 %.2e -> %.2e (x%.1f), sup x%.1f", lam, a.l2_norm, b.l2_norm, ratio,
                      ratio_max);
    }
    return {ok, detail};
}

Outcome c12_weak_form()
{
    ExperimentConfig c = default_config("weak_form");
    std::vector<double> levels;
    double clean_u = 0.0, bad_u = 0.0;
    std::string detail;
    for (int level = 0; level < 3; ++level) {
        Grid1D g((c.n_points / 2) << level, c.length);
        StepperConfig s = c.stepper;
        s.dt = 2.0 * c.stepper.dt / (1 << level);
        Trajectory tr = evolve(smooth_state(g), s);
        if (!tr.ok()) {
            return {false, "run aborted: " + tr.reason};
        }
        auto tests = make_test_functions(c.analysis.test_seed, c.analysis.test_count, g, s.t_end);
        WeakReport w = weak_residual(tr, tests);
        if (w.rejected > 0) {
            return {false, "test functions rejected"};
        }
        levels.push_back(std::max({w.max_abs[0], w.max_abs[1], w.max_abs[2]}));
        detail += fmt("%sN=%d %.3e", detail.empty() ? "" : ", ", g.n_points(), levels.back());
        if (level == 2) {
            clean_u = w.max_abs[1];
            Trajectory bad = tr;
            SpectralField wiggle = SpectralField::sample(g, [](double x) { return 1e-3 * std::sin(x); });
            for (auto& snap : bad.snapshots) {
                snap.u = snap.u + wiggle;
            }
            bad_u = weak_residual(bad, tests).max_abs[1];
        }
    }
    bool decreasing = levels[1] < levels[0] && levels[2] < levels[1];
    double amp = bad_u / clean_u;
    return {decreasing && amp >= 100.0,
            "max residual " + detail + fmt("; corruption raises u residual %.3e -> %.3e (x%.0f, >= 100)", clean_u,
                                           bad_u, amp)};
}

Outcome c13_asymmetry()
{
    ExperimentConfig c = default_config("asymmetry_probe");
    AsymmetryFamily fam;
    fam.grid = c.grid();
    fam.peak_amplitude = c.u.amplitude;
    fam.mollifier = c.u.mollifier;
    fam.rho_width = c.rho.width;
    fam.epsilons = c.analysis.epsilons;
    fam.test_count = c.analysis.test_count;
    fam.seed = c.analysis.test_seed;
    AsymmetryReport rep = asymmetry_probe(fam);
    std::string rows;
    for (const auto& r : rep.rows) {
        rows += fmt("%s%.1f:%.3e", rows.empty() ? "" : ", ", r.epsilon, r.residual);
    }
    bool ok = rep.strictly_increasing && std::abs(rep.obstruction_exponent - 2.0) <= 0.15 * 2.0;
    return {ok, "residuals " + rows + fmt("; obstruction exponent %.4f (2 within 15%%)", rep.obstruction_exponent)};
}

Outcome c14_determinism()
{
    fs::path root = fs::temp_directory_path() / ("novikov_acceptance_" + std::to_string(::getpid()));
    int identical = 0, total = 0;
    std::string bad;
    for (const auto& s : list_scenarios()) {
        ++total;
        std::map<std::string, std::string> sums[2];
        bool ok = true;
        for (int rep = 0; rep < 2; ++rep) {
            fs::path out = root / (s.name + "_" + std::to_string(rep));
            fs::remove_all(out);
            RunManifest m = run_experiment(default_config(s.name), out);
            ok = ok && m.exit_code == 0;
            for (const auto& f : m.files) {
                sums[rep][f.path] = f.sha256;
            }
        }
        if (ok && !sums[0].empty() && sums[0] == sums[1]) {
            ++identical;
        } else {
            bad += " " + s.name;
        }
    }
    fs::remove_all(root);
    return {identical == total, fmt("%d of %d scenarios byte-identical on re-run", identical, total) +
                                    (bad.empty() ? "" : "; differing:" + bad)};
}

} // namespace

int main(int argc, char** argv)
{
    std::set<int> expect_fail, only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--expect-fail") == 0 && i + 1 < argc) {
            expect_fail = parse_list(argv[++i]);
        } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = parse_list(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--expect-fail N,...] [--only N,...]\n");
            return 2;
        }
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"cross-formulation equivalence", c1_cross_formulation},
        {"mass conservation", c2_conservation},
        {"RK4 self-convergence order", c3_integrator_order},
        {"Friedrichs iteration Cauchy rate", c4_friedrichs},
        {"continuous dependence", c5_continuous_dependence},
        {"Littlewood-Paley exactness", c6_littlewood_paley},
        {"interpolation ratio stability", c7_interpolation},
        {"decay persistence", [] { return decay_criterion("decay_persistence"); }},
        {"saturation", [] { return decay_criterion("saturation"); }},
        {"rho rate improvement", [] { return decay_criterion("rho_improvement"); }},
        {"zero-curvature residual", c11_zero_curvature},
        {"weak-form consistency", c12_weak_form},
        {"asymmetry obstruction", c13_asymmetry},
        {"determinism", c14_determinism},
    };

    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        int id = static_cast<int>(i + 1);
        if (!only.empty() && !only.count(id)) {
            continue;
        }
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool known = expect_fail.count(id) > 0;
        if (!o.pass && !known) {
            ++unexpected;
        }
        std::printf("criterion %2d: %s  %s (%.1fs) | %s%s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    secs, o.detail.c_str(), !o.pass && known ? " [known failure]" : "");
        std::fflush(stdout);
    }
    return unexpected == 0 ? 0 : 1;
}
