#include "novikov/runner.hpp"

#include "novikov/besov.hpp"
#include "novikov/field_io.hpp"
#include "novikov/friedrichs.hpp"
#include "novikov/verification.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#ifndef NOVIKOV_VERSION
#define NOVIKOV_VERSION "unknown"
#endif

namespace novikov {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr double kSeamTolerance = 1e-12;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::vector<std::string> kDecayScenarios{"decay_persistence", "saturation", "rho_improvement"};

bool is_decay(const std::string& s)
{
    return std::find(kDecayScenarios.begin(), kDecayScenarios.end(), s) != kDecayScenarios.end();
}

bool evolves(const std::string& s)
{
    return s != "asymmetry_probe";
}

json num(double x)
{
    if (std::isfinite(x)) {
        return x;
    }
    return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

ProfileSpec gaussian(double amplitude, double center, double width)
{
    ProfileSpec p;
    p.family = ProfileFamily::gaussian;
    p.amplitude = amplitude;
    p.center = center;
    p.width = width;
    return p;
}

ProfileSpec sech(double amplitude, double rate)
{
    ProfileSpec p;
    p.family = ProfileFamily::sech;
    p.amplitude = amplitude;
    p.rate = rate;
    return p;
}

ProfileSpec peakon(double amplitude, double mollifier)
{
    ProfileSpec p;
    p.family = ProfileFamily::peakon;
    p.amplitude = amplitude;
    p.mollifier = mollifier;
    return p;
}

void smooth_data(ExperimentConfig& c, double a_rho, double a_u, double a_v)
{
    c.rho = gaussian(a_rho, -1.0, 2.0);
    c.u = gaussian(a_u, 0.5, 2.5);
    c.v = gaussian(a_v, 1.0, 2.2);
}

// ---- flat key table ----

struct Key {
    std::string name;
    std::function<json(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const json&)> set;
};

[[noreturn]] void type_error(const std::string& key, const char* want)
{
    throw ConfigError("config key '" + key + "' must be " + want);
}

double as_double(const std::string& key, const json& v)
{
    if (!v.is_number()) {
        type_error(key, "a number");
    }
    return v.get<double>();
}

long long as_int(const std::string& key, const json& v)
{
    if (!v.is_number_integer()) {
        type_error(key, "an integer");
    }
    return v.get<long long>();
}

std::string as_string(const std::string& key, const json& v)
{
    if (!v.is_string()) {
        type_error(key, "a string");
    }
    return v.get<std::string>();
}

std::vector<double> as_doubles(const std::string& key, const json& v)
{
    if (!v.is_array()) {
        type_error(key, "an array of numbers");
    }
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) {
            type_error(key, "an array of numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<std::string> as_strings(const std::string& key, const json& v)
{
    if (!v.is_array()) {
        type_error(key, "an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) {
            type_error(key, "an array of strings");
        }
        out.push_back(e.get<std::string>());
    }
    return out;
}

template <class T>
T translate(const std::string& key, std::function<T()> fn)
{
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

void add_profile_keys(std::vector<Key>& keys, const std::string& prefix, ProfileSpec ExperimentConfig::*member)
{
    keys.push_back({prefix + ".family", [=](const ExperimentConfig& c) { return json(to_string((c.*member).family)); },
                    [=](ExperimentConfig& c, const json& v) {
                        auto name = as_string(prefix + ".family", v);
                        (c.*member).family = translate<ProfileFamily>(prefix + ".family",
                                                                      [&] { return profile_from_string(name); });
                    }});
    auto scalar = [&](const std::string& field, double ProfileSpec::*f) {
        std::string key = prefix + "." + field;
        keys.push_back({key, [=](const ExperimentConfig& c) { return json((c.*member).*f); },
                        [=](ExperimentConfig& c, const json& v) { (c.*member).*f = as_double(key, v); }});
    };
    scalar("amplitude", &ProfileSpec::amplitude);
    scalar("center", &ProfileSpec::center);
    scalar("width", &ProfileSpec::width);
    scalar("rate", &ProfileSpec::rate);
    scalar("mollifier", &ProfileSpec::mollifier);
}

const std::vector<Key>& key_table()
{
    static const std::vector<Key> keys = [] {
        std::vector<Key> k;
        k.push_back({"scenario", [](const ExperimentConfig& c) { return json(c.scenario); },
                     [](ExperimentConfig& c, const json& v) { c.scenario = as_string("scenario", v); }});
        k.push_back({"grid.n_points", [](const ExperimentConfig& c) { return json(c.n_points); },
                     [](ExperimentConfig& c, const json& v) {
                         c.n_points = static_cast<int>(as_int("grid.n_points", v));
                     }});
        k.push_back({"grid.length", [](const ExperimentConfig& c) { return json(c.length); },
                     [](ExperimentConfig& c, const json& v) { c.length = as_double("grid.length", v); }});
        add_profile_keys(k, "rho", &ExperimentConfig::rho);
        add_profile_keys(k, "u", &ExperimentConfig::u);
        add_profile_keys(k, "v", &ExperimentConfig::v);
        add_profile_keys(k, "perturbation", &ExperimentConfig::perturbation);
        k.push_back({"stepper.dt", [](const ExperimentConfig& c) { return json(c.stepper.dt); },
                     [](ExperimentConfig& c, const json& v) { c.stepper.dt = as_double("stepper.dt", v); }});
        k.push_back({"stepper.t_end", [](const ExperimentConfig& c) { return json(c.stepper.t_end); },
                     [](ExperimentConfig& c, const json& v) { c.stepper.t_end = as_double("stepper.t_end", v); }});
        k.push_back({"stepper.cfl_guard", [](const ExperimentConfig& c) { return json(c.stepper.cfl_guard); },
                     [](ExperimentConfig& c, const json& v) {
                         c.stepper.cfl_guard = as_double("stepper.cfl_guard", v);
                     }});
        k.push_back({"stepper.snapshot_stride",
                     [](const ExperimentConfig& c) { return json(c.stepper.snapshot_stride); },
                     [](ExperimentConfig& c, const json& v) {
                         c.stepper.snapshot_stride = static_cast<int>(as_int("stepper.snapshot_stride", v));
                     }});
        k.push_back({"stepper.dealias_fraction",
                     [](const ExperimentConfig& c) { return json(c.stepper.rhs.dealias_fraction); },
                     [](ExperimentConfig& c, const json& v) {
                         c.stepper.rhs.dealias_fraction = as_double("stepper.dealias_fraction", v);
                     }});
        k.push_back({"stepper.formulation", [](const ExperimentConfig& c) { return json(to_string(c.form)); },
                     [](ExperimentConfig& c, const json& v) {
                         auto name = as_string("stepper.formulation", v);
                         c.form = translate<Formulation>("stepper.formulation",
                                                         [&] { return formulation_from_string(name); });
                     }});
        auto doubles = [&](const std::string& key, std::vector<double> AnalysisConfig::*f) {
            k.push_back({key, [=](const ExperimentConfig& c) { return json(c.analysis.*f); },
                         [=](ExperimentConfig& c, const json& v) { c.analysis.*f = as_doubles(key, v); }});
        };
        auto strings = [&](const std::string& key, std::vector<std::string> AnalysisConfig::*f) {
            k.push_back({key, [=](const ExperimentConfig& c) { return json(c.analysis.*f); },
                         [=](ExperimentConfig& c, const json& v) { c.analysis.*f = as_strings(key, v); }});
        };
        auto integer = [&](const std::string& key, int AnalysisConfig::*f) {
            k.push_back({key, [=](const ExperimentConfig& c) { return json(c.analysis.*f); },
                         [=](ExperimentConfig& c, const json& v) {
                             c.analysis.*f = static_cast<int>(as_int(key, v));
                         }});
        };
        auto real = [&](const std::string& key, double AnalysisConfig::*f) {
            k.push_back({key, [=](const ExperimentConfig& c) { return json(c.analysis.*f); },
                         [=](ExperimentConfig& c, const json& v) { c.analysis.*f = as_double(key, v); }});
        };
        doubles("analysis.besov_s", &AnalysisConfig::besov_s);
        strings("analysis.weights", &AnalysisConfig::weights);
        doubles("analysis.lambdas", &AnalysisConfig::lambdas);
        k.push_back({"analysis.test_seed", [](const ExperimentConfig& c) { return json(c.analysis.test_seed); },
                     [](ExperimentConfig& c, const json& v) {
                         auto s = as_int("analysis.test_seed", v);
                         if (s < 0) {
                             throw ConfigError("config key 'analysis.test_seed' must be non-negative");
                         }
                         c.analysis.test_seed = static_cast<std::uint64_t>(s);
                     }});
        integer("analysis.test_count", &AnalysisConfig::test_count);
        integer("analysis.curvature_order", &AnalysisConfig::curvature_order);
        doubles("analysis.sample_times", &AnalysisConfig::sample_times);
        k.push_back({"analysis.tail_side", [](const ExperimentConfig& c) { return json(c.analysis.tail_side); },
                     [](ExperimentConfig& c, const json& v) {
                         c.analysis.tail_side = as_string("analysis.tail_side", v);
                     }});
        real("analysis.tail_floor", &AnalysisConfig::tail_floor);
        integer("analysis.iterations", &AnalysisConfig::iterations);
        integer("analysis.fit_lo", &AnalysisConfig::fit_lo);
        integer("analysis.fit_hi", &AnalysisConfig::fit_hi);
        doubles("analysis.epsilons", &AnalysisConfig::epsilons);
        real("analysis.theta", &AnalysisConfig::theta);
        strings("analysis.reductions", &AnalysisConfig::reductions);
        k.push_back({"output.snapshots", [](const ExperimentConfig& c) { return json(c.snapshots); },
                     [](ExperimentConfig& c, const json& v) {
                         if (!v.is_boolean()) {
                             type_error("output.snapshots", "a boolean");
                         }
                         c.snapshots = v.get<bool>();
                     }});
        return k;
    }();
    return keys;
}

void set_expectation(ExperimentConfig& c, const std::string& key, const json& v)
{
    std::string comp = key.substr(std::string("expect.").size());
    const auto& comps = decay_components();
    if (std::find(comps.begin(), comps.end(), comp) == comps.end()) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    if (!v.is_array() || v.empty() || v.size() > 2 || !v[0].is_number()) {
        type_error(key, "[min] or [min, max]");
    }
    DecayExpectation e{comp, v[0].get<double>()};
    if (v.size() == 2) {
        if (v[1].is_number()) {
            e.max_rate = v[1].get<double>();
        } else if (!(v[1].is_string() && v[1].get<std::string>() == "inf")) {
            type_error(key, "[min] or [min, max] with max a number or \"inf\"");
        }
    }
    auto& list = c.analysis.expectations;
    list.erase(std::remove_if(list.begin(), list.end(), [&](const auto& x) { return x.component == comp; }),
               list.end());
    list.push_back(e);
}

// ---- output helpers ----

class Artifacts {
public:
    explicit Artifacts(fs::path root) : root_(std::move(root)) {}

    std::ofstream open(const std::string& rel)
    {
        fs::path p = root_ / rel;
        fs::create_directories(p.parent_path());
        std::ofstream os(p, std::ios::binary);
        if (!os) {
            throw std::runtime_error("cannot write " + p.string());
        }
        if (std::find(files_.begin(), files_.end(), rel) == files_.end()) {
            files_.push_back(rel);
        }
        return os;
    }

    void csv(const std::string& rel, const std::vector<std::string>& columns,
             const std::vector<std::vector<std::string>>& rows)
    {
        auto os = open(rel);
        std::string head;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            head += (i ? "," : "") + columns[i];
        }
        os << "# schema: " << head << '\n' << head << '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                os << (i ? "," : "") << r[i];
            }
            os << '\n';
        }
    }

    void write_json(const std::string& rel, const json& j)
    {
        auto os = open(rel);
        os << j.dump(2) << '\n';
    }

    void snapshot(const std::string& dir, const PrimitiveState& s)
    {
        for (auto [name, f] : {std::pair{"rho", &s.rho}, std::pair{"u", &s.u}, std::pair{"v", &s.v}}) {
            auto os = open(dir + "/" + name + ".txt");
            write_field(os, *f);
        }
        auto os = open(dir + "/time.txt");
        os << format_double(s.time) << '\n';
    }

    const std::vector<std::string>& files() const { return files_; }
    const fs::path& root() const { return root_; }

private:
    fs::path root_;
    std::vector<std::string> files_;
};

std::string fd(double x)
{
    return format_double(x);
}

struct Abort {
    std::string message;
};

class Stages {
public:
    explicit Stages(RunManifest& m) : m_(m) {}

    template <class F>
    void run(const std::string& name, F&& fn)
    {
        auto t0 = std::chrono::steady_clock::now();
        StageRecord rec{name, "ok", 0.0, ""};
        try {
            rec.detail = fn();
        } catch (const Abort& a) {
            rec.status = "aborted";
            rec.detail = a.message;
            finish(rec, t0);
            throw;
        } catch (const std::exception& e) {
            rec.status = "failed";
            rec.detail = e.what();
            finish(rec, t0);
            throw Abort{name + ": " + e.what()};
        }
        finish(rec, t0);
    }

private:
    void finish(StageRecord& rec, std::chrono::steady_clock::time_point t0)
    {
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        m_.stages.push_back(rec);
    }
    RunManifest& m_;
};

Trajectory evolve_or_abort(const PrimitiveState& s0, const ExperimentConfig& c)
{
    Trajectory tr = evolve(s0, c.stepper, c.form);
    if (!tr.ok()) {
        throw Abort{"evolution aborted: " + tr.reason};
    }
    return tr;
}

std::string steps_detail(const Trajectory& tr)
{
    return std::to_string(tr.diagnostics.size() - 1) + " steps, " + std::to_string(tr.snapshots.size()) +
           " snapshots";
}

void write_diagnostics(Artifacts& out, const Trajectory& tr)
{
    std::vector<std::vector<std::string>> rows;
    for (const auto& d : tr.diagnostics) {
        rows.push_back({fd(d.time), fd(d.max_speed), fd(d.mass), fd(d.max_rho), fd(d.max_u), fd(d.max_v)});
    }
    out.csv("diagnostics.csv", {"t", "max_speed", "mass", "max_rho", "max_u", "max_v"}, rows);
}

void write_norms(Artifacts& out, const Trajectory& tr, const std::vector<double>& s_values)
{
    if (s_values.empty()) {
        return;
    }
    DyadicPartition part(tr.snapshots.front().grid());
    std::vector<std::vector<std::string>> rows;
    for (const auto& snap : tr.snapshots) {
        const MomentumState m = to_momentum(snap);
        for (auto [name, f] : {std::pair{"rho", &snap.rho}, std::pair{"m", &m.m}, std::pair{"n", &m.n}}) {
            for (double s : s_values) {
                rows.push_back({fd(snap.time), name, fd(s), fd(besov_norm(*f, {s, 2.0, 1.0}, part)),
                                fd(besov_norm(*f, {s, 2.0, BesovParams::inf}, part))});
            }
        }
    }
    out.csv("besov_norms.csv", {"t", "component", "s", "b_2_1", "b_2_inf"}, rows);
}

void write_snapshots(Artifacts& out, const ExperimentConfig& c, const Trajectory& tr)
{
    if (!c.snapshots) {
        return;
    }
    out.snapshot("snapshots/initial", tr.snapshots.front());
    out.snapshot("snapshots/final", tr.final_state());
}

// ---- scenario pipelines ----

json run_well_posedness(const ExperimentConfig& c, Artifacts& out, Stages& stages)
{
    FriedrichsResult res{{}, Trajectory{}, {}};
    stages.run("iterate", [&] {
        res = friedrichs_iterate(to_momentum(c.initial_state()), c.analysis.iterations, c.stepper,
                                 c.analysis.fit_lo, c.analysis.fit_hi);
        if (res.report.diverged || res.report.direct_status != RunStatus::completed) {
            throw Abort{res.report.reason};
        }
        return std::to_string(res.report.iterates.size()) + " iterates";
    });
    json summary;
    stages.run("report", [&] {
        std::vector<std::vector<std::string>> rows;
        for (const auto& it : res.report.iterates) {
            rows.push_back({std::to_string(it.index), fd(it.besov_sup), fd(it.diff_weak), fd(it.diff_critical),
                            fd(it.gap_direct), fd(it.linear_residual), it.diverged ? "1" : "0"});
        }
        out.csv("iterates.csv",
                {"k", "besov_sup", "diff_weak", "diff_critical", "gap_direct", "linear_residual", "diverged"}, rows);
        write_norms(out, res.direct, c.analysis.besov_s);
        write_snapshots(out, c, res.direct);
        summary["ratio"] = num(res.report.ratio);
        summary["fit_lo"] = res.report.fit_lo;
        summary["fit_hi"] = res.report.fit_hi;
        summary["gap_monotone"] = res.report.gap_monotone;
        summary["final_gap"] = num(res.report.iterates.back().gap_direct);
        return std::string();
    });
    return summary;
}

json run_continuous_dependence(const ExperimentConfig& c, Artifacts& out, Stages& stages)
{
    DependenceReport rep;
    stages.run("ladder", [&] {
        Grid1D g = c.grid();
        SpectralField d = sample_profile(g, c.perturbation);
        PrimitiveState dir{d, d, d, 0.0};
        rep = continuous_dependence_probe(to_momentum(c.initial_state()), to_momentum(dir), c.analysis.epsilons,
                                          c.stepper, c.analysis.theta);
        if (!rep.reason.empty()) {
            throw Abort{rep.reason};
        }
        return std::to_string(rep.ladder.size()) + " runs";
    });
    json summary;
    stages.run("report", [&] {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : rep.ladder) {
            rows.push_back({fd(r.epsilon), fd(r.difference), fd(r.scaled)});
        }
        out.csv("ladder.csv", {"epsilon", "difference", "scaled"}, rows);
        summary["theta"] = num(rep.theta);
        summary["monotone"] = rep.monotone;
        summary["fitted_c"] = num(rep.fitted_c);
        summary["spread"] = num(rep.spread);
        return std::string();
    });
    return summary;
}

std::size_t nearest_snapshot(const Trajectory& tr, double t)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < tr.snapshots.size(); ++i) {
        if (std::abs(tr.snapshots[i].time - t) < std::abs(tr.snapshots[best].time - t)) {
            best = i;
        }
    }
    return best;
}

json run_decay(const ExperimentConfig& c, Artifacts& out, Stages& stages)
{
    DecayReport rep;
    stages.run("evolve_and_fit", [&] {
        DecayScenario sc{c.initial_state(), c.stepper, c.form, c.analysis.sample_times, c.analysis.expectations};
        sc.tail.side = tail_side_from_string(c.analysis.tail_side);
        sc.tail.floor_relative = c.analysis.tail_floor;
        rep = decay_persistence_experiment(sc);
        if (rep.run_status != RunStatus::completed) {
            throw Abort{rep.reason};
        }
        return steps_detail(rep.trajectory);
    });
    json summary;
    stages.run("report", [&] {
        std::vector<std::vector<std::string>> rates, detail;
        for (const auto& f : rep.fits) {
            rates.push_back({fd(f.time), f.component, fd(f.fit.rate), fd(f.fit.residual), fd(f.fit.window_lo),
                             fd(f.fit.window_hi)});
            detail.push_back({fd(f.time), f.component, f.status, std::to_string(f.fit.points), fd(f.fit.floor),
                              f.fit.super_exponential ? "1" : "0", fd(f.fit.inner_rate), fd(f.fit.outer_rate)});
        }
        out.csv("rates.csv", {"t", "component", "rate", "residual", "window_lo", "window_hi"}, rates);
        out.csv("fits.csv",
                {"t", "component", "status", "points", "floor", "super_exponential", "inner_rate", "outer_rate"},
                detail);

        std::vector<std::vector<std::string>> verdicts;
        for (const auto& v : rep.verdicts) {
            verdicts.push_back({fd(v.time), v.component, fd(v.rate), fd(v.min_rate), fd(v.max_rate), fd(v.margin),
                                v.pass ? "1" : "0"});
        }
        out.csv("verdicts.csv", {"t", "component", "rate", "min_rate", "max_rate", "margin", "pass"}, verdicts);

        if (!c.analysis.weights.empty()) {
            std::vector<std::vector<std::string>> norms, checks;
            for (const auto& text : c.analysis.weights) {
                WeightSpec w = parse_weight(text);
                for (double t : c.analysis.sample_times) {
                    const auto& s = rep.trajectory.snapshots[nearest_snapshot(rep.trajectory, t)];
                    for (auto [name, f] : {std::pair{"rho", &s.rho}, std::pair{"u", &s.u}, std::pair{"v", &s.v}}) {
                        norms.push_back({fd(s.time), text, name, fd(weighted_sup(*f, w)), fd(weighted_lp(*f, w, 2.0))});
                    }
                }
                WeightCheck wc = check_weight(w);
                checks.push_back({text, wc.property_i ? "1" : "0", wc.literal_nonnegative ? "1" : "0",
                                  fd(wc.max_derivative_ratio), fd(wc.c0), wc.c0_finite ? "1" : "0",
                                  fd(wc.c0_growth_rate)});
            }
            out.csv("weighted_norms.csv", {"t", "weight", "component", "sup", "l2"}, norms);
            out.csv("weights.csv",
                    {"weight", "derivative_bound", "nondecreasing", "max_derivative_ratio", "c0", "c0_finite",
                     "c0_growth_rate"},
                    checks);
        }
        write_diagnostics(out, rep.trajectory);
        write_snapshots(out, c, rep.trajectory);
        summary["pass"] = rep.pass;
        summary["warnings"] = rep.warnings;
        return std::string();
    });
    return summary;
}

json run_zero_curvature(const ExperimentConfig& c, Artifacts& out, Stages& stages)
{
    Trajectory tr;
    stages.run("evolve", [&] {
        tr = evolve_or_abort(c.initial_state(), c);
        return steps_detail(tr);
    });
    json summary;
    stages.run("residual", [&] {
        std::vector<std::vector<std::string>> rows, entries;
        json per_lambda = json::array();
        for (double lam : c.analysis.lambdas) {
            auto r = zero_curvature_residual(tr, {lam}, c.analysis.curvature_order);
            for (std::size_t i = 0; i < r.times.size(); ++i) {
                rows.push_back({fd(lam), fd(r.times[i]), fd(r.max_entry[i]), fd(r.l2[i])});
            }
            for (int e = 0; e < 9; ++e) {
                entries.push_back({fd(lam), std::to_string(e / 3), std::to_string(e % 3),
                                   fd(r.entry_max[static_cast<std::size_t>(e)])});
            }
            per_lambda.push_back({{"lambda", lam}, {"max_norm", num(r.max_norm)}, {"l2_norm", num(r.l2_norm)}});
        }
        out.csv("zero_curvature.csv", {"lambda", "t", "max_entry", "l2"}, rows);
        out.csv("zero_curvature_entries.csv", {"lambda", "row", "col", "sup"}, entries);

        StepperConfig zc = c.stepper;
        zc.t_end = std::min(c.stepper.t_end, 8 * c.stepper.effective_dt());
        zc.snapshot_stride = 1;
        Trajectory zero = evolve(PrimitiveState::zeros(c.grid()), zc, c.form);
        double zero_res = 0.0;
        for (double lam : c.analysis.lambdas) {
            zero_res = std::max(zero_res, zero_curvature_residual(zero, {lam}, c.analysis.curvature_order).max_norm);
        }
        summary["order"] = c.analysis.curvature_order;
        summary["lambdas"] = per_lambda;
        summary["zero_state_residual"] = num(zero_res);
        write_diagnostics(out, tr);
        write_snapshots(out, c, tr);
        return std::string();
    });
    return summary;
}

json run_weak_form(const ExperimentConfig& c, Artifacts& out, Stages& stages)
{
    Trajectory tr;
    stages.run("evolve", [&] {
        tr = evolve_or_abort(c.initial_state(), c);
        return steps_detail(tr);
    });
    json summary;
    stages.run("pairings", [&] {
        auto tests = make_test_functions(c.analysis.test_seed, c.analysis.test_count, c.grid(), c.stepper.t_end);
        WeakReport rep = weak_residual(tr, tests);
        std::vector<std::vector<std::string>> rows, tf;
        for (std::size_t i = 0; i < rep.per_test.size(); ++i) {
            const auto& r = rep.per_test[i];
            rows.push_back({std::to_string(i), fd(r.value[0]), fd(r.value[1]), fd(r.value[2]), r.rejected ? "1" : "0"});
            const auto& t = tests[i];
            tf.push_back({std::to_string(i), fd(t.x_center), fd(t.x_width), fd(t.t_center), fd(t.t_width),
                          std::to_string(t.order)});
        }
        out.csv("weak_residual.csv", {"test", "rho", "u", "v", "rejected"}, rows);
        out.csv("test_functions.csv", {"test", "x_center", "x_width", "t_center", "t_width", "order"}, tf);
        double m0 = mass_integral(tr.snapshots.front().rho);
        double m1 = mass_integral(tr.final_state().rho);
        summary["max_abs"] = {num(rep.max_abs[0]), num(rep.max_abs[1]), num(rep.max_abs[2])};
        summary["rejected"] = rep.rejected;
        summary["mass_drift"] = num(m0 != 0.0 ? std::abs(m1 - m0) / std::abs(m0) : std::abs(m1 - m0));
        write_diagnostics(out, tr);
        write_snapshots(out, c, tr);
        return std::string();
    });
    return summary;
}

json run_asymmetry(const ExperimentConfig& c, Artifacts& out, Stages& stages)
{
    AsymmetryFamily fam;
    fam.grid = c.grid();
    fam.peak_amplitude = c.u.amplitude;
    fam.mollifier = c.u.mollifier;
    fam.rho_width = c.rho.width;
    fam.epsilons = c.analysis.epsilons;
    fam.test_count = c.analysis.test_count;
    fam.seed = c.analysis.test_seed;
    AsymmetryReport rep;
    stages.run("probe", [&] {
        rep = asymmetry_probe(fam);
        return std::to_string(rep.rows.size()) + " amplitudes";
    });
    json summary;
    stages.run("report", [&] {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : rep.rows) {
            rows.push_back({fd(r.epsilon), fd(r.best_c), fd(r.residual), fd(r.obstruction)});
        }
        out.csv("asymmetry.csv", {"epsilon", "best_c", "residual", "obstruction"}, rows);
        summary["strictly_increasing"] = rep.strictly_increasing;
        summary["floor_at_zero"] = rep.floor_at_zero;
        summary["obstruction_exponent"] = num(rep.obstruction_exponent);
        return std::string();
    });
    return summary;
}

double max_abs_diff(const SpectralField& a, const SpectralField& b)
{
    double m = 0.0;
    for (int i = 0; i < a.grid().n_points(); ++i) {
        m = std::max(m, std::abs(a.value(i) - b.value(i)));
    }
    return m;
}

double max_abs(const SpectralField& a)
{
    double m = 0.0;
    for (int i = 0; i < a.grid().n_points(); ++i) {
        m = std::max(m, std::abs(a.value(i)));
    }
    return m;
}

double tendency_mismatch(const PrimitiveState& s, const RhsOptions& opt)
{
    PrimitiveTendency a = to_primitive_tendency(rhs_momentum(to_momentum(s), opt));
    PrimitiveTendency b = rhs_convolution(s, opt);
    double err = 0.0, scale = 0.0;
    for (auto [x, y] : {std::pair{&a.rho_t, &b.rho_t}, std::pair{&a.u_t, &b.u_t}, std::pair{&a.v_t, &b.v_t}}) {
        err = std::max(err, max_abs_diff(*x, *y));
        scale = std::max(scale, max_abs(*y));
    }
    return scale > 0.0 ? err / scale : err;
}

json run_reductions(const ExperimentConfig& c, Artifacts& out, Stages& stages)
{
    std::vector<std::vector<std::string>> rows;
    json summary;
    PrimitiveState s0 = c.initial_state();
    stages.run("formulations", [&] {
        double initial = tendency_mismatch(s0, c.stepper.rhs);
        rows.push_back({"full_3ns", "tendency_mismatch_initial", fd(initial)});
        Trajectory a = evolve_or_abort(s0, c);
        ExperimentConfig other = c;
        other.form = c.form == Formulation::momentum ? Formulation::convolution : Formulation::momentum;
        Trajectory b = evolve_or_abort(s0, other);
        double gap = 0.0;
        for (auto [x, y] : {std::pair{&a.final_state().rho, &b.final_state().rho},
                            std::pair{&a.final_state().u, &b.final_state().u},
                            std::pair{&a.final_state().v, &b.final_state().v}}) {
            gap = std::max(gap, max_abs_diff(*x, *y));
        }
        rows.push_back({"full_3ns", "formulation_gap_final", fd(gap)});
        summary["tendency_mismatch"] = num(initial);
        summary["formulation_gap"] = num(gap);
        return steps_detail(a);
    });
    stages.run("reductions", [&] {
        json per = json::object();
        for (const auto& name : c.analysis.reductions) {
            ReductionTag tag = reduction_from_string(name);
            ReductionResult red = apply_reduction(s0, tag);
            Trajectory tr = evolve_or_abort(red.state, c);
            const PrimitiveState& f = tr.final_state();
            double rho_drift = max_abs(f.rho);
            rows.push_back({name, "max_abs_rho", fd(rho_drift)});
            json entry{{"max_abs_rho", num(rho_drift)}};
            if (tag == ReductionTag::novikov) {
                double d = max_abs_diff(f.u, f.v);
                rows.push_back({name, "max_abs_u_minus_v", fd(d)});
                entry["max_abs_u_minus_v"] = num(d);
            }
            if (tag == ReductionTag::degasperis_procesi) {
                double d = max_abs_diff(f.v, SpectralField::sample(f.grid(), [](double) { return 1.0; }));
                rows.push_back({name, "max_abs_v_minus_1", fd(d)});
                entry["max_abs_v_minus_1"] = num(d);
            }
            double mismatch = tendency_mismatch(red.state, c.stepper.rhs);
            rows.push_back({name, "tendency_mismatch_initial", fd(mismatch)});
            entry["tendency_mismatch"] = num(mismatch);
            entry["warnings"] = red.warnings;
            per[name] = entry;
        }
        summary["reductions"] = per;
        out.csv("reductions.csv", {"reduction", "quantity", "value"}, rows);
        return std::to_string(c.analysis.reductions.size()) + " reductions";
    });
    return summary;
}

// ---- validation helpers ----

double seam_ratio(const ProfileSpec& p, double length)
{
    double peak = std::abs(p.amplitude);
    if (peak == 0.0 || p.family == ProfileFamily::zero || p.family == ProfileFamily::constant) {
        return 0.0;
    }
    double half = 0.5 * length;
    return std::max(std::abs(p(-half)), std::abs(p(half))) / peak;
}

std::string describe_tail(const ProfileSpec& p)
{
    switch (p.family) {
    case ProfileFamily::sech:
        return "decay rate " + format_double(p.rate);
    case ProfileFamily::peakon:
        return "decay rate 1";
    case ProfileFamily::gaussian:
        return "Gaussian width " + format_double(p.width);
    case ProfileFamily::bump:
        return "bump radius " + format_double(p.width);
    default:
        return to_string(p.family);
    }
}

std::vector<std::pair<std::string, const ProfileSpec*>> used_profiles(const ExperimentConfig& c)
{
    if (c.scenario == "asymmetry_probe") {
        return {};
    }
    std::vector<std::pair<std::string, const ProfileSpec*>> out{{"rho", &c.rho}, {"u", &c.u}, {"v", &c.v}};
    if (c.scenario == "continuous_dependence") {
        out.emplace_back("perturbation", &c.perturbation);
    }
    return out;
}

} // namespace

// ---- public API ----

PrimitiveState ExperimentConfig::initial_state() const
{
    Grid1D g = grid();
    return {sample_profile(g, rho), sample_profile(g, u), sample_profile(g, v), 0.0};
}

const std::vector<ScenarioInfo>& list_scenarios()
{
    static const std::vector<ScenarioInfo> list{
        {"well_posedness", "Friedrichs transport iteration: Cauchy ratio of iterates and gap to the direct solve"},
        {"continuous_dependence", "perturbation ladder: solution differences against epsilon^theta"},
        {"decay_persistence", "slow exponential tails keep their rate under evolution"},
        {"saturation", "fast initial tails: rho, m, n keep the rate while u, v saturate at 1"},
        {"rho_improvement", "compact rho with slow u, v tails: rho stays localized"},
        {"zero_curvature", "Lax pair compatibility residual along a smooth run"},
        {"weak_form", "space-time test-function pairings and mass conservation along a smooth run"},
        {"asymmetry_probe", "even traveling candidates: residual growth with the rho amplitude"},
        {"reduction_checks", "formulation agreement and preservation of the two-component, Novikov and DP reductions"},
    };
    return list;
}

bool scenario_exists(const std::string& name)
{
    const auto& l = list_scenarios();
    return std::any_of(l.begin(), l.end(), [&](const auto& s) { return s.name == name; });
}

ExperimentConfig default_config(const std::string& scenario)
{
    if (!scenario_exists(scenario)) {
        std::string names;
        for (const auto& s : list_scenarios()) {
            names += (names.empty() ? "" : ", ") + s.name;
        }
        throw ConfigError("unknown scenario '" + scenario + "'; valid scenarios: " + names);
    }
    ExperimentConfig c;
    c.scenario = scenario;
    c.stepper.snapshot_stride = 50;
    c.analysis.besov_s.clear();
    c.analysis.lambdas.clear();
    c.perturbation = ProfileSpec{};

    if (scenario == "well_posedness") {
        c.n_points = 256;
        c.length = 10.0 * kTwoPi;
        smooth_data(c, 1.0, 1.0, 1.0);
        c.stepper.dt = 2e-3;
        c.stepper.t_end = 1.0;
        c.analysis.besov_s = {-0.5, 0.5};
    } else if (scenario == "continuous_dependence") {
        c.n_points = 256;
        c.length = 10.0 * kTwoPi;
        smooth_data(c, 1.0, 1.0, 1.0);
        c.perturbation = gaussian(1.0, 0.0, 1.5);
        c.stepper.dt = 1e-3;
        c.stepper.t_end = 0.25;
        c.analysis.epsilons = {1e-2, 1e-3, 1e-4};
        c.analysis.theta = 0.5;
    } else if (scenario == "decay_persistence") {
        c.n_points = 512;
        c.length = 60.0;
        c.rho = c.u = c.v = sech(1.0, 0.5);
        c.stepper.dt = 2e-3;
        c.stepper.t_end = 0.5;
        c.analysis.sample_times = {0.0, 0.5};
        for (const char* comp : {"rho", "rho_x", "u", "u_x", "v", "v_x"}) {
            c.analysis.expectations.push_back({comp, 0.475});
        }
        c.analysis.weights = {"exp_sym:0.45", "phi_left:0.5:20", "phi_right:0.5:20"};
    } else if (scenario == "saturation") {
        c.n_points = 2048;
        c.length = 40.0;
        c.rho = c.u = c.v = sech(0.5, 2.0);
        c.stepper.dt = 5e-4;
        c.stepper.t_end = 0.5;
        c.stepper.snapshot_stride = 100;
        c.analysis.sample_times = {0.0, 0.5};
        for (const char* comp : {"rho", "m", "n"}) {
            c.analysis.expectations.push_back({comp, 1.8, 2.2});
        }
        for (const char* comp : {"u", "v"}) {
            c.analysis.expectations.push_back({comp, 0.9, 1.1});
        }
        c.analysis.weights = {"phi_min:20"};
    } else if (scenario == "rho_improvement") {
        c.n_points = 1024;
        c.length = 60.0;
        c.rho = gaussian(0.5, 0.0, 0.8);
        c.u = c.v = sech(0.5, 0.4);
        c.stepper.dt = 1e-3;
        c.stepper.t_end = 0.5;
        c.analysis.sample_times = {0.0, 0.5};
        c.analysis.expectations.push_back({"rho", 1.08});
        c.analysis.weights = {"exp_sym:0.4", "exp_sym:1.2"};
    } else if (scenario == "zero_curvature") {
        c.n_points = 512;
        c.length = 10.0 * kTwoPi;
        smooth_data(c, 0.6, 0.9, 0.8);
        c.stepper.dt = 0.025;
        c.stepper.t_end = 1.0;
        c.stepper.snapshot_stride = 1;
        c.analysis.lambdas = {0.5, 1.0, 2.0};
    } else if (scenario == "weak_form") {
        c.n_points = 512;
        c.length = 10.0 * kTwoPi;
        smooth_data(c, 0.6, 0.9, 0.8);
        c.stepper.dt = 0.025;
        c.stepper.t_end = 1.0;
        c.stepper.snapshot_stride = 1;
        c.analysis.test_seed = 11;
        c.analysis.test_count = 16;
    } else if (scenario == "asymmetry_probe") {
        AsymmetryFamily fam;
        c.n_points = fam.grid.n_points();
        c.length = fam.grid.length();
        c.rho = gaussian(1.0, 0.0, fam.rho_width);
        c.u = c.v = peakon(fam.peak_amplitude, fam.mollifier);
        c.analysis.epsilons = fam.epsilons;
        c.analysis.test_count = fam.test_count;
        c.analysis.test_seed = fam.seed;
        c.stepper.t_end = 0.0;
        c.snapshots = false;
    } else if (scenario == "reduction_checks") {
        c.n_points = 256;
        c.length = 40.0;
        smooth_data(c, 0.6, 0.9, 0.8);
        c.stepper.dt = 1e-3;
        c.stepper.t_end = 0.5;
        c.analysis.reductions = {"two_component", "novikov", "degasperis_procesi"};
        c.snapshots = false;
    }
    return c;
}

ExperimentConfig parse_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object with flat keys");
    }
    if (!j.contains("scenario")) {
        throw ConfigError("config needs a 'scenario' key");
    }
    ExperimentConfig c = default_config(as_string("scenario", j["scenario"]));
    const auto& keys = key_table();
    for (const auto& [name, value] : j.items()) {
        if (value.is_object()) {
            throw ConfigError("config key '" + name + "' is nested; use flat dotted keys");
        }
        if (name.rfind("expect.", 0) == 0) {
            set_expectation(c, name, value);
            continue;
        }
        auto it = std::find_if(keys.begin(), keys.end(), [&](const Key& k) { return k.name == name; });
        if (it == keys.end()) {
            throw ConfigError("unknown config key '" + name + "'");
        }
        if (name != "scenario") {
            it->set(c, value);
        }
    }
    return c;
}

ExperimentConfig load_config(const fs::path& path)
{
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg)
{
    json j;
    for (const auto& k : key_table()) {
        j[k.name] = k.get(cfg);
    }
    for (const auto& comp : decay_components()) {
        for (const auto& e : cfg.analysis.expectations) {
            if (e.component != comp) {
                continue;
            }
            json v = json::array({e.min_rate});
            if (std::isfinite(e.max_rate)) {
                v.push_back(e.max_rate);
            }
            j["expect." + comp] = v;
        }
    }
    return j.dump(2) + "\n";
}

WeightSpec parse_weight(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) {
        parts.push_back(p);
    }
    if (parts.empty()) {
        throw ConfigError("empty weight specification");
    }
    std::vector<double> args;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        try {
            std::size_t used = 0;
            args.push_back(std::stod(parts[i], &used));
            if (used != parts[i].size()) {
                throw std::invalid_argument(parts[i]);
            }
        } catch (const std::exception&) {
            throw ConfigError("weight '" + text + "': '" + parts[i] + "' is not a number");
        }
    }
    auto need = [&](std::size_t n, const char* form) {
        if (args.size() != n) {
            throw ConfigError("weight '" + text + "' must look like " + form);
        }
    };
    try {
        const std::string& kind = parts[0];
        if (kind == "exp_sym") {
            need(1, "exp_sym:a");
            return WeightSpec::exp_sym(args[0]);
        }
        if (kind == "phi_left" || kind == "phi_right") {
            need(2, "phi_left:alpha:N");
            return kind == "phi_left" ? WeightSpec::phi_left(args[0], args[1]) : WeightSpec::phi_right(args[0], args[1]);
        }
        if (kind == "phi_min") {
            need(1, "phi_min:N");
            return WeightSpec::phi_min(args[0]);
        }
        if (kind == "psi") {
            need(4, "psi:a:b:c:d");
            return WeightSpec::psi(args[0], args[1], args[2], args[3]);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("weight '" + text + "': " + e.what());
    }
    throw ConfigError("unknown weight kind in '" + text + "'; use exp_sym, phi_left, phi_right, phi_min or psi");
}

void check_config(const ExperimentConfig& c)
{
    if (!scenario_exists(c.scenario)) {
        default_config(c.scenario);
    }
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    try {
        c.grid();
    } catch (const std::invalid_argument& e) {
        fail(std::string("grid: ") + e.what());
    }
    if (evolves(c.scenario)) {
        try {
            c.stepper.validate();
        } catch (const std::invalid_argument& e) {
            fail(std::string("stepper: ") + e.what());
        }
        if (!(c.stepper.rhs.dealias_fraction > 0.0 && c.stepper.rhs.dealias_fraction <= 1.0)) {
            fail("stepper.dealias_fraction must lie in (0, 1]");
        }
    }
    for (auto [name, p] : used_profiles(c)) {
        if (!std::isfinite(p->amplitude) || !std::isfinite(p->center)) {
            fail(name + ": amplitude and center must be finite");
        }
        if (!(p->width > 0.0) || !(p->rate > 0.0) || !(p->mollifier > 0.0)) {
            fail(name + ": width, rate and mollifier must be positive");
        }
    }
    const auto& a = c.analysis;
    for (double s : a.besov_s) {
        if (!std::isfinite(s)) {
            fail("analysis.besov_s entries must be finite");
        }
    }
    for (const auto& w : a.weights) {
        parse_weight(w);
    }
    for (double lam : a.lambdas) {
        try {
            LaxPairSpec{lam}.validate();
        } catch (const std::invalid_argument& e) {
            fail(std::string("analysis.lambdas: ") + e.what());
        }
    }
    if (a.test_count < 1) {
        fail("analysis.test_count must be positive");
    }
    if (a.curvature_order != 2 && a.curvature_order != 4) {
        fail("analysis.curvature_order must be 2 or 4");
    }
    for (double t : a.sample_times) {
        if (!(t >= 0.0 && t <= c.stepper.t_end)) {
            fail("analysis.sample_times must lie in [0, stepper.t_end]");
        }
    }
    try {
        tail_side_from_string(a.tail_side);
    } catch (const std::invalid_argument& e) {
        fail(std::string("analysis.tail_side: ") + e.what());
    }
    if (!(a.tail_floor > 0.0 && a.tail_floor < 1.0)) {
        fail("analysis.tail_floor must lie in (0, 1)");
    }
    for (const auto& e : a.expectations) {
        if (!(e.min_rate <= e.max_rate)) {
            fail("expect." + e.component + ": min must not exceed max");
        }
    }
    for (const auto& r : a.reductions) {
        try {
            if (reduction_from_string(r) == ReductionTag::full_3ns) {
                fail("analysis.reductions: full_3ns is not a reduction");
            }
        } catch (const std::invalid_argument& e) {
            fail(std::string("analysis.reductions: ") + e.what());
        }
    }
    if (c.scenario == "well_posedness") {
        if (a.iterations < 2 || a.fit_lo < 2 || a.fit_lo >= a.fit_hi || a.fit_hi > a.iterations) {
            fail("well_posedness needs 2 <= analysis.fit_lo < analysis.fit_hi <= analysis.iterations");
        }
    }
    if (c.scenario == "continuous_dependence") {
        if (a.epsilons.empty()) {
            fail("continuous_dependence needs analysis.epsilons");
        }
        for (double e : a.epsilons) {
            if (!(e > 0.0)) {
                fail("analysis.epsilons must be positive for continuous_dependence");
            }
        }
        if (!(a.theta > 0.0)) {
            fail("analysis.theta must be positive");
        }
        if (c.perturbation.family == ProfileFamily::zero || c.perturbation.amplitude == 0.0) {
            fail("continuous_dependence needs a nonzero perturbation profile");
        }
    }
    if (is_decay(c.scenario) && a.sample_times.empty()) {
        fail(c.scenario + " needs analysis.sample_times");
    }
    if (c.scenario == "zero_curvature" && a.lambdas.empty()) {
        fail("zero_curvature needs analysis.lambdas");
    }
    if (c.scenario == "asymmetry_probe") {
        if (c.u.family != ProfileFamily::peakon || c.rho.family != ProfileFamily::gaussian) {
            fail("asymmetry_probe needs u.family = peakon and rho.family = gaussian");
        }
        if (a.epsilons.size() < 2) {
            fail("asymmetry_probe needs at least two analysis.epsilons");
        }
        for (double e : a.epsilons) {
            if (!(e >= 0.0) || !std::isfinite(e)) {
                fail("analysis.epsilons must be non-negative for asymmetry_probe");
            }
        }
        if (!(c.u.mollifier > 0.0) || !(c.rho.width > 0.0)) {
            fail("asymmetry_probe needs positive u.mollifier and rho.width");
        }
    }
    if (c.scenario == "reduction_checks" && a.reductions.empty()) {
        fail("reduction_checks needs analysis.reductions");
    }
}

bool ValidationReport::ok() const
{
    return std::none_of(diagnostics.begin(), diagnostics.end(), [](const auto& d) { return d.severity == "error"; });
}

ValidationReport validate_config(const ExperimentConfig& c)
{
    ValidationReport r;
    for (const auto& w : c.analysis.weights) {
        try {
            WeightSpec spec = parse_weight(w);
            if (spec.kind == WeightKind::exp_sym && spec.a >= 1.0) {
                r.diagnostics.push_back({"warning", "weight_convolution",
                                         "weight '" + w + "': exp(a|x|) with a >= 1 makes w (g * 1/w) unbounded, "
                                                          "so the convolution constant C0 is infinite"});
            }
        } catch (const ConfigError& e) {
            std::string msg = e.what();
            bool alpha = msg.find("(0, 1)") != std::string::npos;
            r.diagnostics.push_back({"error", alpha ? "weight_hypothesis" : "weight",
                                     msg});
        }
    }
    try {
        check_config(c);
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        bool dup = std::any_of(r.diagnostics.begin(), r.diagnostics.end(),
                               [&](const Diagnostic& d) { return d.message.find(msg) != std::string::npos; });
        if (!dup) {
            r.diagnostics.push_back({"error", "invalid_parameter", msg});
        }
        return r;
    }

    for (auto [name, p] : used_profiles(c)) {
        double ratio = seam_ratio(*p, c.length);
        r.seam_ratio.emplace_back(name, ratio);
        if (ratio > kSeamTolerance) {
            std::string msg = name + ": profile at x = +-L/2 is " + format_double(ratio) + " of its peak (" +
                              describe_tail(*p) + ", L = " + format_double(c.length) + "), above the tolerance 1e-12";
            if (p->family == ProfileFamily::sech && p->rate > 0.0) {
                double need = 2.0 * (std::abs(p->center) + std::log(2.0 / kSeamTolerance) / p->rate);
                msg += "; L >= " + format_double(need) + " keeps the tail below it";
            }
            r.diagnostics.push_back({"warning", "truncation", msg});
        }
    }
    if (evolves(c.scenario) && c.scenario != "asymmetry_probe") {
        PrimitiveState s0 = c.initial_state();
        double speed = 0.0;
        for (int i = 0; i < s0.grid().n_points(); ++i) {
            speed = std::max(speed, std::abs(s0.u.value(i) * s0.v.value(i)));
        }
        r.cfl_number = c.stepper.effective_dt() * speed / s0.grid().spacing();
        if (r.cfl_number > c.stepper.cfl_guard) {
            r.diagnostics.push_back({"warning", "cfl",
                                     "initial CFL number " + format_double(r.cfl_number) + " exceeds the guard " +
                                         format_double(c.stepper.cfl_guard) + "; the run would abort"});
        }
    }
    return r;
}

std::string validation_to_json(const ValidationReport& r)
{
    json j;
    j["ok"] = r.ok();
    json diags = json::array();
    for (const auto& d : r.diagnostics) {
        diags.push_back({{"severity", d.severity}, {"code", d.code}, {"message", d.message}});
    }
    j["diagnostics"] = diags;
    json preview;
    preview["cfl_number"] = num(r.cfl_number);
    json seams = json::object();
    for (const auto& [name, v] : r.seam_ratio) {
        seams[name] = num(v);
    }
    preview["seam_ratio"] = seams;
    j["preview"] = preview;
    return j.dump(2) + "\n";
}

std::string sha256_file(const fs::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot read " + path.string());
    }
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 15];
    while (is.read(buf, sizeof buf) || is.gcount() > 0) {
        EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(is.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return hex.str();
}

std::string manifest_to_json(const RunManifest& m)
{
    json j;
    j["code_version"] = m.code_version;
    j["status"] = m.status;
    j["exit_code"] = m.exit_code;
    if (!m.error.empty()) {
        j["error"] = {{"kind", "compute_abort"}, {"message", m.error}};
    }
    j["wall_seconds"] = m.wall_seconds;
    j["config"] = json::parse(m.config_json);
    json stages = json::array();
    for (const auto& s : m.stages) {
        stages.push_back({{"name", s.name}, {"status", s.status}, {"seconds", s.seconds}, {"detail", s.detail}});
    }
    j["stages"] = stages;
    json files = json::array();
    for (const auto& f : m.files) {
        files.push_back({{"path", f.path}, {"bytes", f.bytes}, {"sha256", f.sha256}});
    }
    j["files"] = files;
    return j.dump(2) + "\n";
}

const char* code_version()
{
    return NOVIKOV_VERSION;
}

RunManifest run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir)
{
    check_config(cfg);
    auto t0 = std::chrono::steady_clock::now();
    RunManifest m;
    m.config_json = config_to_json(cfg);
    m.code_version = code_version();
    fs::create_directories(out_dir);
    Artifacts out(out_dir);
    Stages stages(m);
    {
        auto os = out.open("config.json");
        os << m.config_json;
    }
    json summary;
    try {
        if (cfg.scenario == "well_posedness") {
            summary = run_well_posedness(cfg, out, stages);
        } else if (cfg.scenario == "continuous_dependence") {
            summary = run_continuous_dependence(cfg, out, stages);
        } else if (is_decay(cfg.scenario)) {
            summary = run_decay(cfg, out, stages);
        } else if (cfg.scenario == "zero_curvature") {
            summary = run_zero_curvature(cfg, out, stages);
        } else if (cfg.scenario == "weak_form") {
            summary = run_weak_form(cfg, out, stages);
        } else if (cfg.scenario == "asymmetry_probe") {
            summary = run_asymmetry(cfg, out, stages);
        } else if (cfg.scenario == "reduction_checks") {
            summary = run_reductions(cfg, out, stages);
        }
        json s{{"scenario", cfg.scenario}};
        s.update(summary);
        out.write_json("summary.json", s);
    } catch (const Abort& a) {
        m.status = "aborted";
        m.error = a.message;
        m.exit_code = 2;
    } catch (const std::exception& e) {
        m.status = "aborted";
        m.error = e.what();
        m.exit_code = 2;
    }
    for (const auto& rel : out.files()) {
        fs::path p = out_dir / rel;
        m.files.push_back({rel, fs::file_size(p), sha256_file(p)});
    }
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream os(out_dir / "manifest.json", std::ios::binary);
    os << manifest_to_json(m);
    return m;
}

} // namespace novikov
