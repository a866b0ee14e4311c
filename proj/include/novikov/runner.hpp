#pragma once

#include "novikov/decay.hpp"
#include "novikov/evolution.hpp"
#include "novikov/profiles.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace novikov {

/// Bad scenario name, unknown key, wrong type or out-of-range parameter.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AnalysisConfig {
    std::vector<double> besov_s{-0.5, 0.5};
    std::vector<std::string> weights;  ///< "exp_sym:a", "phi_left:alpha:N", "phi_right:alpha:N", "phi_min:N", "psi:a:b:c:d"
    std::vector<double> lambdas{0.5, 1.0, 2.0};
    std::uint64_t test_seed = 11;
    int test_count = 16;
    int curvature_order = 4;
    std::vector<double> sample_times;
    std::vector<DecayExpectation> expectations; ///< keys "expect.<component>" = [min] or [min, max]
    std::string tail_side = "both";
    double tail_floor = 1e-13;
    int iterations = 10;
    int fit_lo = 2;
    int fit_hi = 8;
    std::vector<double> epsilons;
    double theta = 0.5;
    std::vector<std::string> reductions;
};

struct ExperimentConfig {
    std::string scenario;
    int n_points = 256;
    double length = 40.0;
    ProfileSpec rho;
    ProfileSpec u;
    ProfileSpec v;
    ProfileSpec perturbation; ///< direction for the continuous-dependence ladder, used on all components
    StepperConfig stepper;
    Formulation form = Formulation::momentum;
    AnalysisConfig analysis;
    bool snapshots = true;

    Grid1D grid() const { return Grid1D(n_points, length); }
    PrimitiveState initial_state() const;
};

struct ScenarioInfo {
    std::string name;
    std::string description;
};

/// Built-in scenarios in a fixed order.
const std::vector<ScenarioInfo>& list_scenarios();
bool scenario_exists(const std::string& name);
ExperimentConfig default_config(const std::string& scenario);

/// Reads a flat JSON object ("grid.n_points": 512, ...). Keys not present keep the
/// scenario defaults; unknown keys, bad types and unknown scenarios throw ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Every key with its value, as pretty-printed flat JSON.
std::string config_to_json(const ExperimentConfig& cfg);

/// Range checks that must hold before any compute; throws ConfigError.
void check_config(const ExperimentConfig& cfg);

WeightSpec parse_weight(const std::string& text);

struct Diagnostic {
    std::string severity; ///< "error" or "warning"
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<Diagnostic> diagnostics;
    double cfl_number = 0.0;                 ///< dt max|u v| / spacing at t = 0
    std::vector<std::pair<std::string, double>> seam_ratio; ///< |f| at x = -L/2 over max |f|, per field
    bool ok() const;
};

/// Static checks only: parameter ranges, tail truncation estimate, CFL preview
/// from the initial data, and weight hypotheses. Never throws.
ValidationReport validate_config(const ExperimentConfig& cfg);
std::string validation_to_json(const ValidationReport& r);

struct StageRecord {
    std::string name;
    std::string status; ///< "ok", "aborted" or "failed"
    double seconds = 0.0;
    std::string detail;
};

struct FileRecord {
    std::string path; ///< relative to the output directory
    std::uintmax_t bytes = 0;
    std::string sha256;
};

struct RunManifest {
    std::string config_json;
    std::string code_version;
    double wall_seconds = 0.0;
    std::vector<StageRecord> stages;
    std::vector<FileRecord> files;
    std::string status = "ok"; ///< "ok" or "aborted"
    std::string error;
    int exit_code = 0;         ///< 0 ok, 2 compute abort
};

/// Runs the scenario pipeline, writes CSV/JSON artifacts and manifest.json into
/// `out_dir`, and returns the manifest. ConfigError propagates before anything
/// is written; compute aborts are recorded in the manifest with exit code 2.
RunManifest run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

std::string sha256_file(const std::filesystem::path& path);
std::string manifest_to_json(const RunManifest& m);

const char* code_version();

} // namespace novikov
