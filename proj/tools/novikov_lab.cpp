#include "novikov/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

using novikov::ConfigError;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kComputeAbort = 2;

void error_record(const std::string& kind, const std::string& message)
{
    json j;
    j["error"] = {{"kind", kind}, {"message", message}};
    if (kind == "config") {
        json names = json::array();
        for (const auto& s : novikov::list_scenarios()) {
            names.push_back(s.name);
        }
        j["error"]["valid_scenarios"] = names;
    }
    std::cerr << j.dump() << '\n';
}

int cmd_list(const std::string& write_dir)
{
    for (const auto& s : novikov::list_scenarios()) {
        std::cout << s.name << "\t" << s.description << '\n';
    }
    if (!write_dir.empty()) {
        std::filesystem::create_directories(write_dir);
        for (const auto& s : novikov::list_scenarios()) {
            std::ofstream os(std::filesystem::path(write_dir) / (s.name + ".json"), std::ios::binary);
            os << novikov::config_to_json(novikov::default_config(s.name));
        }
    }
    return kOk;
}

int cmd_validate(const std::string& config_path)
{
    novikov::ExperimentConfig cfg;
    try {
        cfg = novikov::load_config(config_path);
    } catch (const ConfigError& e) {
        error_record("config", e.what());
        return kConfigError;
    }
    auto report = novikov::validate_config(cfg);
    std::cout << novikov::validation_to_json(report);
    return report.ok() ? kOk : kConfigError;
}

int cmd_run(const std::string& config_path, const std::string& out_dir)
{
    try {
        auto cfg = novikov::load_config(config_path);
        auto manifest = novikov::run_experiment(cfg, out_dir);
        if (manifest.exit_code != 0) {
            error_record("compute_abort", manifest.error);
            return kComputeAbort;
        }
        std::cout << "ok: " << cfg.scenario << ", " << manifest.files.size() << " files in " << out_dir << '\n';
        return kOk;
    } catch (const ConfigError& e) {
        error_record("config", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        error_record("compute_abort", e.what());
        return kComputeAbort;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical lab for the three-component Novikov system"};
    app.require_subcommand(1);

    std::string write_dir;
    auto* list = app.add_subcommand("list", "List built-in scenarios");
    list->add_option("--write-configs", write_dir, "Also write each scenario's default config into this directory");

    std::string config_path;
    auto* validate = app.add_subcommand("validate", "Static checks of a config");
    validate->add_option("--config", config_path, "Config file (flat JSON)")->required();

    std::string run_config, out_dir;
    auto* run = app.add_subcommand("run", "Run a scenario and write its artifacts");
    run->add_option("--config", run_config, "Config file (flat JSON)")->required();
    run->add_option("--out", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (list->parsed()) {
        return cmd_list(write_dir);
    }
    if (validate->parsed()) {
        return cmd_validate(config_path);
    }
    return cmd_run(run_config, out_dir);
}
