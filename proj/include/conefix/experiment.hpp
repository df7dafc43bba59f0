#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace conefix {

struct Tolerances {
    double tol = 1e-12;
    double order_tol = 1e-10;
    double floor = 1e-8;
    int max_iter = 10000;
};

// Validated experiment description. Parameter blocks are kept as JSON with
// every default filled in, so the report can echo the resolved config.
struct ExperimentConfig {
    std::string name;
    std::string op;
    nlohmann::json op_params;
    std::string driver;
    nlohmann::json driver_params;
    nlohmann::json grid; // null when the operator default is used
    Tolerances tolerances;
    std::string output_dir = ".";
    std::uint64_t seed = 1;
    int audit_samples = 100;

    nlohmann::json to_json() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
// Reads a JSON file, or a built-in experiment when `source` names one.
ExperimentConfig load_config(const std::string& source);

struct BuiltinExperiment {
    std::string name;
    std::string description;
    nlohmann::json config;
};

const std::vector<BuiltinExperiment>& builtin_experiments();

struct RunOutcome {
    int exit_code = 0; // 0 ok, 1 validation / io, 2 certification, 3 non-convergence
    std::string message;
    nlohmann::json report;
};

// Runs the experiment and writes report.json, residuals.csv and solution.csv
// into the output directory when write_files is set.
RunOutcome run_experiment(const ExperimentConfig& cfg, bool write_files = true);

} // namespace conefix
