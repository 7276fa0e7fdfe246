#pragma once

// Batch commands behind the C API and the command-line tool: configuration
// parsing, report serialization, and the solve / evaluate / verify / sweep
// pipelines. File output is left to the caller.

#include "riskdp/markov_model.hpp"
#include "riskdp/risk_measures.hpp"
#include "riskdp/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace riskdp::app {

enum class ModelKind { Investment, LQ, Tabular };

struct ModelConfig {
    ModelKind kind = ModelKind::LQ;
    InvestmentParams investment;
    LQParams lq;
    std::string tabular_path; // resolved against the config file's directory
    std::size_t tabular_x0 = 0;
};

struct RunConfig {
    ModelConfig model;
    RiskSpec risk;
    double discount = 0.5;
    double epsilon = 0.1;
    double tolerance = 1e-6;
    std::size_t max_sweeps = 1000;
    std::size_t horizon = 50;
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    nlohmann::json source; // the document as given, echoed into report.json
};

/// Throws ConfigError naming the offending field.
RunConfig parse_config(const std::string& json_text, const std::string& base_dir = ".");
/// As parse_config; IoError when the file cannot be read.
RunConfig load_config(const std::string& path);

MarkovModel build_model(const RunConfig& config);

/// Starting state coordinate x0 and its nearest grid index.
double initial_coordinate(const RunConfig& config);

/// Base policy for epsilon-optimal assembly: the zero action for the built-in
/// models, none for tabular models (the stationary value-iteration policy is used).
std::optional<StagePolicy> base_policy(const RunConfig& config, const MarkovModel& model);

/// Per-stage tail bound c_bar for the base policy. Investment: the largest
/// wealth on the grid. LQ: 2 x_max^2 + 2 sigma^2 * cap with cap the risk
/// measure's density cap. Tabular: the largest stage cost.
double tail_bound_per_stage(const RunConfig& config, const MarkovModel& model);

struct SolveOutput {
    SolveReport report;
    double value_at_x0 = 0.0;
    std::string report_json;
    std::string values_csv;
    std::string policy_csv;
};

/// Value iteration, epsilon horizon, backward induction and assembly.
/// A report is produced even when value iteration does not converge.
SolveOutput run_solve(const RunConfig& config);

nlohmann::json report_to_json(const SolveReport& report, const RunConfig& config,
                              const MarkovModel& model, double value_at_x0);
std::string values_to_csv(const MarkovModel& model, const ValueFunction& values);
std::string policy_to_csv(const Policy& policy, std::size_t num_states);

/// Reads "stage,state,action" rows; the last listed stage repeats forever.
Policy parse_policy_csv(const std::string& text, const MarkovModel& model);

/// Nested value of the given policy at the configured horizon, as values.csv text.
std::string run_evaluate(const RunConfig& config, const std::string& policy_csv);

struct VerifyOptions {
    /// Test hook: the LP oracle uses a density cap 1.5x too large.
    bool corrupt_cap = false;
};

struct VerifySuiteResult {
    std::string name;
    std::size_t cases = 0;
    double max_error = 0.0;
    bool passed = true;
};

struct VerifyOutcome {
    bool passed = true;
    std::vector<VerifySuiteResult> suites;
    std::string table;
    /// First failing instance; empty when everything passed.
    std::string counterexample_json;
};

VerifyOutcome run_verify(const RunConfig& config, const VerifyOptions& options = {});

struct SweepRow {
    double param = 0.0;
    double value_at_x0 = 0.0;
    std::size_t n0 = 0;
    std::size_t sweeps = 0;
    bool converged = true;
};

struct SweepOutput {
    std::vector<SweepRow> rows;
    std::string csv;
    bool all_converged = true;
    /// Only meaningful for "alpha": V*(x0) nondecreasing within 1e-12.
    bool monotone = true;
};

/// Re-solves for every value of "alpha" (AV@R level) or "kappa"
/// (mean-deviation coefficient). Unknown names are a ConfigError.
SweepOutput run_sweep(const RunConfig& config, const std::string& param,
                      const std::vector<double>& values);

} // namespace riskdp::app
