#pragma once

#include <optional>
#include <string>
#include <vector>

#include "noisyls/config.hpp"
#include "noisyls/linesearch.hpp"

namespace noisyls {

struct TrialSummary {
    long trial = 0;
    std::optional<long> n_eps;
    bool censored = false;
    double delta_hat = 0.0;
    long iterations = 0;
    long successes = 0;
};

struct ExperimentResult {
    std::vector<TrialSummary> summaries;
    std::vector<RunRecord> records;  ///< kept only when requested
    double mean_n_eps = 0.0;
    double std_err_n_eps = 0.0;
    long censored = 0;
    std::optional<double> bound;
};

/// Run all trials on a bounded worker pool (per-trial seeds base_seed + i);
/// results are ordered by trial index regardless of completion order.
ExperimentResult run_experiment(const ResolvedExperiment& experiment, bool keep_records = false);

/// Per-iteration CSV, columns exactly:
/// trial,k,alpha,successful,accuracy_event,f_cur,f_trial,phi_true,grad_norm_true,z_k
std::string iterations_csv_header();
std::string iterations_csv_rows(const ResolvedExperiment& experiment, long trial,
                                const RunRecord& record);

/// Summary CSV, columns exactly:
/// trial,N_eps,censored,delta_hat,iterations,successes,bound
std::string summary_csv_header();
std::string summary_csv_row(const TrialSummary& summary, const std::optional<double>& bound);

/// Value of the case progress variable at a given exact function value.
double progress_value(CaseClass case_class, double phi_k, double phi0,
                      std::optional<double> phi_star);

/// Runs the experiment and writes iterations.csv (optional), summary.csv and
/// report.txt under experiment.output_dir. Returns the in-memory result.
ExperimentResult run_and_write(const ResolvedExperiment& experiment);

struct SweepCell {
    std::vector<std::pair<std::string, nlohmann::json>> assignment;
    std::vector<std::string> resolved_values;  ///< one CSV-ready field per swept key
    ExperimentResult result;
};

/// Cartesian sweep over the keys of the sweep spec:
///   {"sweep": [{"key": "noise.epsilon_f", "values": [...]}, ...]}
/// Writes sweep_summary.csv plus x,y,series plot-data files under output_dir.
std::vector<SweepCell> run_sweep(const nlohmann::json& base_config,
                                 const nlohmann::json& sweep_spec, const std::string& output_dir);

}  // namespace noisyls
