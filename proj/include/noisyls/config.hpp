#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "noisyls/linesearch.hpp"
#include "noisyls/noise.hpp"
#include "noisyls/problem.hpp"
#include "noisyls/process.hpp"
#include "noisyls/theory.hpp"

namespace noisyls {

/// Raised on malformed or inconsistent configuration; the message names the
/// offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A fully resolved optimizer experiment: placeholders ("alpha_bar",
/// floor-relative epsilon, "region_D") replaced by numbers, cross-field
/// consistency checked, and the complexity quantities precomputed when a
/// theory block is present.
struct ResolvedExperiment {
    Problem problem;
    NoiseModel noise;
    GradientSpec gradient;
    LineSearchConfig linesearch;
    StoppingSpec stopping;
    Eigen::VectorXd x0;

    std::optional<TheoryParams> theory;
    std::optional<double> bound;
    std::optional<double> floor;
    std::optional<double> alpha_bar_value;
    std::optional<int> grid_exponent;

    long trials = 1;
    std::uint64_t base_seed = 0;
    std::string output_dir = "out";
    int threads = 1;
    bool write_iterations = true;
    std::uint64_t config_hash = 0;
    nlohmann::json raw;
};

/// A resolved process-simulation experiment.
struct ResolvedProcess {
    ProcessParams params;
    std::optional<double> bound;
    long trials = 2;
    std::uint64_t base_seed = 0;
    std::string output_dir = "out";
    long export_traces = 0;
    std::uint64_t config_hash = 0;
    nlohmann::json raw;
};

bool is_process_config(const nlohmann::json& config);

ResolvedExperiment resolve_experiment(const nlohmann::json& config);
ResolvedProcess resolve_process(const nlohmann::json& config);

nlohmann::json load_config_file(const std::string& path);

/// FNV-1a of the canonical serialization; ties artifacts to their config.
std::uint64_t config_fingerprint(const nlohmann::json& config);

/// Set a value at a dotted path ("noise.epsilon_f"); throws ConfigError if the
/// path does not already exist in the document.
void set_config_key(nlohmann::json& config, const std::string& dotted_key,
                    const nlohmann::json& value);

}  // namespace noisyls
