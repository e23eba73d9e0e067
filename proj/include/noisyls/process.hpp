#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "noisyls/rng.hpp"

namespace noisyls {

/// Resolves the process outcomes the progress assumptions leave open: whether
/// an iteration not forced to succeed does succeed, and how tightly the
/// progress variable moves against its one-sided bounds.
/// `adversarial_greedy` makes inaccurate iterations succeed (taking the
/// maximal loss) and accurate iterations above the step threshold fail
/// (burning steps), the heuristic worst case for the stopping time.
struct AdversaryPolicy {
    enum class Unforced { always_succeed, never_succeed, bernoulli, adversarial_greedy };
    enum class Gain { minimal, generous };  ///< progress on accurate successes: h(a)-r vs h(a)
    enum class Loss { maximal, none };      ///< progress on other successes: -r vs 0
    Unforced unforced = Unforced::adversarial_greedy;
    double bernoulli_p = 0.5;
    Gain gain = Gain::minimal;
    Loss loss = Loss::maximal;
};

/// Progress-per-step function handle. The log_contraction kind is
/// -log(1 - q*alpha), clamped to its domain (the gain is unbounded past it).
struct HFunction {
    enum class Kind { constant, linear, log_contraction };
    Kind kind = Kind::constant;
    double value = 0.1;  ///< constant level, linear slope, or contraction rate q

    double operator()(double alpha) const;
};

struct ProcessParams {
    double delta = 0.0;
    double gamma = 0.5;
    double tau = 0.5;
    double alpha0 = 1.0;
    int grid_exponent = 0;  ///< c >= 0 with alpha_bar = alpha0 * tau^c
    HFunction h;
    double r = 0.0;
    double z_eps = 1.0;
    AdversaryPolicy policy;
    long horizon = 100000;

    double alpha_bar() const;
    double alpha_at(int m) const;  ///< alpha0 * tau^m
    void validate() const;         ///< throws std::invalid_argument on bad parameters
};

struct ProcessStep {
    bool accurate = false;
    bool successful = false;
    int m = 0;  ///< grid exponent before the step (alpha = alpha0 * tau^m)
    double alpha = 0.0;
    double z_after = 0.0;
};

/// Counters follow the standard decomposition over the iterations strictly
/// before the stopping time: TS/FS/T/F count at or above the step threshold,
/// TU/U strictly above it, SS strictly below.
struct ProcessTrace {
    long n_ts = 0, n_fs = 0, n_t = 0, n_f = 0, n_tu = 0, n_u = 0, n_ss = 0;
    std::optional<long> n_eps;  ///< censored when absent
    long steps_executed = 0;
    double z_final = 0.0;
    bool last_step_counted_true_success = false;  ///< final executed step added to n_ts
    std::vector<ProcessStep> steps;               ///< populated when record_steps is set
};

/// Simulate the abstract step-size/progress chain: accuracy events are
/// Bernoulli(1-delta) independent of history, accurate iterations at or below
/// the threshold are forced successful, everything else goes to the policy.
ProcessTrace simulate(const ProcessParams& params, std::uint64_t seed, bool record_steps = false);

/// Per-realization accounting checks on a completed (or prefix of a censored)
/// trace. `unsuccessful_budget` is
///   n_u <= n_ts + n_fs + c;
/// `true_success_budget` is the stated counting bound
///   n_ts <= z_eps / ((1-gamma) h(alpha_bar)) + gamma/(1-gamma) (n_fs + n_ss),
/// whose right side does not account for the final crossing step;
/// `true_success_budget_adjusted` allows that one step when it was a true
/// success at or above the threshold. `z_accounting` is the raw inequality
///   n_ts (h(alpha_bar) - r) - r (n_fs + n_ss) <= z_final.
struct TraceCheckReport {
    double unsuccessful_budget_slack = 0.0;
    double true_success_budget_slack = 0.0;
    double true_success_budget_adjusted_slack = 0.0;
    double z_accounting_slack = 0.0;
    bool counters_consistent = false;  ///< n_t == n_ts + n_tu (no true failures at the threshold)
    bool ok = false;                   ///< stated-form checks all hold
    bool ok_adjusted = false;          ///< crossing-aware form holds
};

TraceCheckReport check_realization_lemmas(const ProcessTrace& trace, const ProcessParams& params);

struct MonteCarloResult {
    double mean = 0.0;
    double std_err = 0.0;
    long censored = 0;
    long trials = 0;
    long stated_check_violations = 0;    ///< traces failing the stated counting bounds
    long adjusted_check_violations = 0;  ///< traces failing the crossing-aware form
    long max_n_eps = 0;
};

/// Independent trials with per-trial substreams; censored runs are excluded
/// from the mean and reported separately.
MonteCarloResult monte_carlo_expectation(const ProcessParams& params, long trials,
                                         std::uint64_t base_seed);

/// Master expected-stopping-time bound for these process parameters.
double process_expected_bound(const ProcessParams& params);

}  // namespace noisyls
