#include "noisyls/process.hpp"

#include <cmath>
#include <stdexcept>

#include "noisyls/theory.hpp"

namespace noisyls {

double HFunction::operator()(double alpha) const {
    switch (kind) {
        case Kind::constant:
            return value;
        case Kind::linear:
            return value * alpha;
        case Kind::log_contraction: {
            const double arg = 1.0 - value * alpha;
            if (arg <= 1e-12) return -std::log(1e-12);
            return -std::log(arg);
        }
    }
    throw std::logic_error("HFunction: unreachable");
}

double ProcessParams::alpha_bar() const { return alpha_at(grid_exponent); }

double ProcessParams::alpha_at(int m) const {
    return tau == 1.0 ? alpha0 : alpha0 * std::pow(tau, static_cast<double>(m));
}

void ProcessParams::validate() const {
    if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("process: delta must lie in [0, 1)");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("process: gamma must lie in (0, 1)");
    if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("process: tau must lie in (0, 1]");
    if (!(alpha0 > 0.0)) throw std::invalid_argument("process: alpha0 must be positive");
    if (grid_exponent < 0) throw std::invalid_argument("process: grid exponent must be nonnegative");
    if (tau == 1.0 && grid_exponent != 0) {
        throw std::invalid_argument("process: tau = 1 requires grid exponent 0");
    }
    if (!(z_eps > 0.0)) throw std::invalid_argument("process: z_eps must be positive");
    if (r < 0.0) throw std::invalid_argument("process: r must be nonnegative");
    const double h_bar = h(alpha_bar());
    if (!(h_bar > 0.0)) throw std::invalid_argument("process: h(alpha_bar) must be positive");
    if (r > gamma * h_bar) {
        throw std::invalid_argument("process: r exceeds gamma * h(alpha_bar)");
    }
    if (horizon < 1) throw std::invalid_argument("process: horizon must be at least 1");
}

ProcessTrace simulate(const ProcessParams& params, std::uint64_t seed, bool record_steps) {
    params.validate();
    RngStream stream = RngStream::substream(seed, 0);

    ProcessTrace trace;
    const int c = params.grid_exponent;
    int m = 0;
    double z = 0.0;

    for (long k = 0;; ++k) {
        if (z >= params.z_eps) {
            trace.n_eps = k;
            break;
        }
        if (k >= params.horizon) break;  // censored

        const bool at_or_below = m >= c;  // alpha <= alpha_bar
        const bool above = m < c;         // alpha > alpha_bar
        const bool at_or_above = m <= c;  // alpha >= alpha_bar
        const double alpha = params.alpha_at(m);
        const bool accurate = !stream.bernoulli(params.delta);

        bool successful = false;
        if (accurate && at_or_below) {
            successful = true;  // forced
        } else {
            switch (params.policy.unforced) {
                case AdversaryPolicy::Unforced::always_succeed:
                    successful = true;
                    break;
                case AdversaryPolicy::Unforced::never_succeed:
                    successful = false;
                    break;
                case AdversaryPolicy::Unforced::bernoulli:
                    successful = stream.bernoulli(params.policy.bernoulli_p);
                    break;
                case AdversaryPolicy::Unforced::adversarial_greedy:
                    // inaccurate iterations succeed (take the loss), accurate
                    // ones above the threshold fail (burn a step)
                    successful = !accurate;
                    break;
            }
        }

        if (successful) {
            if (accurate) {
                z += params.policy.gain == AdversaryPolicy::Gain::minimal
                         ? params.h(alpha) - params.r
                         : params.h(alpha);
            } else if (params.policy.loss == AdversaryPolicy::Loss::maximal) {
                z -= params.r;
            }
        }

        trace.n_ts += at_or_above && accurate && successful;
        trace.n_fs += at_or_above && !accurate && successful;
        trace.n_t += at_or_above && accurate;
        trace.n_f += at_or_above && !accurate;
        trace.n_tu += above && accurate && !successful;
        trace.n_u += above && !successful;
        trace.n_ss += !at_or_above && successful;
        trace.last_step_counted_true_success = at_or_above && accurate && successful;
        trace.steps_executed = k + 1;

        if (record_steps) {
            trace.steps.push_back({accurate, successful, m, alpha, z});
        }
        m += successful ? -1 : 1;
    }

    trace.z_final = z;
    return trace;
}

TraceCheckReport check_realization_lemmas(const ProcessTrace& trace, const ProcessParams& params) {
    const double h_bar = params.h(params.alpha_bar());
    const double g = params.gamma;

    TraceCheckReport report;
    report.unsuccessful_budget_slack =
        static_cast<double>(trace.n_ts + trace.n_fs + params.grid_exponent) -
        static_cast<double>(trace.n_u);
    const double rhs = params.z_eps / ((1.0 - g) * h_bar) +
                       (g / (1.0 - g)) * static_cast<double>(trace.n_fs + trace.n_ss);
    report.true_success_budget_slack = rhs - static_cast<double>(trace.n_ts);
    report.true_success_budget_adjusted_slack =
        report.true_success_budget_slack + (trace.last_step_counted_true_success ? 1.0 : 0.0);
    report.z_accounting_slack =
        trace.z_final - (static_cast<double>(trace.n_ts) * (h_bar - params.r) -
                         params.r * static_cast<double>(trace.n_fs + trace.n_ss));
    report.counters_consistent = trace.n_t == trace.n_ts + trace.n_tu;

    report.ok = report.unsuccessful_budget_slack >= 0.0 && report.true_success_budget_slack >= 0.0 &&
                report.counters_consistent;
    report.ok_adjusted = report.unsuccessful_budget_slack >= 0.0 &&
                         report.true_success_budget_adjusted_slack >= 0.0 &&
                         report.counters_consistent;
    return report;
}

MonteCarloResult monte_carlo_expectation(const ProcessParams& params, long trials,
                                         std::uint64_t base_seed) {
    if (trials < 2) throw std::invalid_argument("monte_carlo_expectation: trials must be >= 2");
    params.validate();

    MonteCarloResult result;
    result.trials = trials;
    double sum = 0.0, sumsq = 0.0;
    long completed = 0;

    for (long t = 0; t < trials; ++t) {
        const ProcessTrace trace = simulate(params, base_seed + static_cast<std::uint64_t>(t));
        const TraceCheckReport report = check_realization_lemmas(trace, params);
        if (!report.ok) ++result.stated_check_violations;
        if (!report.ok_adjusted) ++result.adjusted_check_violations;
        if (!trace.n_eps) {
            ++result.censored;
            continue;
        }
        const double n = static_cast<double>(*trace.n_eps);
        sum += n;
        sumsq += n * n;
        result.max_n_eps = std::max(result.max_n_eps, *trace.n_eps);
        ++completed;
    }

    if (completed > 0) {
        result.mean = sum / completed;
        if (completed > 1) {
            const double var = std::max(0.0, (sumsq - sum * sum / completed) / (completed - 1));
            result.std_err = std::sqrt(var / completed);
        }
    }
    return result;
}

double process_expected_bound(const ProcessParams& params) {
    return master_bound(params.delta, params.gamma, params.z_eps, params.h(params.alpha_bar()),
                        params.grid_exponent);
}

}  // namespace noisyls
