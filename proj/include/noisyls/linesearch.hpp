#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "noisyls/gradient.hpp"
#include "noisyls/noise.hpp"
#include "noisyls/problem.hpp"
#include "noisyls/rng.hpp"

namespace noisyls {

/// Search-direction rule. `steepest` emits -g. `scaled` emits -H g for a
/// random symmetric positive definite H whose spectrum is clamped to
/// [kappa1, kappa2]; every emitted direction then satisfies
/// kappa1*||g|| <= ||d|| <= kappa2*||g|| and d'g/(||d|| ||g||) <= -beta
/// (falling back to -g if the angle test fails).
struct DirectionRule {
    enum class Kind { steepest, scaled };
    Kind kind = Kind::steepest;
    double beta = 1.0;
    double kappa1 = 1.0;
    double kappa2 = 1.0;
};

struct LineSearchConfig {
    double c1 = 0.5;
    double tau = 0.5;  ///< backtracking factor in (0, 1]; tau = 1 is fixed-step mode
    double alpha0 = 1.0;
    std::optional<double> alpha_max;  ///< expansion cap (required by the mixed condition)
    double epsilon_f = 0.0;           ///< noise bound used as the acceptance margin
    DirectionRule direction;
    long max_iter = 1000000;
    std::optional<double> projection_radius;  ///< optional ball safeguard around projection_center
    Eigen::VectorXd projection_center;        ///< defaults to the origin when empty
    bool record_vectors = false;              ///< keep x, g, d per iteration (memory heavy)
};

/// One outer iteration as recorded. `m` is the exact step-size grid exponent:
/// alpha = anchor * tau^m (anchor is alpha0 until an alpha_max cap rebases it).
struct IterationRecord {
    long k = 0;
    double alpha = 0.0;
    int m = 0;
    double dtg = 0.0;  ///< d'g as used in the acceptance test
    double g_norm = 0.0;
    double d_norm = 0.0;
    double f_cur = 0.0;
    double f_trial = 0.0;
    bool successful = false;     ///< acceptance-test outcome
    bool accuracy_event = false; ///< gradient accuracy indicator realization
    bool null_step = false;      ///< estimator returned g = 0
    double phi_true = 0.0;       ///< diagnostic: exact phi at the iterate
    double grad_norm_true = 0.0; ///< diagnostic: exact gradient norm at the iterate
    Eigen::VectorXd x, g, d;     ///< populated only when record_vectors is set
};

struct StoppingSpec {
    enum class Mode { value_gap, grad_norm, value_gap_or_grad_floor };
    Mode mode = Mode::grad_norm;
    double epsilon = 1e-6;
    double grad_floor = 0.0;  ///< threshold of the gradient disjunct in the combined mode
};

struct RunRecord {
    std::vector<IterationRecord> iterations;
    std::optional<long> n_eps;  ///< first iteration index at which the stopping event held
    bool censored = false;      ///< max_iter reached without the stopping event
    double delta_hat = 0.0;     ///< realized frequency of inaccurate-gradient iterations
    double final_phi_true = 0.0;
    double final_grad_norm_true = 0.0;
    std::uint64_t seed = 0;
};

/// Noise-aware sufficient-decrease test:
///   f_trial <= f_cur + c1 * alpha * dtg + 2 * epsilon_f.
/// Throws std::invalid_argument on non-finite inputs.
bool armijo_accept(double f_trial, double f_cur, double dtg, double alpha, double c1,
                   double epsilon_f);

/// Direction from an explicitly given symmetric H (spectrum clamped first).
Eigen::VectorXd make_direction_with(const Eigen::MatrixXd& H, const DirectionRule& rule,
                                    const Eigen::VectorXd& g);

/// Direction per the rule; `scaled` draws a fresh random H each call.
/// g = 0 yields the zero direction.
Eigen::VectorXd make_direction(const DirectionRule& rule, const Eigen::VectorXd& g,
                               RngStream& stream);

/// Step-size state on the exact tau grid. A cap at alpha_max rebases the
/// anchor so later values stay products anchor * tau^m.
struct StepState {
    double anchor = 1.0;
    int m = 0;
    double value(double tau) const;
};

struct StepOutcome {
    Eigen::VectorXd x_next;
    StepState step_next;
    IterationRecord record;
};

/// One acceptance test and update: evaluates f at x and x + alpha*d with
/// fresh independent noise (a single shared draw when d = 0), moves/expands on
/// acceptance, holds/backtracks otherwise, and applies the optional ball
/// projection to the accepted iterate.
StepOutcome ls_step(const Problem& problem, const NoiseModel& noise, const LineSearchConfig& config,
                    const Eigen::VectorXd& x, const StepState& step, const Eigen::VectorXd& g,
                    const Eigen::VectorXd& d, RngStream& stream);

/// Full optimization loop. The stopping event is evaluated before each
/// iteration, so every recorded iteration happened strictly before it.
RunRecord run(const Problem& problem, const NoiseModel& noise, const GradientSpec& gradient,
              const LineSearchConfig& config, const StoppingSpec& stop, const Eigen::VectorXd& x0,
              std::uint64_t seed);

/// First iteration index at which the stopping event holds, recomputed from a
/// record's diagnostics (including the post-run iterate); nullopt if censored
/// before the event. Throws when value-gap stopping is requested without a
/// known phi_star.
std::optional<long> stopping_time(const RunRecord& record, const Problem& problem,
                                  const StoppingSpec& stop);

}  // namespace noisyls
