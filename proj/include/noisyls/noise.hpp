#pragma once

#include <Eigen/Dense>

#include "noisyls/problem.hpp"
#include "noisyls/rng.hpp"

namespace noisyls {

/// Additive bounded corruption of function values: f(x) = phi(x) + e with
/// |e| <= epsilon_f always.
///
///  - zero: e = 0.
///  - uniform: e ~ U[-epsilon_f, epsilon_f], fresh per call.
///  - deterministic_oscillatory: e = epsilon_f * sin(hash(x)); the same x
///    always yields the same e, modelling discretization-style error.
///  - adversarial_sign: e = +-epsilon_f chosen to oppose acceptance in the
///    sufficient-decrease test (raises the trial value, lowers the incumbent);
///    outside that context the sign comes from the coordinate hash.
enum class NoiseKind { zero, uniform, deterministic_oscillatory, adversarial_sign };

/// Where an evaluation sits inside the acceptance test, so the adversarial
/// kind knows which direction hurts.
enum class EvalRole { generic, armijo_current, armijo_trial };

struct NoiseModel {
    double epsilon_f = 0.0;
    NoiseKind kind = NoiseKind::zero;
};

/// Evaluate f(x) = phi(x) + e(x). Throws std::invalid_argument on non-finite
/// input or dimension mismatch.
double evaluate_noisy(const Problem& problem, const NoiseModel& noise, const Eigen::VectorXd& x,
                      RngStream& stream, EvalRole role = EvalRole::generic);

}  // namespace noisyls
