#pragma once

#include <Eigen/Dense>

#include "noisyls/noise.hpp"
#include "noisyls/problem.hpp"
#include "noisyls/rng.hpp"

namespace noisyls {

enum class GradientScheme {
    synthetic_norm,      ///< exact gradient perturbed to satisfy/violate the norm condition
    forward_difference,  ///< finite differences on noisy values (n+1 evaluations)
    gaussian_smoothing,
    sphere_smoothing,
    synthetic_mixed  ///< perturbed to satisfy/violate the mixed condition
};

struct GradientSpec {
    GradientScheme scheme = GradientScheme::synthetic_norm;
    double theta = 0.0;  ///< relative accuracy of the norm condition
    double delta = 0.0;  ///< probability that a synthetic draw violates its condition
    double fd_step_h = 1e-6;
    bool central_difference = false;
    double smoothing_sigma = 1e-3;
    int num_samples = 1;
    // mixed-condition constants
    double kappa = 0.0;
    double zeta = 2.0;
    double epsilon_g = 0.0;
};

struct GradientEstimate {
    Eigen::VectorXd g;
    bool accuracy_event = false;  ///< realization of the per-iteration accuracy indicator
    int scheme_cost = 0;          ///< noisy-oracle calls consumed
};

/// The gradient accuracy test:
///  - norm:  ||g - grad_true|| <= theta * ||grad_true||
///  - mixed: ||g - grad_true|| <= max(zeta_eps_g, kappa_alpha * ||g||)
/// Evaluated with plain floating-point comparisons, no tolerance.
struct AccuracyCondition {
    enum class Kind { norm, mixed };
    Kind kind = Kind::norm;
    double theta = 0.0;
    double zeta_eps_g = 0.0;
    double kappa_alpha = 0.0;

    static AccuracyCondition norm(double theta) { return {Kind::norm, theta, 0.0, 0.0}; }
    static AccuracyCondition mixed(double zeta_eps_g, double kappa_alpha) {
        return {Kind::mixed, 0.0, zeta_eps_g, kappa_alpha};
    }
};

bool check_condition(const Eigen::VectorXd& g, const Eigen::VectorXd& grad_true,
                     const AccuracyCondition& condition);

/// Exact gradient plus a perturbation drawn inside the norm-condition ball
/// with probability 1-delta; with probability delta an adversarial estimate
/// pointing against descent with error 2*||grad||. The stored accuracy_event
/// always equals a recomputation via check_condition.
GradientEstimate estimate_synthetic_norm(const Problem& problem, const Eigen::VectorXd& x,
                                         double theta, double delta, RngStream& stream);

/// Forward differences with a shared base value (n+1 calls), or central
/// differences (2n calls). accuracy_event is measured against the norm
/// condition with `theta_for_event`.
GradientEstimate estimate_forward_difference(const Problem& problem, const NoiseModel& noise,
                                             const Eigen::VectorXd& x, double h, RngStream& stream,
                                             double theta_for_event = 0.0, bool central = false);

enum class SmoothingDistribution { gaussian, sphere };

/// Single-point smoothing estimator
///   g = (1/N) sum_i [(f(x + sigma u_i) - f(x)) / sigma] * w * u_i
/// with u_i standard normal (w = 1) or uniform on the unit sphere (w = n).
/// The base value f(x) is evaluated once and shared (N+1 calls).
/// accuracy_event is measured, not constructed.
GradientEstimate estimate_smoothing(const Problem& problem, const NoiseModel& noise,
                                    const Eigen::VectorXd& x, double sigma, int num_samples,
                                    SmoothingDistribution dist, RngStream& stream,
                                    const AccuracyCondition& event_condition);

/// Exact gradient perturbed to satisfy the mixed condition with probability
/// 1-delta. The admissible perturbation radius along a direction v solves the
/// implicit inequality t <= kappa*alpha*||grad + t v|| (plus the zeta*eps_g
/// branch); aligned with the gradient it reaches
/// kappa*alpha*||grad|| / (1 - kappa*alpha) when kappa*alpha < 1.
/// Throws if kappa*alpha >= 1 with zeta*eps_g = 0 (nothing constructible).
GradientEstimate estimate_synthetic_mixed(const Problem& problem, const Eigen::VectorXd& x,
                                          double alpha, const GradientSpec& spec,
                                          RngStream& stream);

/// Dispatch on spec.scheme. `alpha` is the current step-size parameter (used
/// by the mixed condition only).
GradientEstimate estimate_gradient(const Problem& problem, const NoiseModel& noise,
                                   const Eigen::VectorXd& x, double alpha,
                                   const GradientSpec& spec, RngStream& stream);

}  // namespace noisyls
