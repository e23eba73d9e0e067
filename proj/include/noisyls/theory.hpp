#pragma once

#include <functional>
#include <optional>

namespace noisyls {

enum class CaseClass { convex, strongly_convex, nonconvex };
enum class ConditionKind { norm, mixed };
enum class DirectionClass { steepest, general };

/// Everything the complexity engine needs. phi0_gap is phi(x0) - phi_star for
/// the convex cases and phi(x0) - phi_hat for the nonconvex one.
struct TheoryParams {
    double L = 1.0;
    std::optional<double> mu;
    std::optional<double> D;
    double phi0_gap = 1.0;
    double theta = 0.0;
    double delta = 0.0;
    double gamma = 0.5;
    double c1 = 0.5;
    double tau = 0.5;
    double alpha0 = 1.0;
    double epsilon_f = 0.0;
    double epsilon = 1e-2;
    double kappa = 0.0;
    double zeta = 2.0;
    double epsilon_g = 0.0;
    std::optional<double> alpha_max;
    double beta = 1.0;
    double kappa1 = 1.0;
    double kappa2 = 1.0;
    CaseClass case_class = CaseClass::strongly_convex;
    ConditionKind condition = ConditionKind::norm;
    DirectionClass direction = DirectionClass::steepest;
};

/// Largest admissible theta for the configured condition/direction.
double theta_upper_bound(const TheoryParams& params);

/// Step-size threshold below which every accurate estimate yields an accepted
/// step:
///   norm + steepest:  2(1 - 2*theta - c1(1-theta)) / (L(1-theta))
///   norm + general:   (2/(L*kappa2)) * ((1-c1)(1-theta)*beta - theta) / (1-theta)
///   mixed:            min of the steepest value and 2(1-c1)/(L + 2*kappa)
/// Throws std::domain_error when theta is at or beyond its admissible bound.
double alpha_bar(const TheoryParams& params);

/// Squared accuracy contraction that multiplies ||grad phi||^2 in the
/// guaranteed decrease: (1-theta)^2 for the norm condition (times
/// beta*kappa1 under general descent), min{(1-theta)^2, (1+kappa*alpha_max)^-2}
/// for the mixed condition.
double contraction_factor(const TheoryParams& params);

struct ProgressFunctions {
    std::function<double(double)> h;  ///< guaranteed progress as a function of alpha
    double h_at_alpha_bar = 0.0;
    double r = 0.0;      ///< worst-case regress on successful steps
    double z_eps = 0.0;  ///< progress level at which the target accuracy is reached
};

/// Case-specific progress measure:
///   convex:          h(a) = c1*q*a / (4 D^2),        r = 4 eps_f / eps^2
///   strongly convex: h(a) = -log(1 - mu*c1*q*a),     r = log(1 + 4 eps_f / eps)
///   nonconvex:       h(a) = c1*q*a*eps^2,            r = 4 eps_f
/// with q = contraction_factor. h returns +infinity where the strongly convex
/// form leaves its domain (the per-step gain is unbounded there).
ProgressFunctions progress_functions(const TheoryParams& params);

/// Smallest admissible target accuracy (strict lower bound) for the given
/// noise level; solves r(eps) = gamma * h(alpha_bar) for eps, combined with
/// the case-specific side branches (16 eps_f^2 under the square in the convex
/// case; the zeta*eps_g terms for the mixed condition).
double epsilon_floor(const TheoryParams& params);

/// The per-case constant of the complexity statements: 4 D^2/(c1 Q) (convex),
/// 1 - 2 mu c1 Q (strongly convex, must land in (0,1)), gap/(c1 Q)
/// (nonconvex), where Q is the condition/direction decrease denominator.
double case_constant(const TheoryParams& params);

/// Alternative strongly convex constant 1 - 4 mu c1 (1-c1) / L quoted in a
/// theta = 0 simplification; differs from case_constant by a factor 2 in the
/// curvature term. Kept for side-by-side comparison only.
double strongly_convex_remark_constant(const TheoryParams& params);

/// Exact integer c with alpha_bar = tau^c * alpha0 (c >= 0). Throws when
/// alpha0 is not a power-of-tau multiple of alpha_bar, or when tau = 1 and
/// alpha0 != alpha_bar.
int tau_grid_exponent(const TheoryParams& params);

/// The master expected-stopping-time bound
///   2(1-delta)/((1-2delta)^2 - gamma) * [2 z_eps / h_bar + (1-gamma) * c]
/// shared by the abstract process and all case instantiations. Requires
/// delta < 1/2 - sqrt(gamma)/2.
double master_bound(double delta, double gamma, double z_eps, double h_at_alpha_bar,
                    int grid_exponent);

/// Case bound assembled from the pieces above. Validates the probability
/// hypothesis, epsilon > epsilon_floor, epsilon < phi0_gap for the value-gap
/// cases, and the step-size grid.
double expected_bound(const TheoryParams& params);

}  // namespace noisyls
