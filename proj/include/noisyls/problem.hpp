#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace noisyls {

enum class Convexity { convex, strongly_convex, nonconvex };

/// A smooth test objective together with the constants used by the analysis.
///
/// `phi` and `grad` are the exact function and gradient; bounded noise is
/// layered on top by NoiseModel. `lipschitz_L` must be a valid Lipschitz
/// constant of the gradient on the region the iterates visit (global for the
/// convex problems, a box/level-set bound for the nonconvex ones; see the
/// builtin constructors).
struct Problem {
    int dim = 0;
    std::function<double(const Eigen::VectorXd&)> phi;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
    double lipschitz_L = 0.0;
    std::optional<double> strong_mu;
    double phi_hat = 0.0;  ///< global lower bound on phi
    std::optional<Eigen::VectorXd> x_star;
    std::optional<double> phi_star;
    std::optional<double> region_D;  ///< radius bound ||x - x*|| used by the convex analysis
    Convexity convexity = Convexity::nonconvex;
    std::string name;
    Eigen::VectorXd default_x0;
};

/// Construct one of the builtin test problems.
///
/// Names and parameters:
///  - "quadratic_diag": 0.5 * sum(lambda_i x_i^2), spectrum linearly spaced in
///    [mu, L] (params "mu", "L", defaults 1). Strongly convex, x* = 0.
///  - "logsumexp": log of sum of exp(+-x_i / s) over all coordinates (param
///    "scale" = s, default 1). Convex, coercive, x* = 0, L = 1/s.
///  - "rosenbrock": chained Rosenbrock; constants valid on the box
///    |x_i| <= "box" (default 2.048). Nonconvex, x* = (1,...,1).
///  - "raleigh_like": 0.25*||x||^4 - 0.5*x'Ax + 0.25*amax^2 with A diagonal,
///    spectrum in ["a_min","a_max"]; nonconvex quartic with a stationary
///    point at the origin, minimum value 0.
///
/// Throws std::invalid_argument for unknown names or inconsistent parameters.
Problem builtin_problem(const std::string& name, int dim,
                        const std::map<std::string, double>& params = {});

}  // namespace noisyls
