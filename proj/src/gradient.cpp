#include "noisyls/gradient.hpp"

#include <cmath>
#include <stdexcept>

namespace noisyls {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

// Shrinks u toward zero until g = grad + u passes the condition; guards the
// exact accuracy_event bookkeeping against last-ulp rounding of grad + u.
Eigen::VectorXd enforce_condition(const Eigen::VectorXd& grad, Eigen::VectorXd u,
                                  const AccuracyCondition& condition) {
    Eigen::VectorXd g = grad + u;
    int guard = 0;
    while (!check_condition(g, grad, condition) && guard++ < 128) {
        u *= 0.5;
        g = grad + u;
    }
    return g;
}

}  // namespace

bool check_condition(const Eigen::VectorXd& g, const Eigen::VectorXd& grad_true,
                     const AccuracyCondition& condition) {
    require(g.size() == grad_true.size(), "check_condition: dimension mismatch");
    const double err = (g - grad_true).norm();
    switch (condition.kind) {
        case AccuracyCondition::Kind::norm:
            return err <= condition.theta * grad_true.norm();
        case AccuracyCondition::Kind::mixed:
            return err <= std::max(condition.zeta_eps_g, condition.kappa_alpha * g.norm());
    }
    return false;
}

GradientEstimate estimate_synthetic_norm(const Problem& problem, const Eigen::VectorXd& x,
                                         double theta, double delta, RngStream& stream) {
    require(theta >= 0.0 && theta < 1.0, "estimate_synthetic_norm: theta must lie in [0, 1)");
    require(delta >= 0.0 && delta < 0.5, "estimate_synthetic_norm: delta must lie in [0, 1/2)");

    const Eigen::VectorXd grad = problem.grad(x);
    const double gn = grad.norm();
    const bool adversarial = stream.bernoulli(delta);
    const auto condition = AccuracyCondition::norm(theta);

    GradientEstimate est;
    est.scheme_cost = 0;
    if (gn == 0.0) {
        est.g = Eigen::VectorXd::Zero(problem.dim);
        est.accuracy_event = true;
        return est;
    }
    if (adversarial) {
        // error exactly 2||grad||, pointed so -g ascends
        est.g = -grad;
    } else {
        est.g = enforce_condition(grad, stream.in_ball(problem.dim, theta * gn), condition);
    }
    est.accuracy_event = check_condition(est.g, grad, condition);
    return est;
}

GradientEstimate estimate_forward_difference(const Problem& problem, const NoiseModel& noise,
                                             const Eigen::VectorXd& x, double h, RngStream& stream,
                                             double theta_for_event, bool central) {
    require(h > 0.0, "estimate_forward_difference: h must be positive");

    const int n = problem.dim;
    GradientEstimate est;
    est.g = Eigen::VectorXd(n);
    if (central) {
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            est.g[i] = (evaluate_noisy(problem, noise, xp, stream) -
                        evaluate_noisy(problem, noise, xm, stream)) /
                       (2.0 * h);
        }
        est.scheme_cost = 2 * n;
    } else {
        const double f0 = evaluate_noisy(problem, noise, x, stream);
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd xp = x;
            xp[i] += h;
            est.g[i] = (evaluate_noisy(problem, noise, xp, stream) - f0) / h;
        }
        est.scheme_cost = n + 1;
    }
    est.accuracy_event =
        check_condition(est.g, problem.grad(x), AccuracyCondition::norm(theta_for_event));
    return est;
}

GradientEstimate estimate_smoothing(const Problem& problem, const NoiseModel& noise,
                                    const Eigen::VectorXd& x, double sigma, int num_samples,
                                    SmoothingDistribution dist, RngStream& stream,
                                    const AccuracyCondition& event_condition) {
    require(sigma > 0.0, "estimate_smoothing: sigma must be positive");
    require(num_samples >= 1, "estimate_smoothing: num_samples must be >= 1");

    const int n = problem.dim;
    const double w = dist == SmoothingDistribution::gaussian ? 1.0 : static_cast<double>(n);
    const double f0 = evaluate_noisy(problem, noise, x, stream);

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    for (int s = 0; s < num_samples; ++s) {
        const Eigen::VectorXd u =
            dist == SmoothingDistribution::gaussian ? stream.normal_vector(n) : stream.unit_sphere(n);
        const double fs = evaluate_noisy(problem, noise, x + sigma * u, stream);
        acc += ((fs - f0) / sigma) * w * u;
    }

    GradientEstimate est;
    est.g = acc / static_cast<double>(num_samples);
    est.scheme_cost = num_samples + 1;
    est.accuracy_event = check_condition(est.g, problem.grad(x), event_condition);
    return est;
}

GradientEstimate estimate_synthetic_mixed(const Problem& problem, const Eigen::VectorXd& x,
                                          double alpha, const GradientSpec& spec,
                                          RngStream& stream) {
    require(spec.zeta > 1.0, "estimate_synthetic_mixed: zeta must exceed 1");
    require(spec.kappa >= 0.0, "estimate_synthetic_mixed: kappa must be nonnegative");
    require(spec.epsilon_g >= 0.0, "estimate_synthetic_mixed: epsilon_g must be nonnegative");
    require(spec.delta >= 0.0 && spec.delta < 0.5,
            "estimate_synthetic_mixed: delta must lie in [0, 1/2)");
    require(alpha > 0.0, "estimate_synthetic_mixed: alpha must be positive");

    const double zeg = spec.zeta * spec.epsilon_g;
    const double c = spec.kappa * alpha;
    if (c >= 1.0 && zeg == 0.0) {
        throw std::invalid_argument(
            "estimate_synthetic_mixed: kappa*alpha >= 1 with zeta*epsilon_g = 0 leaves no "
            "constructible accuracy event");
    }

    const Eigen::VectorXd grad = problem.grad(x);
    const double gn = grad.norm();
    const bool adversarial = stream.bernoulli(spec.delta);
    const auto condition = AccuracyCondition::mixed(zeg, c);

    GradientEstimate est;
    est.scheme_cost = 0;
    if (gn == 0.0) {
        est.g = Eigen::VectorXd::Zero(problem.dim);
        est.accuracy_event = true;
        return est;
    }

    if (!adversarial) {
        // Draw a direction, then the largest radius along it that keeps the
        // implicit inequality t <= c*||grad + t v|| satisfiable (positive root
        // of t^2 (1-c^2) - 2 c^2 (grad.v) t - c^2 ||grad||^2 = 0), or the bias
        // branch, whichever is larger.
        const Eigen::VectorXd v = stream.unit_sphere(problem.dim);
        double t_kappa = 0.0;
        if (c > 0.0 && c < 1.0) {
            const double b = grad.dot(v);
            t_kappa = (c * c * b + c * std::sqrt(c * c * b * b + (1.0 - c * c) * gn * gn)) /
                      (1.0 - c * c);
        }
        const double t_max = std::max(zeg, t_kappa);
        const double t = t_max * std::pow(stream.uniform01(), 1.0 / problem.dim);
        est.g = enforce_condition(grad, t * v, condition);
    } else {
        // Oppose descent with an error exceeding both branches. With c < 1 a
        // reversed gradient of suitable scale always violates; past c >= 1 the
        // construction degrades and the measured event is what counts.
        double s;
        if (c < 1.0) {
            s = std::max(1.0, 2.0 * zeg / gn);
        } else {
            s = 0.5 * std::min(1.0, 1.0 / (c - 1.0 + 1e-300));
        }
        est.g = -s * grad;
    }
    est.accuracy_event = check_condition(est.g, grad, condition);
    return est;
}

GradientEstimate estimate_gradient(const Problem& problem, const NoiseModel& noise,
                                   const Eigen::VectorXd& x, double alpha,
                                   const GradientSpec& spec, RngStream& stream) {
    switch (spec.scheme) {
        case GradientScheme::synthetic_norm:
            return estimate_synthetic_norm(problem, x, spec.theta, spec.delta, stream);
        case GradientScheme::forward_difference:
            return estimate_forward_difference(problem, noise, x, spec.fd_step_h, stream,
                                               spec.theta, spec.central_difference);
        case GradientScheme::gaussian_smoothing:
            return estimate_smoothing(problem, noise, x, spec.smoothing_sigma, spec.num_samples,
                                      SmoothingDistribution::gaussian, stream,
                                      AccuracyCondition::norm(spec.theta));
        case GradientScheme::sphere_smoothing:
            return estimate_smoothing(problem, noise, x, spec.smoothing_sigma, spec.num_samples,
                                      SmoothingDistribution::sphere, stream,
                                      AccuracyCondition::norm(spec.theta));
        case GradientScheme::synthetic_mixed:
            return estimate_synthetic_mixed(problem, x, alpha, spec, stream);
    }
    throw std::logic_error("estimate_gradient: unreachable");
}

}  // namespace noisyls
