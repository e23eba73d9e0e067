#include "noisyls/linesearch.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace noisyls {

namespace {

bool stop_event(const StoppingSpec& stop, const Problem& problem, double phi_true,
                double grad_norm_true) {
    switch (stop.mode) {
        case StoppingSpec::Mode::value_gap:
            if (!problem.phi_star) {
                throw std::invalid_argument("value-gap stopping requires a known phi_star");
            }
            return phi_true - *problem.phi_star <= stop.epsilon;
        case StoppingSpec::Mode::grad_norm:
            return grad_norm_true <= stop.epsilon;
        case StoppingSpec::Mode::value_gap_or_grad_floor:
            if (!problem.phi_star) {
                throw std::invalid_argument("value-gap stopping requires a known phi_star");
            }
            return phi_true - *problem.phi_star <= stop.epsilon ||
                   grad_norm_true <= stop.grad_floor;
    }
    throw std::logic_error("stop_event: unreachable");
}

}  // namespace

double StepState::value(double tau) const {
    return tau == 1.0 ? anchor : anchor * std::pow(tau, static_cast<double>(m));
}

bool armijo_accept(double f_trial, double f_cur, double dtg, double alpha, double c1,
                   double epsilon_f) {
    if (!(std::isfinite(f_trial) && std::isfinite(f_cur) && std::isfinite(dtg))) {
        throw std::invalid_argument("armijo_accept: non-finite inputs");
    }
    if (!(alpha > 0.0) || !(c1 > 0.0 && c1 < 1.0) || epsilon_f < 0.0) {
        throw std::invalid_argument("armijo_accept: invalid parameters");
    }
    return f_trial <= f_cur + c1 * alpha * dtg + 2.0 * epsilon_f;
}

Eigen::VectorXd make_direction_with(const Eigen::MatrixXd& H, const DirectionRule& rule,
                                    const Eigen::VectorXd& g) {
    const double gn = g.norm();
    if (gn == 0.0) return Eigen::VectorXd::Zero(g.size());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
    Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(rule.kappa1).cwiseMin(rule.kappa2);
    Eigen::VectorXd d =
        -(eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose() * g);

    // rounding guard: keep ||d|| / ||g|| strictly inside the declared band
    const double ratio = d.norm() / gn;
    if (ratio > rule.kappa2) d *= rule.kappa2 / ratio;
    if (ratio < rule.kappa1) d *= rule.kappa1 / ratio;

    if (d.dot(g) / (d.norm() * gn) > -rule.beta) return -g;
    return d;
}

Eigen::VectorXd make_direction(const DirectionRule& rule, const Eigen::VectorXd& g,
                               RngStream& stream) {
    if (rule.kind == DirectionRule::Kind::steepest) return -g;
    if (g.norm() == 0.0) return Eigen::VectorXd::Zero(g.size());

    const int n = static_cast<int>(g.size());
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) A(i, j) = stream.normal();
    }
    Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
    Eigen::VectorXd lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = stream.uniform(rule.kappa1, rule.kappa2);
    return make_direction_with(Q * lambda.asDiagonal() * Q.transpose(), rule, g);
}

StepOutcome ls_step(const Problem& problem, const NoiseModel& noise, const LineSearchConfig& config,
                    const Eigen::VectorXd& x, const StepState& step, const Eigen::VectorXd& g,
                    const Eigen::VectorXd& d, RngStream& stream) {
    const double alpha = step.value(config.tau);
    const double dtg = d.dot(g);
    const double d_norm = d.norm();

    double f_cur, f_trial;
    Eigen::VectorXd x_trial;
    if (d_norm == 0.0) {
        // identical realization for both sides; the test then holds trivially
        f_cur = f_trial = evaluate_noisy(problem, noise, x, stream, EvalRole::armijo_current);
        x_trial = x;
    } else {
        x_trial = x + alpha * d;
        f_cur = evaluate_noisy(problem, noise, x, stream, EvalRole::armijo_current);
        f_trial = evaluate_noisy(problem, noise, x_trial, stream, EvalRole::armijo_trial);
    }

    const bool accepted = armijo_accept(f_trial, f_cur, dtg, alpha, config.c1, config.epsilon_f);

    StepOutcome out;
    out.record.alpha = alpha;
    out.record.m = step.m;
    out.record.dtg = dtg;
    out.record.g_norm = g.norm();
    out.record.d_norm = d_norm;
    out.record.f_cur = f_cur;
    out.record.f_trial = f_trial;
    out.record.successful = accepted;
    out.record.null_step = d_norm == 0.0;
    if (config.record_vectors) {
        out.record.x = x;
        out.record.g = g;
        out.record.d = d;
    }

    out.step_next = step;
    if (accepted) {
        out.x_next = x_trial;
        const double expanded = config.tau == 1.0 ? alpha : step.anchor * std::pow(config.tau, step.m - 1);
        if (config.alpha_max && expanded > *config.alpha_max) {
            // cap and rebase the grid anchor at alpha_max
            out.step_next.anchor = *config.alpha_max;
            out.step_next.m = 0;
        } else {
            out.step_next.m = step.m - 1;
        }
        if (config.projection_radius) {
            const Eigen::VectorXd center = config.projection_center.size() == problem.dim
                                               ? config.projection_center
                                               : Eigen::VectorXd::Zero(problem.dim);
            const Eigen::VectorXd offset = out.x_next - center;
            const double dist = offset.norm();
            if (dist > *config.projection_radius) {
                out.x_next = center + offset * (*config.projection_radius / dist);
            }
        }
    } else {
        out.x_next = x;
        out.step_next.m = step.m + 1;
    }
    return out;
}

RunRecord run(const Problem& problem, const NoiseModel& noise, const GradientSpec& gradient,
              const LineSearchConfig& config, const StoppingSpec& stop, const Eigen::VectorXd& x0,
              std::uint64_t seed) {
    if (x0.size() != problem.dim) throw std::invalid_argument("run: x0 dimension mismatch");
    if (!(config.tau > 0.0 && config.tau <= 1.0)) {
        throw std::invalid_argument("run: tau must lie in (0, 1]");
    }
    if (gradient.scheme == GradientScheme::synthetic_mixed && !config.alpha_max) {
        throw std::invalid_argument("run: the mixed condition requires alpha_max");
    }
    if (config.alpha_max && config.alpha0 > *config.alpha_max) {
        throw std::invalid_argument("run: alpha0 exceeds alpha_max");
    }

    RngStream stream = RngStream::substream(seed, 0);
    RunRecord record;
    record.seed = seed;

    Eigen::VectorXd x = x0;
    StepState step{config.alpha0, 0};
    long false_count = 0;

    for (long k = 0;; ++k) {
        const double phi_true = problem.phi(x);
        const double grad_norm_true = problem.grad(x).norm();
        if (stop_event(stop, problem, phi_true, grad_norm_true)) {
            record.n_eps = k;
            record.final_phi_true = phi_true;
            record.final_grad_norm_true = grad_norm_true;
            break;
        }
        if (k >= config.max_iter) {
            record.censored = true;
            record.final_phi_true = phi_true;
            record.final_grad_norm_true = grad_norm_true;
            break;
        }

        GradientEstimate est =
            estimate_gradient(problem, noise, x, step.value(config.tau), gradient, stream);
        const Eigen::VectorXd d = make_direction(config.direction, est.g, stream);

        StepOutcome outcome = ls_step(problem, noise, config, x, step, est.g, d, stream);
        outcome.record.k = k;
        outcome.record.accuracy_event = est.accuracy_event;
        outcome.record.phi_true = phi_true;
        outcome.record.grad_norm_true = grad_norm_true;
        if (!est.accuracy_event) ++false_count;
        record.iterations.push_back(std::move(outcome.record));

        x = outcome.x_next;
        step = outcome.step_next;
    }

    record.delta_hat = record.iterations.empty()
                           ? 0.0
                           : static_cast<double>(false_count) / record.iterations.size();
    return record;
}

std::optional<long> stopping_time(const RunRecord& record, const Problem& problem,
                                  const StoppingSpec& stop) {
    for (const auto& it : record.iterations) {
        if (stop_event(stop, problem, it.phi_true, it.grad_norm_true)) return it.k;
    }
    if (stop_event(stop, problem, record.final_phi_true, record.final_grad_norm_true)) {
        return static_cast<long>(record.iterations.size());
    }
    return std::nullopt;
}

}  // namespace noisyls
