#include "noisyls/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace noisyls {

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

Problem make_quadratic_diag(int dim, const std::map<std::string, double>& params) {
    const double mu = get_param(params, "mu", 1.0);
    const double L = get_param(params, "L", 1.0);
    if (mu <= 0.0 || L <= 0.0) throw std::invalid_argument("quadratic_diag: mu and L must be positive");
    if (mu > L) throw std::invalid_argument("quadratic_diag: mu > L is inconsistent");
    if (dim == 1 && mu != L) throw std::invalid_argument("quadratic_diag: dim 1 requires mu == L");

    Eigen::VectorXd lambda(dim);
    for (int i = 0; i < dim; ++i) {
        lambda[i] = dim == 1 ? mu : mu + (L - mu) * static_cast<double>(i) / (dim - 1);
    }

    Problem p;
    p.dim = dim;
    p.name = "quadratic_diag";
    p.phi = [lambda](const Eigen::VectorXd& x) { return 0.5 * lambda.dot(x.cwiseProduct(x)); };
    p.grad = [lambda](const Eigen::VectorXd& x) -> Eigen::VectorXd { return lambda.cwiseProduct(x); };
    p.lipschitz_L = L;
    p.strong_mu = mu;
    p.phi_hat = 0.0;
    p.x_star = Eigen::VectorXd::Zero(dim);
    p.phi_star = 0.0;
    p.convexity = Convexity::strongly_convex;
    p.default_x0 = Eigen::VectorXd::Zero(dim);
    p.default_x0[0] = 1.0;
    // level set at the default start, with unit slack for noise-driven wandering
    const double v0 = 0.5 * lambda[0] + 1.0;
    p.region_D = std::sqrt(2.0 * v0 / mu);
    return p;
}

Problem make_logsumexp(int dim, const std::map<std::string, double>& params) {
    const double s = get_param(params, "scale", 1.0);
    if (s <= 0.0) throw std::invalid_argument("logsumexp: scale must be positive");

    // phi(x) = s * log sum_i (exp(x_i/s) + exp(-x_i/s)); max-shifted for stability.
    auto phi = [s](const Eigen::VectorXd& x) {
        const double m = x.cwiseAbs().maxCoeff() / s;
        double acc = 0.0;
        for (int i = 0; i < x.size(); ++i) {
            acc += std::exp(x[i] / s - m) + std::exp(-x[i] / s - m);
        }
        return s * (m + std::log(acc));
    };
    auto grad = [s](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const double m = x.cwiseAbs().maxCoeff() / s;
        double denom = 0.0;
        Eigen::VectorXd g(x.size());
        for (int i = 0; i < x.size(); ++i) {
            const double a = std::exp(x[i] / s - m);
            const double b = std::exp(-x[i] / s - m);
            denom += a + b;
            g[i] = a - b;
        }
        return g / denom;
    };

    Problem p;
    p.dim = dim;
    p.name = "logsumexp";
    p.phi = phi;
    p.grad = grad;
    p.lipschitz_L = 1.0 / s;  // Hessian norm bound for log-sum-exp with unit directions
    p.phi_hat = s * std::log(2.0 * dim);
    p.x_star = Eigen::VectorXd::Zero(dim);
    p.phi_star = p.phi_hat;
    p.convexity = Convexity::convex;
    p.default_x0 = Eigen::VectorXd::Zero(dim);
    p.default_x0[0] = 2.0;
    if (dim > 1) p.default_x0[1] = 1.0;
    // phi(x) >= |x_i| for every coordinate, so the level set at value v sits
    // inside the ball of radius sqrt(dim)*v; unit slack as above.
    p.region_D = std::sqrt(static_cast<double>(dim)) * (phi(p.default_x0) + 1.0);
    return p;
}

Problem make_rosenbrock(int dim, const std::map<std::string, double>& params) {
    if (dim < 2) throw std::invalid_argument("rosenbrock: dim must be >= 2");
    const double a = get_param(params, "box", 2.048);
    if (a <= 0.0) throw std::invalid_argument("rosenbrock: box must be positive");

    auto phi = [](const Eigen::VectorXd& x) {
        double acc = 0.0;
        for (int i = 0; i + 1 < x.size(); ++i) {
            const double t = x[i + 1] - x[i] * x[i];
            const double u = 1.0 - x[i];
            acc += 100.0 * t * t + u * u;
        }
        return acc;
    };
    auto grad = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
        for (int i = 0; i + 1 < x.size(); ++i) {
            const double t = x[i + 1] - x[i] * x[i];
            g[i] += -400.0 * x[i] * t - 2.0 * (1.0 - x[i]);
            g[i + 1] += 200.0 * t;
        }
        return g;
    };

    // Gershgorin row bound of the Hessian over the box |x_i| <= a.
    const double first_row = 1200.0 * a * a + 400.0 * a + 2.0 + 400.0 * a;
    const double interior_row = dim > 2 ? 1200.0 * a * a + 400.0 * a + 202.0 + 800.0 * a : 0.0;
    const double last_row = 200.0 + 400.0 * a;
    const double L = std::max({first_row, interior_row, last_row});

    Problem p;
    p.dim = dim;
    p.name = "rosenbrock";
    p.phi = phi;
    p.grad = grad;
    p.lipschitz_L = L;
    p.phi_hat = 0.0;
    p.x_star = Eigen::VectorXd::Ones(dim);
    p.phi_star = 0.0;
    p.convexity = Convexity::nonconvex;
    p.default_x0 = Eigen::VectorXd::Ones(dim);
    for (int i = 0; i < dim; i += 2) p.default_x0[i] = -1.2;
    return p;
}

Problem make_raleigh_like(int dim, const std::map<std::string, double>& params) {
    const double a_min = get_param(params, "a_min", 0.5);
    const double a_max = get_param(params, "a_max", 2.0);
    if (a_min <= 0.0 || a_max < a_min) throw std::invalid_argument("raleigh_like: need 0 < a_min <= a_max");

    Eigen::VectorXd spectrum(dim);
    for (int i = 0; i < dim; ++i) {
        spectrum[i] = dim == 1 ? a_max : a_min + (a_max - a_min) * static_cast<double>(i) / (dim - 1);
    }
    const double shift = 0.25 * a_max * a_max;  // lifts the minimum value to 0

    auto phi = [spectrum, shift](const Eigen::VectorXd& x) {
        const double t = x.squaredNorm();
        return 0.25 * t * t - 0.5 * spectrum.dot(x.cwiseProduct(x)) + shift;
    };
    auto grad = [spectrum](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return x.squaredNorm() * x - spectrum.cwiseProduct(x);
    };

    Problem p;
    p.dim = dim;
    p.name = "raleigh_like";
    p.phi = phi;
    p.grad = grad;
    p.phi_hat = 0.0;
    p.x_star = Eigen::VectorXd::Zero(dim);
    (*p.x_star)[dim - 1] = std::sqrt(a_max);
    p.phi_star = 0.0;
    p.convexity = Convexity::nonconvex;
    p.default_x0 = Eigen::VectorXd::Constant(dim, 0.7);
    // ||Hess|| <= 3||x||^2 + a_max; bound ||x||^2 by the level set at the default start.
    const double v0 = phi(p.default_x0) + 1.0;
    const double t_max = a_max + 2.0 * std::sqrt(v0);
    p.lipschitz_L = 3.0 * t_max + a_max;
    return p;
}

}  // namespace

Problem builtin_problem(const std::string& name, int dim,
                        const std::map<std::string, double>& params) {
    if (dim < 1) throw std::invalid_argument("builtin_problem: dim must be positive");
    if (name == "quadratic_diag") return make_quadratic_diag(dim, params);
    if (name == "logsumexp") return make_logsumexp(dim, params);
    if (name == "rosenbrock") return make_rosenbrock(dim, params);
    if (name == "raleigh_like") return make_raleigh_like(dim, params);
    throw std::invalid_argument("builtin_problem: unknown name '" + name +
                                "' (expected quadratic_diag, logsumexp, rosenbrock, raleigh_like)");
}

}  // namespace noisyls
