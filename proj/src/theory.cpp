#include "noisyls/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace noisyls {

namespace {

void check(bool ok, const char* message) {
    if (!ok) throw std::domain_error(message);
}

void validate_common(const TheoryParams& p) {
    check(p.L > 0.0, "L must be positive");
    check(p.c1 > 0.0 && p.c1 < 1.0, "c1 must lie in (0, 1)");
    check(p.theta >= 0.0, "theta must be nonnegative");
    check(p.epsilon_f >= 0.0, "epsilon_f must be nonnegative");
    if (p.direction == DirectionClass::general) {
        check(p.beta > 0.0, "beta must be positive");
        check(p.kappa1 > 0.0 && p.kappa2 >= p.kappa1, "need 0 < kappa1 <= kappa2");
        check(p.condition == ConditionKind::norm,
              "mixed condition with a general descent direction is not supported");
    }
    if (p.condition == ConditionKind::mixed) {
        check(p.kappa >= 0.0, "kappa must be nonnegative");
        check(p.zeta > 1.0, "zeta must exceed 1");
        check(p.epsilon_g >= 0.0, "epsilon_g must be nonnegative");
        check(p.alpha_max.has_value() && *p.alpha_max > 0.0,
              "mixed condition requires a positive alpha_max");
    }
}

// Decrease denominator Q of the case constants: alpha_bar_branch *
// contraction_branch / 2, with the mixed-condition min taken over whole
// branch products (contrast decrease_scale below).
double case_denominator(const TheoryParams& p) {
    const double t = p.theta;
    switch (p.condition) {
        case ConditionKind::norm:
            if (p.direction == DirectionClass::steepest) {
                return (1.0 - t) * (1.0 - 2.0 * t - p.c1 * (1.0 - t)) / p.L;
            }
            return p.beta * p.kappa1 * (1.0 - t) * ((1.0 - p.c1) * (1.0 - t) * p.beta - t) /
                   (p.L * p.kappa2);
        case ConditionKind::mixed: {
            const double first = (1.0 - t) * (1.0 - 2.0 * t - p.c1 * (1.0 - t)) / p.L;
            const double cap = 1.0 + p.kappa * *p.alpha_max;
            const double second = (1.0 - p.c1) / ((p.L + 2.0 * p.kappa) * cap * cap);
            return std::min(first, second);
        }
    }
    throw std::logic_error("case_denominator: unreachable");
}

// Consistent decrease scale S = contraction_factor * alpha_bar / 2. Identical
// to case_denominator for the norm condition; for the mixed condition it
// takes the min over the alpha and contraction branches separately, which is
// what the per-step decrease actually guarantees.
double decrease_scale(const TheoryParams& p) {
    return 0.5 * contraction_factor(p) * alpha_bar(p);
}

}  // namespace

double theta_upper_bound(const TheoryParams& p) {
    if (p.direction == DirectionClass::general) {
        const double b = (1.0 - p.c1) * p.beta;
        return b / (1.0 + b);
    }
    return (1.0 - p.c1) / (2.0 - p.c1);
}

double alpha_bar(const TheoryParams& p) {
    validate_common(p);
    check(p.theta < theta_upper_bound(p),
          "theta is at or beyond the admissible boundary for this configuration");
    const double t = p.theta;
    double abar = 0.0;
    if (p.direction == DirectionClass::general) {
        abar = (2.0 / (p.L * p.kappa2)) * ((1.0 - p.c1) * (1.0 - t) * p.beta - t) / (1.0 - t);
    } else {
        abar = 2.0 * (1.0 - 2.0 * t - p.c1 * (1.0 - t)) / (p.L * (1.0 - t));
    }
    if (p.condition == ConditionKind::mixed) {
        abar = std::min(abar, 2.0 * (1.0 - p.c1) / (p.L + 2.0 * p.kappa));
    }
    check(abar > 0.0, "step-size threshold is not positive under these parameters");
    return abar;
}

double contraction_factor(const TheoryParams& p) {
    const double base = (1.0 - p.theta) * (1.0 - p.theta);
    switch (p.condition) {
        case ConditionKind::norm:
            return p.direction == DirectionClass::general ? p.beta * p.kappa1 * base : base;
        case ConditionKind::mixed: {
            check(p.alpha_max.has_value() && *p.alpha_max > 0.0,
                  "mixed condition requires a positive alpha_max");
            const double cap = 1.0 + p.kappa * *p.alpha_max;
            return std::min(base, 1.0 / (cap * cap));
        }
    }
    throw std::logic_error("contraction_factor: unreachable");
}

ProgressFunctions progress_functions(const TheoryParams& p) {
    validate_common(p);
    check(p.epsilon > 0.0, "epsilon must be positive");
    const double q = contraction_factor(p);
    const double c1 = p.c1;

    ProgressFunctions out;
    switch (p.case_class) {
        case CaseClass::convex: {
            check(p.D.has_value() && *p.D > 0.0, "convex case requires the region radius D");
            const double D2 = *p.D * *p.D;
            out.h = [c1, q, D2](double a) { return c1 * q * a / (4.0 * D2); };
            out.r = 4.0 * p.epsilon_f / (p.epsilon * p.epsilon);
            out.z_eps = 1.0 / p.epsilon - 1.0 / p.phi0_gap;
            break;
        }
        case CaseClass::strongly_convex: {
            check(p.mu.has_value() && *p.mu > 0.0, "strongly convex case requires mu");
            const double mu = *p.mu;
            out.h = [c1, q, mu](double a) {
                const double arg = 1.0 - mu * c1 * q * a;
                if (arg <= 0.0) return std::numeric_limits<double>::infinity();
                return -std::log(arg);
            };
            out.r = std::log1p(4.0 * p.epsilon_f / p.epsilon);
            out.z_eps = std::log(p.phi0_gap / p.epsilon);
            break;
        }
        case CaseClass::nonconvex: {
            const double e2 = p.epsilon * p.epsilon;
            out.h = [c1, q, e2](double a) { return c1 * q * a * e2; };
            out.r = 4.0 * p.epsilon_f;
            out.z_eps = p.phi0_gap;
            break;
        }
    }
    out.h_at_alpha_bar = out.h(alpha_bar(p));
    return out;
}

double epsilon_floor(const TheoryParams& p) {
    validate_common(p);
    check(p.gamma > 0.0 && p.gamma < 1.0, "gamma must lie in (0, 1)");
    const double S = decrease_scale(p);
    const double zeg = p.zeta * p.epsilon_g;
    const bool mixed = p.condition == ConditionKind::mixed;
    if (mixed && p.epsilon_g > 0.0) {
        check(p.theta > 0.0, "mixed condition with epsilon_g > 0 requires theta > 0");
    }

    switch (p.case_class) {
        case CaseClass::convex: {
            check(p.D.has_value() && *p.D > 0.0, "convex case requires the region radius D");
            const double main = 8.0 * p.epsilon_f * *p.D * *p.D / (p.gamma * p.c1 * S);
            return std::sqrt(std::max(main, 16.0 * p.epsilon_f * p.epsilon_f));
        }
        case CaseClass::strongly_convex: {
            check(p.mu.has_value() && *p.mu > 0.0, "strongly convex case requires mu");
            const double M = 1.0 - 2.0 * *p.mu * p.c1 * S;
            check(M > 0.0 && M < 1.0, "strongly convex contraction constant falls outside (0, 1)");
            const double main =
                p.epsilon_f == 0.0 ? 0.0 : 4.0 * p.epsilon_f / (std::pow(M, -p.gamma) - 1.0);
            const double bias =
                mixed && zeg > 0.0 ? zeg * zeg / (2.0 * *p.mu * p.theta * p.theta) : 0.0;
            return std::max(main, bias);
        }
        case CaseClass::nonconvex: {
            const double main = 2.0 * p.epsilon_f / (p.gamma * p.c1 * S);
            const double bias = mixed && zeg > 0.0 ? (zeg / p.theta) * (zeg / p.theta) : 0.0;
            return std::sqrt(std::max(main, bias));
        }
    }
    throw std::logic_error("epsilon_floor: unreachable");
}

double case_constant(const TheoryParams& p) {
    validate_common(p);
    check(p.theta < theta_upper_bound(p),
          "theta is at or beyond the admissible boundary for this configuration");
    const double Q = case_denominator(p);
    switch (p.case_class) {
        case CaseClass::convex:
            check(p.D.has_value() && *p.D > 0.0, "convex case requires the region radius D");
            return 4.0 * *p.D * *p.D / (p.c1 * Q);
        case CaseClass::strongly_convex: {
            check(p.mu.has_value() && *p.mu > 0.0, "strongly convex case requires mu");
            const double M = 1.0 - 2.0 * *p.mu * p.c1 * Q;
            check(M > 0.0 && M < 1.0,
                  "strongly convex contraction constant falls outside (0, 1); step and curvature "
                  "constants are inconsistent");
            return M;
        }
        case CaseClass::nonconvex:
            check(p.phi0_gap > 0.0, "nonconvex case requires a positive initial gap");
            return p.phi0_gap / (p.c1 * Q);
    }
    throw std::logic_error("case_constant: unreachable");
}

double strongly_convex_remark_constant(const TheoryParams& p) {
    check(p.mu.has_value() && *p.mu > 0.0, "strongly convex case requires mu");
    return 1.0 - 4.0 * *p.mu * p.c1 * (1.0 - p.c1) / p.L;
}

int tau_grid_exponent(const TheoryParams& p) {
    check(p.tau > 0.0 && p.tau <= 1.0, "tau must lie in (0, 1]");
    check(p.alpha0 > 0.0, "alpha0 must be positive");
    const double abar = alpha_bar(p);
    if (p.tau == 1.0) {
        check(std::abs(p.alpha0 - abar) <= 1e-12 * abar,
              "fixed-step mode (tau = 1) requires alpha0 = alpha_bar for the bound");
        return 0;
    }
    const double c_real = std::log(abar / p.alpha0) / std::log(p.tau);
    const long long c = std::llround(c_real);
    check(c >= 0, "alpha0 must be at least alpha_bar on the tau grid");
    check(std::abs(p.alpha0 * std::pow(p.tau, static_cast<double>(c)) - abar) <= 1e-9 * abar,
          "alpha0 must be alpha_bar times an integer power of tau");
    return static_cast<int>(c);
}

double master_bound(double delta, double gamma, double z_eps, double h_at_alpha_bar,
                    int grid_exponent) {
    check(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
    check(delta >= 0.0 && delta < 0.5 - 0.5 * std::sqrt(gamma),
          "accuracy probability hypothesis violated: need delta < 1/2 - sqrt(gamma)/2");
    check(h_at_alpha_bar > 0.0, "progress at the step threshold must be positive");
    check(z_eps > 0.0, "progress target must be positive");
    check(grid_exponent >= 0, "grid exponent must be nonnegative");
    const double one_minus_2d = 1.0 - 2.0 * delta;
    const double coeff = 2.0 * (1.0 - delta) / (one_minus_2d * one_minus_2d - gamma);
    return coeff * (2.0 * z_eps / h_at_alpha_bar + (1.0 - gamma) * grid_exponent);
}

double expected_bound(const TheoryParams& p) {
    const double floor = epsilon_floor(p);
    check(p.epsilon > floor, "epsilon is at or below the neighborhood-of-convergence floor");
    if (p.case_class != CaseClass::nonconvex) {
        check(p.epsilon < p.phi0_gap, "epsilon must be below the initial optimality gap");
    }
    const ProgressFunctions pf = progress_functions(p);
    const int c = tau_grid_exponent(p);
    return master_bound(p.delta, p.gamma, pf.z_eps, pf.h_at_alpha_bar, c);
}

}  // namespace noisyls
