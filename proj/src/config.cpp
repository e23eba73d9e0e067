#include "noisyls/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace noisyls {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ConfigError("config field '" + field + "': " + message);
}

const json& require_field(const json& obj, const std::string& key, const std::string& context) {
    if (!obj.contains(key)) fail(context + "." + key, "missing");
    return obj.at(key);
}

double number_at(const json& obj, const std::string& key, const std::string& context,
                 std::optional<double> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        fail(context + "." + key, "missing");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) fail(context + "." + key, "expected a number");
    return v.get<double>();
}

NoiseKind parse_noise_kind(const std::string& s) {
    if (s == "zero") return NoiseKind::zero;
    if (s == "uniform") return NoiseKind::uniform;
    if (s == "deterministic_oscillatory") return NoiseKind::deterministic_oscillatory;
    if (s == "adversarial_sign") return NoiseKind::adversarial_sign;
    fail("noise.kind", "unknown value '" + s + "'");
}

GradientScheme parse_scheme(const std::string& s) {
    if (s == "synthetic_norm") return GradientScheme::synthetic_norm;
    if (s == "forward_difference") return GradientScheme::forward_difference;
    if (s == "gaussian_smoothing") return GradientScheme::gaussian_smoothing;
    if (s == "sphere_smoothing") return GradientScheme::sphere_smoothing;
    if (s == "synthetic_mixed") return GradientScheme::synthetic_mixed;
    fail("gradient.scheme", "unknown value '" + s + "'");
}

StoppingSpec::Mode parse_stop_mode(const std::string& s) {
    if (s == "value_gap") return StoppingSpec::Mode::value_gap;
    if (s == "grad_norm") return StoppingSpec::Mode::grad_norm;
    if (s == "value_gap_or_grad_floor") return StoppingSpec::Mode::value_gap_or_grad_floor;
    fail("stopping.mode", "unknown value '" + s + "'");
}

CaseClass parse_case(const std::string& s) {
    if (s == "convex") return CaseClass::convex;
    if (s == "strongly_convex") return CaseClass::strongly_convex;
    if (s == "nonconvex") return CaseClass::nonconvex;
    fail("theory.case", "unknown value '" + s + "'");
}

CaseClass case_from_convexity(Convexity c) {
    switch (c) {
        case Convexity::convex: return CaseClass::convex;
        case Convexity::strongly_convex: return CaseClass::strongly_convex;
        case Convexity::nonconvex: return CaseClass::nonconvex;
    }
    return CaseClass::nonconvex;
}

// "alpha_bar", a number, or {"tau_exponent_from_alpha_bar": k} meaning
// alpha_bar * tau^k (k <= 0 starts at or above the threshold).
double resolve_alpha_like(const json& v, const std::string& field, double abar, double tau) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        if (v.get<std::string>() == "alpha_bar") return abar;
        fail(field, "expected a number, \"alpha_bar\", or an exponent object");
    }
    if (v.is_object() && v.contains("tau_exponent_from_alpha_bar")) {
        const double k = v.at("tau_exponent_from_alpha_bar").get<double>();
        return abar * std::pow(tau, k);
    }
    fail(field, "expected a number, \"alpha_bar\", or an exponent object");
}

}  // namespace

bool is_process_config(const json& config) { return config.contains("process"); }

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json config;
    try {
        in >> config;
    } catch (const std::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return config;
}

std::uint64_t config_fingerprint(const json& config) {
    const std::string s = config.dump();
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001B3ull;
    }
    return h;
}

void set_config_key(json& config, const std::string& dotted_key, const json& value) {
    json* node = &config;
    std::stringstream ss(dotted_key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    if (parts.empty()) throw ConfigError("empty sweep key");
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->is_object() || !node->contains(parts[i])) {
            throw ConfigError("sweep key '" + dotted_key + "' does not exist in the config");
        }
        node = &node->at(parts[i]);
    }
    if (!node->is_object() || !node->contains(parts.back())) {
        throw ConfigError("sweep key '" + dotted_key + "' does not exist in the config");
    }
    (*node)[parts.back()] = value;
}

ResolvedExperiment resolve_experiment(const json& config) {
    ResolvedExperiment out;
    out.raw = config;
    out.config_hash = config_fingerprint(config);

    // problem
    const json& jp = require_field(config, "problem", "");
    const std::string pname = require_field(jp, "name", "problem").get<std::string>();
    const int dim = static_cast<int>(number_at(jp, "dim", "problem"));
    std::map<std::string, double> pparams;
    if (jp.contains("params")) {
        for (auto it = jp.at("params").begin(); it != jp.at("params").end(); ++it) {
            pparams[it.key()] = it.value().get<double>();
        }
    }
    try {
        out.problem = builtin_problem(pname, dim, pparams);
    } catch (const std::invalid_argument& e) {
        fail("problem", e.what());
    }

    if (jp.contains("x0")) {
        const auto& jx = jp.at("x0");
        if (!jx.is_array() || static_cast<int>(jx.size()) != dim) {
            fail("problem.x0", "expected an array of length dim");
        }
        out.x0 = Eigen::VectorXd(dim);
        for (int i = 0; i < dim; ++i) out.x0[i] = jx.at(i).get<double>();
    } else {
        out.x0 = out.problem.default_x0;
    }

    // noise
    const json& jn = require_field(config, "noise", "");
    out.noise.kind = parse_noise_kind(require_field(jn, "kind", "noise").get<std::string>());
    out.noise.epsilon_f = number_at(jn, "epsilon_f", "noise", 0.0);
    if (out.noise.epsilon_f < 0.0) fail("noise.epsilon_f", "must be nonnegative");

    // gradient
    const json& jg = require_field(config, "gradient", "");
    out.gradient.scheme = parse_scheme(require_field(jg, "scheme", "gradient").get<std::string>());
    out.gradient.theta = number_at(jg, "theta", "gradient", 0.0);
    out.gradient.delta = number_at(jg, "delta", "gradient", 0.0);
    out.gradient.fd_step_h = number_at(jg, "fd_step_h", "gradient", 1e-6);
    out.gradient.central_difference = jg.value("central", false);
    out.gradient.smoothing_sigma = number_at(jg, "smoothing_sigma", "gradient", 1e-3);
    out.gradient.num_samples = static_cast<int>(number_at(jg, "num_samples", "gradient", 1.0));
    out.gradient.kappa = number_at(jg, "kappa", "gradient", 0.0);
    out.gradient.zeta = number_at(jg, "zeta", "gradient", 2.0);
    out.gradient.epsilon_g = number_at(jg, "epsilon_g", "gradient", 0.0);

    // linesearch
    const json& jl = require_field(config, "linesearch", "");
    out.linesearch.c1 = number_at(jl, "c1", "linesearch", 0.5);
    out.linesearch.tau = number_at(jl, "tau", "linesearch", 0.5);
    out.linesearch.epsilon_f = out.noise.epsilon_f;
    out.linesearch.max_iter = static_cast<long>(number_at(jl, "max_iter", "linesearch", 1e6));
    if (jl.contains("direction")) {
        const json& jd = jl.at("direction");
        const std::string kind = jd.value("kind", std::string("steepest"));
        if (kind == "steepest") {
            out.linesearch.direction.kind = DirectionRule::Kind::steepest;
        } else if (kind == "scaled") {
            out.linesearch.direction.kind = DirectionRule::Kind::scaled;
            out.linesearch.direction.kappa1 = number_at(jd, "kappa1", "linesearch.direction", 1.0);
            out.linesearch.direction.kappa2 = number_at(jd, "kappa2", "linesearch.direction", 1.0);
            out.linesearch.direction.beta =
                number_at(jd, "beta", "linesearch.direction",
                          out.linesearch.direction.kappa1 / out.linesearch.direction.kappa2);
        } else {
            fail("linesearch.direction.kind", "unknown value '" + kind + "'");
        }
    }
    if (!(out.linesearch.tau > 0.0 && out.linesearch.tau <= 1.0)) {
        fail("linesearch.tau", "must lie in (0, 1]");
    }

    // theory block (optional but needed for placeholder resolution)
    const bool has_theory = config.contains("theory");
    bool compare_bound = false;
    TheoryParams tp;
    if (has_theory) {
        const json& jt = config.at("theory");
        compare_bound = jt.value("compare_bound", true);
        tp.gamma = number_at(jt, "gamma", "theory", 0.5);
        tp.case_class = jt.contains("case")
                            ? parse_case(jt.at("case").get<std::string>())
                            : case_from_convexity(out.problem.convexity);
        tp.L = out.problem.lipschitz_L;
        tp.mu = out.problem.strong_mu;
        tp.theta = out.gradient.theta;
        tp.delta = out.gradient.delta;
        tp.c1 = out.linesearch.c1;
        tp.tau = out.linesearch.tau;
        tp.epsilon_f = out.noise.epsilon_f;
        tp.kappa = out.gradient.kappa;
        tp.zeta = out.gradient.zeta;
        tp.epsilon_g = out.gradient.epsilon_g;
        tp.beta = out.linesearch.direction.beta;
        tp.kappa1 = out.linesearch.direction.kappa1;
        tp.kappa2 = out.linesearch.direction.kappa2;
        tp.condition = out.gradient.scheme == GradientScheme::synthetic_mixed
                           ? ConditionKind::mixed
                           : ConditionKind::norm;
        tp.direction = out.linesearch.direction.kind == DirectionRule::Kind::scaled
                           ? DirectionClass::general
                           : DirectionClass::steepest;
        const double phi0 = out.problem.phi(out.x0);
        if (tp.case_class == CaseClass::nonconvex) {
            tp.phi0_gap = phi0 - out.problem.phi_hat;
        } else {
            if (!out.problem.phi_star) fail("theory.case", "value-gap cases require a known phi_star");
            tp.phi0_gap = phi0 - *out.problem.phi_star;
        }
    }

    auto compute_abar = [&]() -> double {
        if (!has_theory) fail("linesearch.alpha0", "placeholders require a theory block");
        TheoryParams tmp = tp;
        // the threshold formula never reads alpha_max; a stand-in lets the
        // alpha_max placeholder itself be threshold-relative
        if (tmp.condition == ConditionKind::mixed && !tmp.alpha_max) tmp.alpha_max = 1.0;
        try {
            return alpha_bar(tmp);
        } catch (const std::domain_error& e) {
            fail("theory", e.what());
        }
    };

    // alpha_max first (the mixed-condition constants depend on it), then alpha0
    if (jl.contains("alpha_max") && !jl.at("alpha_max").is_null()) {
        // mixed alpha_bar does not depend on alpha_max, so the placeholder is safe
        const double am = resolve_alpha_like(jl.at("alpha_max"), "linesearch.alpha_max",
                                             jl.at("alpha_max").is_number() ? 0.0 : compute_abar(),
                                             out.linesearch.tau);
        if (am <= 0.0) fail("linesearch.alpha_max", "must be positive");
        out.linesearch.alpha_max = am;
        tp.alpha_max = am;
    }
    if (out.gradient.scheme == GradientScheme::synthetic_mixed && !out.linesearch.alpha_max) {
        fail("linesearch.alpha_max", "required by the mixed condition");
    }

    const json& ja0 = require_field(jl, "alpha0", "linesearch");
    out.linesearch.alpha0 = resolve_alpha_like(
        ja0, "linesearch.alpha0", ja0.is_number() ? 0.0 : compute_abar(), out.linesearch.tau);
    if (out.linesearch.alpha0 <= 0.0) fail("linesearch.alpha0", "must be positive");
    tp.alpha0 = out.linesearch.alpha0;
    if (out.linesearch.alpha_max && out.linesearch.alpha0 > *out.linesearch.alpha_max) {
        fail("linesearch.alpha0", "exceeds alpha_max");
    }

    // projection
    if (jl.contains("projection_radius") && !jl.at("projection_radius").is_null()) {
        const json& jr = jl.at("projection_radius");
        double radius = 0.0;
        if (jr.is_number()) {
            radius = jr.get<double>();
        } else if (jr.is_string() && jr.get<std::string>() == "region_D") {
            if (!out.problem.region_D) {
                fail("linesearch.projection_radius", "problem has no region_D to inherit");
            }
            radius = *out.problem.region_D;
        } else {
            fail("linesearch.projection_radius", "expected a number or \"region_D\"");
        }
        if (radius <= 0.0) fail("linesearch.projection_radius", "must be positive");
        out.linesearch.projection_radius = radius;
        out.linesearch.projection_center = out.problem.x_star
                                               ? *out.problem.x_star
                                               : Eigen::VectorXd::Zero(out.problem.dim);
    }
    if (has_theory) {
        // region bound for the convex analysis: the projection radius when
        // active, otherwise the problem's own level-set bound
        if (out.linesearch.projection_radius) {
            tp.D = out.linesearch.projection_radius;
        } else {
            tp.D = out.problem.region_D;
        }
    }

    // stopping
    const json& js = require_field(config, "stopping", "");
    out.stopping.mode = parse_stop_mode(require_field(js, "mode", "stopping").get<std::string>());
    const json& je = require_field(js, "epsilon", "stopping");
    double floor_value = 0.0;
    if (has_theory) {
        try {
            floor_value = epsilon_floor(tp);
        } catch (const std::domain_error& e) {
            fail("theory", e.what());
        }
        out.floor = floor_value;
    }
    if (je.is_number()) {
        out.stopping.epsilon = je.get<double>();
    } else if (je.is_object() && je.contains("floor_factor")) {
        if (!has_theory) fail("stopping.epsilon", "floor_factor requires a theory block");
        if (floor_value <= 0.0) {
            fail("stopping.epsilon", "floor_factor is meaningless with a zero noise floor");
        }
        out.stopping.epsilon = je.at("floor_factor").get<double>() * floor_value;
    } else {
        fail("stopping.epsilon", "expected a number or {\"floor_factor\": f}");
    }
    if (out.stopping.epsilon <= 0.0) fail("stopping.epsilon", "must be positive");
    if (js.contains("grad_floor")) {
        const json& jf = js.at("grad_floor");
        if (jf.is_number()) {
            out.stopping.grad_floor = jf.get<double>();
        } else if (jf.is_string() && jf.get<std::string>() == "zeta_eps_g_over_theta") {
            if (out.gradient.theta <= 0.0) fail("stopping.grad_floor", "requires theta > 0");
            out.stopping.grad_floor =
                out.gradient.zeta * out.gradient.epsilon_g / out.gradient.theta;
        } else {
            fail("stopping.grad_floor", "expected a number or \"zeta_eps_g_over_theta\"");
        }
    }
    if ((out.stopping.mode == StoppingSpec::Mode::value_gap ||
         out.stopping.mode == StoppingSpec::Mode::value_gap_or_grad_floor) &&
        !out.problem.phi_star) {
        fail("stopping.mode", "value-gap stopping requires a problem with a known phi_star");
    }

    // run controls
    out.trials = static_cast<long>(number_at(config, "trials", "", 1.0));
    if (out.trials < 1) fail("trials", "must be at least 1");
    out.base_seed = static_cast<std::uint64_t>(number_at(config, "base_seed", "", 0.0));
    out.output_dir = config.value("output_dir", std::string("out"));
    out.threads = static_cast<int>(number_at(config, "threads", "", 4.0));
    if (out.threads < 1) fail("threads", "must be at least 1");
    out.write_iterations = config.value("write_iterations", true);

    // finalize theory quantities
    if (has_theory) {
        tp.epsilon = out.stopping.epsilon;
        out.theory = tp;
        try {
            out.alpha_bar_value = alpha_bar(tp);
            if (compare_bound) {
                if (floor_value > 0.0 && out.stopping.epsilon < 1.01 * floor_value) {
                    fail("stopping.epsilon",
                         "below 1.01x the neighborhood-of-convergence floor (" +
                             std::to_string(floor_value) + ")");
                }
                out.grid_exponent = tau_grid_exponent(tp);
                out.bound = expected_bound(tp);
            }
        } catch (const std::domain_error& e) {
            fail("theory", e.what());
        }
    }

    return out;
}

ResolvedProcess resolve_process(const json& config) {
    ResolvedProcess out;
    out.raw = config;
    out.config_hash = config_fingerprint(config);

    const json& jp = require_field(config, "process", "");
    ProcessParams& p = out.params;
    p.delta = number_at(jp, "delta", "process");
    p.gamma = number_at(jp, "gamma", "process");
    p.tau = number_at(jp, "tau", "process");
    p.grid_exponent = static_cast<int>(number_at(jp, "grid_exponent", "process", 0.0));
    const double abar = number_at(jp, "alpha_bar", "process", 1.0);
    if (abar <= 0.0) fail("process.alpha_bar", "must be positive");
    p.alpha0 = p.tau == 1.0 ? abar : abar * std::pow(p.tau, -static_cast<double>(p.grid_exponent));

    const json& jh = require_field(jp, "h", "process");
    const std::string hkind = jh.value("kind", std::string("constant"));
    if (hkind == "constant") {
        p.h.kind = HFunction::Kind::constant;
    } else if (hkind == "linear") {
        p.h.kind = HFunction::Kind::linear;
    } else if (hkind == "log_contraction") {
        p.h.kind = HFunction::Kind::log_contraction;
    } else {
        fail("process.h.kind", "unknown value '" + hkind + "'");
    }
    p.h.value = number_at(jh, "value", "process.h");

    const json& jr = require_field(jp, "r", "process");
    if (jr.is_number()) {
        p.r = jr.get<double>();
    } else if (jr.is_object() && jr.contains("gamma_h_factor")) {
        p.r = jr.at("gamma_h_factor").get<double>() * p.gamma * p.h(p.alpha_bar());
    } else {
        fail("process.r", "expected a number or {\"gamma_h_factor\": f}");
    }
    p.z_eps = number_at(jp, "z_eps", "process");

    if (jp.contains("policy")) {
        const json& jpol = jp.at("policy");
        const std::string unforced = jpol.value("unforced", std::string("adversarial_greedy"));
        if (unforced == "always_succeed") {
            p.policy.unforced = AdversaryPolicy::Unforced::always_succeed;
        } else if (unforced == "never_succeed") {
            p.policy.unforced = AdversaryPolicy::Unforced::never_succeed;
        } else if (unforced == "bernoulli") {
            p.policy.unforced = AdversaryPolicy::Unforced::bernoulli;
        } else if (unforced == "adversarial_greedy") {
            p.policy.unforced = AdversaryPolicy::Unforced::adversarial_greedy;
        } else {
            fail("process.policy.unforced", "unknown value '" + unforced + "'");
        }
        p.policy.bernoulli_p = number_at(jpol, "bernoulli_p", "process.policy", 0.5);
        const std::string gain = jpol.value("gain", std::string("minimal"));
        p.policy.gain =
            gain == "generous" ? AdversaryPolicy::Gain::generous : AdversaryPolicy::Gain::minimal;
        const std::string loss = jpol.value("loss", std::string("maximal"));
        p.policy.loss = loss == "none" ? AdversaryPolicy::Loss::none : AdversaryPolicy::Loss::maximal;
    }

    // horizon: explicit, or 100x the bound when it exists, else a large default
    const long horizon_cfg = static_cast<long>(number_at(jp, "horizon", "process", 0.0));
    try {
        out.bound = process_expected_bound(p);
    } catch (const std::domain_error&) {
        out.bound = std::nullopt;
    }
    if (horizon_cfg > 0) {
        p.horizon = horizon_cfg;
    } else if (out.bound) {
        p.horizon = std::max<long>(1000, static_cast<long>(std::ceil(100.0 * *out.bound)));
    } else {
        p.horizon = 100000;
    }

    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        fail("process", e.what());
    }

    out.trials = static_cast<long>(number_at(config, "trials", "", 2.0));
    if (out.trials < 2) fail("trials", "must be at least 2");
    out.base_seed = static_cast<std::uint64_t>(number_at(config, "base_seed", "", 0.0));
    out.output_dir = config.value("output_dir", std::string("out"));
    out.export_traces = static_cast<long>(number_at(config, "export_traces", "", 5.0));
    return out;
}

}  // namespace noisyls
