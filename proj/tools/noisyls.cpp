#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "noisyls/config.hpp"
#include "noisyls/experiment.hpp"
#include "noisyls/theory.hpp"

namespace {

using namespace noisyls;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void apply_overrides(nlohmann::json& config, const std::optional<long>& trials,
                     const std::optional<std::uint64_t>& seed, const std::string& out_dir,
                     const std::optional<int>& threads) {
    if (trials) config["trials"] = *trials;
    if (seed) config["base_seed"] = *seed;
    if (!out_dir.empty()) config["output_dir"] = out_dir;
    if (threads) config["threads"] = *threads;
}

void print_kv(std::ostream& os, bool csv, const std::string& key, const std::string& value) {
    if (csv) {
        os << key << ',' << value << '\n';
    } else {
        os << "  " << key << ": " << value << '\n';
    }
}

int cmd_bound(const nlohmann::json& config, bool csv) {
    if (is_process_config(config)) {
        ResolvedProcess rp = resolve_process(config);
        if (!rp.bound) {
            std::cerr << "bound: the accuracy probability hypothesis fails for these process "
                         "parameters (need delta < 1/2 - sqrt(gamma)/2)\n";
            return 2;
        }
        if (!csv) std::cout << "process bound quantities:\n";
        print_kv(std::cout, csv, "alpha_bar", fmt(rp.params.alpha_bar()));
        print_kv(std::cout, csv, "h_at_alpha_bar", fmt(rp.params.h(rp.params.alpha_bar())));
        print_kv(std::cout, csv, "r", fmt(rp.params.r));
        print_kv(std::cout, csv, "gamma", fmt(rp.params.gamma));
        print_kv(std::cout, csv, "r_over_h", fmt(rp.params.r / rp.params.h(rp.params.alpha_bar())));
        print_kv(std::cout, csv, "z_eps", fmt(rp.params.z_eps));
        print_kv(std::cout, csv, "grid_exponent", std::to_string(rp.params.grid_exponent));
        print_kv(std::cout, csv, "expected_bound", fmt(*rp.bound));
        return 0;
    }

    ResolvedExperiment experiment = resolve_experiment(config);
    if (!experiment.theory) {
        std::cerr << "bound: the config has no theory block\n";
        return 2;
    }
    const TheoryParams& tp = *experiment.theory;
    const ProgressFunctions pf = progress_functions(tp);
    if (!csv) std::cout << "bound quantities (" << experiment.problem.name << "):\n";
    print_kv(std::cout, csv, "alpha_bar", fmt(alpha_bar(tp)));
    print_kv(std::cout, csv, "h_at_alpha_bar", fmt(pf.h_at_alpha_bar));
    print_kv(std::cout, csv, "r", fmt(pf.r));
    print_kv(std::cout, csv, "gamma", fmt(tp.gamma));
    print_kv(std::cout, csv, "r_over_h", fmt(pf.r / pf.h_at_alpha_bar));
    print_kv(std::cout, csv, "z_eps", fmt(pf.z_eps));
    print_kv(std::cout, csv, "epsilon", fmt(tp.epsilon));
    print_kv(std::cout, csv, "epsilon_floor", fmt(epsilon_floor(tp)));
    print_kv(std::cout, csv, "case_constant", fmt(case_constant(tp)));
    print_kv(std::cout, csv, "grid_exponent", std::to_string(tau_grid_exponent(tp)));
    print_kv(std::cout, csv, "expected_bound", fmt(expected_bound(tp)));
    return 0;
}

int cmd_run(const nlohmann::json& config) {
    ResolvedExperiment experiment = resolve_experiment(config);
    ExperimentResult result = run_and_write(experiment);
    std::cout << "trials: " << experiment.trials << "  censored: " << result.censored
              << "  mean N_eps: " << fmt(result.mean_n_eps)
              << "  std err: " << fmt(result.std_err_n_eps) << '\n';
    if (result.bound) {
        std::cout << "expected bound: " << fmt(*result.bound)
                  << "  mean+3se: " << fmt(result.mean_n_eps + 3.0 * result.std_err_n_eps) << '\n';
    }
    if (result.censored > 0) {
        std::cout << "warning: " << result.censored << " trial(s) censored at max_iter\n";
    }
    std::cout << "artifacts written to " << experiment.output_dir << '\n';
    return 0;
}

int cmd_simulate(const nlohmann::json& config) {
    namespace fs = std::filesystem;
    ResolvedProcess rp = resolve_process(config);
    fs::create_directories(rp.output_dir);

    const MonteCarloResult mc = monte_carlo_expectation(rp.params, rp.trials, rp.base_seed);

    // export the first few traces in the harness per-iteration schema
    std::ofstream traces(fs::path(rp.output_dir) / "traces.csv");
    traces << "trial,k,alpha,successful,accuracy_event,f_cur,f_trial,phi_true,grad_norm_true,z_k\n";
    for (long t = 0; t < std::min(rp.export_traces, rp.trials); ++t) {
        const ProcessTrace trace = simulate(rp.params, rp.base_seed + static_cast<std::uint64_t>(t),
                                            /*record_steps=*/true);
        for (std::size_t k = 0; k < trace.steps.size(); ++k) {
            const auto& s = trace.steps[k];
            traces << t << ',' << k << ',' << fmt(s.alpha) << ',' << (s.successful ? '1' : '0')
                   << ',' << (s.accurate ? '1' : '0') << ",nan,nan,nan,nan," << fmt(s.z_after)
                   << '\n';
        }
    }

    std::ofstream report(fs::path(rp.output_dir) / "process_report.txt");
    auto emit = [&](const std::string& k, const std::string& v) {
        report << k << ": " << v << '\n';
        std::cout << k << ": " << v << '\n';
    };
    emit("trials", std::to_string(mc.trials));
    emit("censored", std::to_string(mc.censored));
    emit("mean_N_eps", fmt(mc.mean));
    emit("std_err", fmt(mc.std_err));
    emit("max_N_eps", std::to_string(mc.max_n_eps));
    emit("counting_check_violations", std::to_string(mc.stated_check_violations));
    emit("counting_check_violations_crossing_adjusted",
         std::to_string(mc.adjusted_check_violations));
    if (rp.bound) {
        emit("expected_bound", fmt(*rp.bound));
        emit("mean_plus_3se", fmt(mc.mean + 3.0 * mc.std_err));
        emit("within_bound",
             mc.censored == 0 && mc.mean + 3.0 * mc.std_err <= *rp.bound ? "yes" : "no");
    }

    if (mc.stated_check_violations > 0) {
        std::cerr << "simulate: " << mc.stated_check_violations
                  << " trace(s) violated the per-realization counting bounds\n";
        return 1;
    }
    if (mc.censored > 0) {
        std::cerr << "simulate: " << mc.censored << " trace(s) censored at the horizon\n";
        return 1;
    }
    return 0;
}

int cmd_sweep(const nlohmann::json& config, const std::string& sweep_path,
              const std::string& out_dir) {
    nlohmann::json sweep_spec = nlohmann::json::object();
    if (!sweep_path.empty()) sweep_spec = load_config_file(sweep_path);
    const std::string dir =
        !out_dir.empty() ? out_dir : config.value("output_dir", std::string("out"));
    const auto cells = run_sweep(config, sweep_spec, dir);
    std::cout << "sweep cells: " << cells.size() << "  artifacts written to " << dir << '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::cout << "  cell " << i << ": mean N_eps " << fmt(cells[i].result.mean_n_eps);
        if (cells[i].result.bound) std::cout << "  bound " << fmt(*cells[i].result.bound);
        if (cells[i].result.censored > 0) std::cout << "  censored " << cells[i].result.censored;
        std::cout << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noisyls: noise-tolerant line search, complexity bounds, and process simulation"};
    app.require_subcommand(1);

    std::string config_path, out_dir, sweep_path;
    std::optional<long> trials;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool csv = false;

    auto add_common = [&](CLI::App* cmd, bool with_run_flags) {
        cmd->add_option("--config", config_path, "JSON config file")->required();
        if (with_run_flags) {
            cmd->add_option("--trials", trials, "override trial count");
            cmd->add_option("--seed", seed, "override base seed");
            cmd->add_option("--out", out_dir, "override output directory");
            cmd->add_option("--threads", threads, "worker pool size");
        }
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run optimizer trials and write CSV artifacts");
    add_common(run_cmd, true);
    CLI::App* bound_cmd = app.add_subcommand("bound", "print all derived constants and the bound");
    add_common(bound_cmd, false);
    bound_cmd->add_flag("--csv", csv, "machine-readable key,value output");
    CLI::App* sim_cmd = app.add_subcommand("simulate", "simulate the abstract process");
    add_common(sim_cmd, true);
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Cartesian parameter sweep");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--sweep", sweep_path, "JSON sweep spec file");

    CLI11_PARSE(app, argc, argv);

    try {
        nlohmann::json config = noisyls::load_config_file(config_path);
        apply_overrides(config, trials, seed, out_dir, threads);
        if (run_cmd->parsed()) {
            return noisyls::is_process_config(config) ? cmd_simulate(config) : cmd_run(config);
        }
        if (bound_cmd->parsed()) return cmd_bound(config, csv);
        if (sim_cmd->parsed()) return cmd_simulate(config);
        if (sweep_cmd->parsed()) return cmd_sweep(config, sweep_path, out_dir);
    } catch (const noisyls::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
