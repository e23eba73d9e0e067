#include "noisyls/experiment.hpp"

#include <atomic>
#include <mutex>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

namespace noisyls {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

TrialSummary summarize(long trial, const RunRecord& record) {
    TrialSummary s;
    s.trial = trial;
    s.n_eps = record.n_eps;
    s.censored = record.censored;
    s.delta_hat = record.delta_hat;
    s.iterations = static_cast<long>(record.iterations.size());
    for (const auto& it : record.iterations) s.successes += it.successful ? 1 : 0;
    return s;
}

}  // namespace

double progress_value(CaseClass case_class, double phi_k, double phi0,
                      std::optional<double> phi_star) {
    switch (case_class) {
        case CaseClass::convex:
            return 1.0 / (phi_k - *phi_star) - 1.0 / (phi0 - *phi_star);
        case CaseClass::strongly_convex:
            return std::log((phi0 - *phi_star) / (phi_k - *phi_star));
        case CaseClass::nonconvex:
            return phi0 - phi_k;
    }
    return 0.0;
}

ExperimentResult run_experiment(const ResolvedExperiment& experiment, bool keep_records) {
    const long trials = experiment.trials;
    std::vector<RunRecord> records(trials);

    const int workers =
        static_cast<int>(std::min<long>(experiment.threads, std::max<long>(trials, 1)));
    std::atomic<long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        try {
            for (;;) {
                const long t = next.fetch_add(1);
                if (t >= trials) return;
                records[t] = run(experiment.problem, experiment.noise, experiment.gradient,
                                 experiment.linesearch, experiment.stopping, experiment.x0,
                                 experiment.base_seed + static_cast<std::uint64_t>(t));
            }
        } catch (...) {
            std::scoped_lock lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(trials);  // drain the queue
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    ExperimentResult result;
    result.bound = experiment.bound;
    double sum = 0.0, sumsq = 0.0;
    long completed = 0;
    for (long t = 0; t < trials; ++t) {
        result.summaries.push_back(summarize(t, records[t]));
        if (records[t].n_eps) {
            const double n = static_cast<double>(*records[t].n_eps);
            sum += n;
            sumsq += n * n;
            ++completed;
        } else {
            ++result.censored;
        }
    }
    if (completed > 0) {
        result.mean_n_eps = sum / completed;
        if (completed > 1) {
            const double var = std::max(0.0, (sumsq - sum * sum / completed) / (completed - 1));
            result.std_err_n_eps = std::sqrt(var / completed);
        }
    }
    if (keep_records) result.records = std::move(records);
    return result;
}

std::string iterations_csv_header() {
    return "trial,k,alpha,successful,accuracy_event,f_cur,f_trial,phi_true,grad_norm_true,z_k\n";
}

std::string iterations_csv_rows(const ResolvedExperiment& experiment, long trial,
                                const RunRecord& record) {
    const CaseClass case_class =
        experiment.theory ? experiment.theory->case_class : CaseClass::nonconvex;
    const double phi0 =
        record.iterations.empty() ? record.final_phi_true : record.iterations.front().phi_true;
    std::string out;
    out.reserve(record.iterations.size() * 96);
    for (const auto& it : record.iterations) {
        const double z =
            progress_value(case_class, it.phi_true, phi0,
                           experiment.problem.phi_star ? experiment.problem.phi_star
                                                       : std::optional<double>(0.0));
        out += std::to_string(trial);
        out += ',';
        out += std::to_string(it.k);
        out += ',';
        out += fmt(it.alpha);
        out += ',';
        out += it.successful ? '1' : '0';
        out += ',';
        out += it.accuracy_event ? '1' : '0';
        out += ',';
        out += fmt(it.f_cur);
        out += ',';
        out += fmt(it.f_trial);
        out += ',';
        out += fmt(it.phi_true);
        out += ',';
        out += fmt(it.grad_norm_true);
        out += ',';
        out += fmt(z);
        out += '\n';
    }
    return out;
}

std::string summary_csv_header() { return "trial,N_eps,censored,delta_hat,iterations,successes,bound\n"; }

std::string summary_csv_row(const TrialSummary& s, const std::optional<double>& bound) {
    std::string out = std::to_string(s.trial);
    out += ',';
    out += s.n_eps ? std::to_string(*s.n_eps) : std::string("");
    out += ',';
    out += s.censored ? '1' : '0';
    out += ',';
    out += fmt(s.delta_hat);
    out += ',';
    out += std::to_string(s.iterations);
    out += ',';
    out += std::to_string(s.successes);
    out += ',';
    out += bound ? fmt(*bound) : std::string("");
    out += '\n';
    return out;
}

ExperimentResult run_and_write(const ResolvedExperiment& experiment) {
    namespace fs = std::filesystem;
    fs::create_directories(experiment.output_dir);

    ExperimentResult result = run_experiment(experiment, /*keep_records=*/true);

    if (experiment.write_iterations) {
        std::ofstream iters(fs::path(experiment.output_dir) / "iterations.csv");
        iters << iterations_csv_header();
        for (long t = 0; t < experiment.trials; ++t) {
            iters << iterations_csv_rows(experiment, t, result.records[t]);
        }
    }

    std::ofstream summary(fs::path(experiment.output_dir) / "summary.csv");
    summary << summary_csv_header();
    for (const auto& s : result.summaries) summary << summary_csv_row(s, result.bound);

    std::ofstream report(fs::path(experiment.output_dir) / "report.txt");
    report << "config_hash: " << experiment.config_hash << "\n";
    report << "trials: " << experiment.trials << "\n";
    report << "censored: " << result.censored << "\n";
    report << "mean_N_eps: " << fmt(result.mean_n_eps) << "\n";
    report << "std_err_N_eps: " << fmt(result.std_err_n_eps) << "\n";
    if (experiment.alpha_bar_value) report << "alpha_bar: " << fmt(*experiment.alpha_bar_value) << "\n";
    if (experiment.floor) report << "epsilon_floor: " << fmt(*experiment.floor) << "\n";
    report << "epsilon: " << fmt(experiment.stopping.epsilon) << "\n";
    if (result.bound) {
        report << "expected_bound: " << fmt(*result.bound) << "\n";
        const double margin = result.mean_n_eps + 3.0 * result.std_err_n_eps;
        report << "mean_plus_3se: " << fmt(margin) << "\n";
        report << "within_bound: " << (result.censored == 0 && margin <= *result.bound ? "yes" : "no")
               << "\n";
    }

    // drop the heavyweight per-iteration data before returning
    result.records.clear();
    return result;
}

std::vector<SweepCell> run_sweep(const nlohmann::json& base_config,
                                 const nlohmann::json& sweep_spec, const std::string& output_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(output_dir);

    struct Axis {
        std::string key;
        std::vector<nlohmann::json> values;
    };
    std::vector<Axis> axes;
    if (sweep_spec.contains("sweep")) {
        for (const auto& jaxis : sweep_spec.at("sweep")) {
            Axis axis;
            axis.key = jaxis.at("key").get<std::string>();
            for (const auto& v : jaxis.at("values")) axis.values.push_back(v);
            if (axis.values.empty()) throw ConfigError("sweep axis '" + axis.key + "' has no values");
            axes.push_back(std::move(axis));
        }
    }

    // validate keys against the base config up front
    for (const auto& axis : axes) {
        nlohmann::json probe = base_config;
        set_config_key(probe, axis.key, axis.values.front());
    }

    long cell_count = 1;
    for (const auto& axis : axes) cell_count *= static_cast<long>(axis.values.size());

    std::vector<SweepCell> cells;
    std::ofstream summary(fs::path(output_dir) / "sweep_summary.csv");
    summary << "cell";
    for (const auto& axis : axes) summary << ',' << axis.key;
    summary << ",trial,N_eps,censored,bound\n";

    // CSV field for a swept value: resolved number when the key has a
    // placeholder form, quoted JSON otherwise
    auto resolved_field = [](const ResolvedExperiment& experiment, const std::string& key,
                             const nlohmann::json& value) -> std::string {
        if (value.is_number()) return fmt(value.get<double>());
        if (key == "stopping.epsilon") return fmt(experiment.stopping.epsilon);
        if (key == "linesearch.alpha0") return fmt(experiment.linesearch.alpha0);
        if (key == "linesearch.alpha_max" && experiment.linesearch.alpha_max) {
            return fmt(*experiment.linesearch.alpha_max);
        }
        std::string quoted = value.dump();
        std::string escaped = "\"";
        for (char ch : quoted) {
            if (ch == '"') escaped += '"';
            escaped += ch;
        }
        escaped += '"';
        return escaped;
    };

    for (long cell = 0; cell < cell_count; ++cell) {
        nlohmann::json config = base_config;
        SweepCell out_cell;
        long rest = cell;
        for (const auto& axis : axes) {
            const long idx = rest % static_cast<long>(axis.values.size());
            rest /= static_cast<long>(axis.values.size());
            set_config_key(config, axis.key, axis.values[idx]);
            out_cell.assignment.emplace_back(axis.key, axis.values[idx]);
        }
        config["write_iterations"] = false;
        ResolvedExperiment experiment = resolve_experiment(config);
        experiment.output_dir = output_dir;
        for (const auto& [key, value] : out_cell.assignment) {
            out_cell.resolved_values.push_back(resolved_field(experiment, key, value));
        }
        out_cell.result = run_experiment(experiment);

        for (const auto& s : out_cell.result.summaries) {
            summary << cell;
            for (const auto& value : out_cell.resolved_values) summary << ',' << value;
            summary << ',' << s.trial << ',' << (s.n_eps ? std::to_string(*s.n_eps) : std::string(""))
                    << ',' << (s.censored ? '1' : '0') << ','
                    << (out_cell.result.bound ? fmt(*out_cell.result.bound) : std::string("")) << "\n";
        }
        cells.push_back(std::move(out_cell));
    }

    // plot data: x,y,series per swept axis plus a per-cell bound comparison
    for (std::size_t a = 0; a < axes.size(); ++a) {
        std::string name = axes[a].key;
        for (auto& ch : name) {
            if (ch == '.') ch = '_';
        }
        std::ofstream plot(fs::path(output_dir) / ("plot_neps_vs_" + name + ".csv"));
        plot << "x,y,series\n";
        for (const auto& cell : cells) {
            const std::string& x = cell.resolved_values[a];
            plot << x << ',' << fmt(cell.result.mean_n_eps) << ",empirical_mean\n";
            if (cell.result.bound) plot << x << ',' << fmt(*cell.result.bound) << ",theory_bound\n";
        }
    }
    {
        std::ofstream plot(fs::path(output_dir) / "plot_bound_comparison.csv");
        plot << "x,y,series\n";
        for (std::size_t i = 0; i < cells.size(); ++i) {
            plot << i << ',' << fmt(cells[i].result.mean_n_eps) << ",empirical_mean\n";
            if (cells[i].result.bound) plot << i << ',' << fmt(*cells[i].result.bound) << ",theory_bound\n";
        }
    }
    return cells;
}

}  // namespace noisyls
