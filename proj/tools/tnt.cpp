#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tnt/bo.hpp"
#include "tnt/config.hpp"
#include "tnt/errors.hpp"
#include "tnt/evaluation.hpp"
#include "tnt/io_json.hpp"
#include "tnt/pipeline.hpp"
#include "tnt/problems.hpp"
#include "tnt/stats.hpp"
#include "tnt/svg.hpp"

namespace {

/// Shared flags; config resolution order is: config file, --problem, --set
/// overrides, --seed (most specific last).
struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::string problem;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key = value configuration file");
    cmd->add_option("--out-dir", args.out_dir, "directory for emitted artifacts");
    cmd->add_option("--problem", args.problem, "benchmark problem name");
    cmd->add_option("--seed", args.seed, "run seed")->each([&](const std::string&) {
        args.seed_given = true;
    });
    cmd->add_option("--set", args.overrides, "extra key=value override (repeatable)");
}

tnt::RunConfig resolve_config(const CommonArgs& args) {
    tnt::RunConfig config;
    if (!args.config_path.empty()) config = tnt::load_config(args.config_path);
    if (!args.problem.empty()) config.problem = args.problem;
    for (const std::string& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw tnt::ConfigError("--set expects key=value, got " + kv);
        tnt::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (args.seed_given) config.seed = args.seed;
    return config;
}

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

void print_reduction(const tnt::RunManifest& manifest) {
    std::cout << std::fixed << std::setprecision(3) << "search-space reduction: union "
              << 100.0 * manifest.union_volume_fraction << "% of the domain (boxes summed: "
              << 100.0 * manifest.sum_volume_fraction << "%)\n"
              << std::defaultfloat << std::setprecision(6);
}

void print_run_summary(const tnt::RunManifest& manifest) {
    std::cout << "problem " << manifest.config.problem << ", seed " << manifest.config.seed
              << ": incumbent value " << manifest.incumbent_value << ", threshold "
              << manifest.t_s_used << ", " << manifest.retained_rules << " retained rule(s)"
              << ", mean fidelity " << manifest.mean_fidelity << "\n";
    print_reduction(manifest);
    std::cout << "artifacts in " << manifest.out_dir << "\n";
}

int cmd_optimize(const CommonArgs& common, int iters, const std::string& out_path) {
    tnt::RunConfig config = resolve_config(common);
    if (iters > 0) config.bo_iterations = iters;
    tnt::apply_problem_defaults(config);
    config.validate();

    const tnt::Objective objective = tnt::make_objective(config.problem);
    tnt::BoOptions opts;
    opts.iterations = config.bo_iterations;
    opts.seed = config.seed;
    const tnt::BoTrace trace = tnt::run_bo(objective, opts);
    if (trace.aborted) throw tnt::NumericError("optimization aborted: " + trace.abort_reason);

    std::string path = out_path;
    if (path.empty()) {
        std::filesystem::create_directories(common.out_dir);
        path = join_path(common.out_dir, "trace.json");
    }
    tnt::write_json_file(path, tnt::trace_to_json(trace, objective.space()));
    std::cout << "evaluations: " << trace.evaluations.size() << " (initial design "
              << trace.initial_design_size << ")\nincumbent value " << trace.incumbent_value
              << " at (";
    for (std::size_t j = 0; j < trace.incumbent_x.size(); ++j)
        std::cout << (j ? ", " : "") << trace.incumbent_x[j];
    std::cout << ")\ntrace written to " << path << "\n";
    return 0;
}

int cmd_explain(const CommonArgs& common, const std::string& mode) {
    tnt::RunConfig config = resolve_config(common);
    if (!mode.empty()) config.tune_mode = tnt::tune_mode_from_string(mode);
    const tnt::RunManifest manifest = tnt::run_pipeline(config, common.out_dir);
    std::ifstream rules(join_path(common.out_dir, "rules.txt"));
    std::cout << rules.rdbuf() << "\n";
    print_run_summary(manifest);
    return 0;
}

/// key = value bounds file for `eval --expect`; keys: rules_min, rules_max,
/// fidelity_min, completeness_min, minima_inside_min, and the same with a
/// gt_ prefix for the ground-truth run.
std::map<std::string, double> load_expectations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tnt::ConfigError("cannot open expectations file: " + path);
    std::map<std::string, double> bounds;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::string key, eq;
        double value = 0.0;
        if (!(row >> key)) continue;
        if (!(row >> eq >> value) || eq != "=") {
            const auto split = key.find('=');
            if (split != std::string::npos && split + 1 < key.size()) {
                value = std::stod(key.substr(split + 1));
                key = key.substr(0, split);
            } else {
                throw tnt::ConfigError("malformed expectation line " + std::to_string(line_no) +
                                       " in " + path);
            }
        }
        bounds[key] = value;
    }
    return bounds;
}

int check_expectations(const std::map<std::string, double>& bounds, const tnt::EvalReport& report,
                       const std::string& prefix) {
    int violations = 0;
    const auto violated = [&](const std::string& key, bool bad, double actual) {
        const auto it = bounds.find(prefix + key);
        if (it == bounds.end()) return;
        if (bad) {
            ++violations;
            std::cout << "VIOLATION " << prefix + key << "=" << it->second << " actual " << actual
                      << " (" << report.mode << ")\n";
        }
    };
    const auto bound = [&](const std::string& key, double fallback) {
        const auto it = bounds.find(prefix + key);
        return it == bounds.end() ? fallback : it->second;
    };
    violated("rules_min", report.rule_count < bound("rules_min", 0), report.rule_count);
    violated("rules_max", report.rule_count > bound("rules_max", 0), report.rule_count);
    violated("fidelity_min", report.mean_fidelity < bound("fidelity_min", 0), report.mean_fidelity);
    violated("completeness_min", report.completeness < bound("completeness_min", 0),
             report.completeness);
    violated("minima_inside_min", report.minima_inside_rules < bound("minima_inside_min", 0),
             report.minima_inside_rules);
    return violations;
}

int cmd_eval(const CommonArgs& common, const std::string& expect_path) {
    tnt::RunConfig config = resolve_config(common);
    tnt::apply_problem_defaults(config);
    config.validate();
    const tnt::Objective objective = tnt::make_objective(config.problem);

    std::vector<tnt::EvalReport> reports;
    reports.push_back(tnt::evaluate_gp_mode(objective, config));
    if (objective.cheap_ground_truth()) reports.push_back(tnt::evaluate_gt_mode(objective, config));

    std::filesystem::create_directories(common.out_dir);
    const std::string report_path = join_path(common.out_dir, "report.csv");
    tnt::write_eval_csv(reports, report_path);

    for (const tnt::EvalReport& r : reports) {
        std::cout << r.problem << " [" << r.mode << "] seed " << r.seed << ": " << r.rule_count
                  << " rule(s), mean fidelity " << r.mean_fidelity << ", completeness "
                  << r.completeness << ", minima inside rules " << r.minima_inside_rules << "\n";
    }
    std::cout << "report written to " << report_path << "\n";

    if (expect_path.empty()) return 0;
    const auto bounds = load_expectations(expect_path);
    int violations = check_expectations(bounds, reports.front(), "");
    if (reports.size() > 1) violations += check_expectations(bounds, reports.back(), "gt_");
    if (violations > 0) {
        std::cout << violations << " expectation(s) violated\n";
        return 4;
    }
    std::cout << "all expectations met\n";
    return 0;
}

int cmd_ablate(const CommonArgs& common, bool full_grid) {
    tnt::RunConfig config = resolve_config(common);
    if (config.problem.empty()) config.problem = "himmelblau";
    tnt::apply_problem_defaults(config);
    config.validate();
    const tnt::Objective objective = tnt::make_objective(config.problem);

    const tnt::AblationGrid grid = tnt::run_clustering_ablation(objective, config, full_grid);
    std::filesystem::create_directories(common.out_dir);
    const std::string path = join_path(common.out_dir, "report.csv");
    tnt::write_ablation_csv(grid, path);
    std::cout << tnt::ablation_to_text(grid) << "report written to " << path << "\n";
    return 0;
}

int cmd_plot(const std::string& run_dir, const std::string& out_path) {
    const auto manifest_doc = tnt::read_json_file(join_path(run_dir, "manifest.json"));
    const tnt::RunConfig config = tnt::config_from_json(manifest_doc.at("config"));
    const tnt::Objective objective = tnt::make_objective(config.problem);

    const auto rules_doc = tnt::read_json_file(join_path(run_dir, "rules.json"));
    const tnt::RuleSet ruleset = tnt::ruleset_from_json(rules_doc);
    const tnt::ExplanationDataset dataset =
        tnt::read_dataset_csv(join_path(run_dir, "dataset.csv"), objective.space());
    const std::vector<double> incumbent =
        manifest_doc.at("incumbent").get<std::vector<double>>();

    const std::string path = out_path.empty() ? join_path(run_dir, "plot.svg") : out_path;
    std::ofstream out(path);
    if (!out) throw tnt::ConfigError("cannot open for writing: " + path);
    out << tnt::render_svg(ruleset, dataset, objective.known_minima(), incumbent);
    std::cout << "plot written to " << path << "\n";
    return 0;
}

int cmd_report(const CommonArgs& common, int n_seeds, std::vector<std::string> problems) {
    if (problems.empty()) problems = {"booth", "matyas", "himmelblau"};
    std::vector<tnt::EvalReport> reports;
    for (const std::string& name : problems) {
        const tnt::Objective objective = tnt::make_objective(name);
        for (int s = 0; s < n_seeds; ++s) {
            tnt::RunConfig config = resolve_config(common);
            config.problem = name;
            config.seed = common.seed + static_cast<std::uint64_t>(s);
            tnt::apply_problem_defaults(config);
            config.validate();
            if (objective.cheap_ground_truth()) {
                const tnt::GtVsGpResult both = tnt::run_gt_vs_gp(objective, config);
                reports.push_back(both.gp);
                reports.push_back(both.gt);
            } else {
                reports.push_back(tnt::evaluate_gp_mode(objective, config));
            }
            std::cout << "finished " << name << " seed " << config.seed << "\n";
        }
    }
    std::filesystem::create_directories(common.out_dir);
    const std::string path = join_path(common.out_dir, "report.csv");
    tnt::write_eval_csv(reports, path);

    std::cout << "\nproblem        mode           rules (mean+/-sd)   fidelity (mean+/-sd)\n";
    for (const std::string& name : problems) {
        for (const std::string mode : {"ground-truth", "gp-surrogate"}) {
            std::vector<double> counts, fids;
            for (const tnt::EvalReport& r : reports) {
                if (r.problem != name || r.mode != mode) continue;
                counts.push_back(r.rule_count);
                fids.push_back(r.mean_fidelity);
            }
            if (counts.empty()) continue;
            std::cout << std::left << std::setw(15) << name << std::setw(15) << mode << std::fixed
                      << std::setprecision(2) << std::setw(6) << tnt::mean_of(counts) << "+/- "
                      << std::setw(10) << std::sqrt(tnt::population_variance(counts))
                      << std::setw(6) << tnt::mean_of(fids) << "+/- "
                      << std::sqrt(tnt::population_variance(fids)) << "\n"
                      << std::defaultfloat << std::setprecision(6);
        }
    }
    std::cout << "report written to " << path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian-optimization explanation pipeline: optimize, extract box rules, "
                 "rank by interestingness, evaluate and plot"};
    app.require_subcommand(1);

    CommonArgs common;
    int exit_code = 0;

    auto* optimize = app.add_subcommand("optimize", "run Bayesian optimization, write trace.json");
    add_common(optimize, common);
    int opt_iters = -1;
    std::string opt_out;
    optimize->add_option("--iters", opt_iters, "acquisition-driven evaluations");
    optimize->add_option("--out", opt_out, "trace output path (default <out-dir>/trace.json)");
    optimize->callback([&] { exit_code = cmd_optimize(common, opt_iters, opt_out); });

    auto* explain = app.add_subcommand("explain", "full pipeline: optimize + extract rules");
    add_common(explain, common);
    std::string explain_mode;
    explain->add_option("--mode", explain_mode, "threshold mode: fixed, scalar or pareto");
    explain->callback([&] { exit_code = cmd_explain(common, explain_mode); });

    auto* tune = app.add_subcommand("tune-ts", "pipeline with multiobjective threshold tuning");
    add_common(tune, common);
    std::string tune_mode = "pareto";
    tune->add_option("--mode", tune_mode, "threshold mode: scalar or pareto (default pareto)");
    tune->callback([&] { exit_code = cmd_explain(common, tune_mode); });

    auto* eval = app.add_subcommand("eval", "surrogate vs ground-truth evaluation, report.csv");
    add_common(eval, common);
    std::string expect_path;
    eval->add_option("--expect", expect_path, "bounds file; violations exit with code 4");
    eval->callback([&] { exit_code = cmd_eval(common, expect_path); });

    auto* ablate = app.add_subcommand("ablate", "clustering configuration grid on one run");
    add_common(ablate, common);
    bool full_grid = false;
    ablate->add_flag("--full-grid", full_grid, "all linkage x distance x pruning combinations");
    ablate->callback([&] { exit_code = cmd_ablate(common, full_grid); });

    auto* plot = app.add_subcommand("plot", "re-render plot.svg from a finished run directory");
    std::string run_dir = "out", plot_out;
    plot->add_option("--run-dir", run_dir, "directory holding manifest.json and artifacts");
    plot->add_option("--out", plot_out, "SVG output path (default <run-dir>/plot.svg)");
    plot->callback([&] { exit_code = cmd_plot(run_dir, plot_out); });

    auto* report = app.add_subcommand("report", "multi-seed surrogate vs ground-truth table");
    add_common(report, common);
    int n_seeds = 3;
    std::vector<std::string> problems;
    report->add_option("--seeds", n_seeds, "seeds per problem (base seed = --seed)");
    report->add_option("--problems", problems, "problems to evaluate");
    report->callback([&] { exit_code = cmd_report(common, n_seeds, problems); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const tnt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const tnt::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}
