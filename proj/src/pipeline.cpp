#include "tnt/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>

#include "tnt/bo.hpp"
#include "tnt/dataset.hpp"
#include "tnt/errors.hpp"
#include "tnt/evaluation.hpp"
#include "tnt/io_json.hpp"
#include "tnt/linkage.hpp"
#include "tnt/problems.hpp"
#include "tnt/prune.hpp"
#include "tnt/rng.hpp"
#include "tnt/sensitivity.hpp"
#include "tnt/svg.hpp"
#include "tnt/tuner.hpp"

namespace tnt {

using nlohmann::json;

double estimate_union_volume_fraction(const RuleSet& ruleset, const SearchSpace& space,
                                      std::uint64_t seed, int n_samples) {
    if (ruleset.rules.empty() || n_samples <= 0) return 0.0;
    Rng rng(seed, rng_stream::kUnionVolume);
    int inside = 0;
    for (int i = 0; i < n_samples; ++i) {
        const std::vector<double> x = space.sample(rng);
        for (const Rule& rule : ruleset.rules) {
            if (rule.antecedent_contains(x)) {
                ++inside;
                break;
            }
        }
    }
    return static_cast<double>(inside) / n_samples;
}

double summed_volume_fraction(const RuleSet& ruleset, const SearchSpace& space) {
    double total = 0.0;
    for (const Rule& rule : ruleset.rules) {
        double v = 1.0;
        for (int j = 0; j < space.dims(); ++j) {
            const double lo = std::max(rule.antecedent[j].lower, space.lower[j]);
            const double hi = std::min(rule.antecedent[j].upper, space.upper[j]);
            v *= std::max(0.0, hi - lo);
        }
        total += v;
    }
    return total / space.volume();
}

json manifest_to_json(const RunManifest& manifest) {
    json artifacts = json::object();
    for (const auto& [name, path] : manifest.artifacts) artifacts[name] = path;
    json timings = json::array();
    for (const auto& [stage, seconds] : manifest.timings)
        timings.push_back(json{{"stage", stage}, {"seconds", seconds}});
    return json{{"config", config_to_json(manifest.config)},
                {"out_dir", manifest.out_dir},
                {"artifacts", artifacts},
                {"timings", timings},
                {"completed", manifest.completed},
                {"failed_stage", manifest.failed_stage},
                {"error", manifest.error},
                {"incumbent", manifest.incumbent},
                {"incumbent_value", manifest.incumbent_value},
                {"t_s_used", manifest.t_s_used},
                {"retained_rules", manifest.retained_rules},
                {"mean_fidelity", manifest.mean_fidelity},
                {"union_volume_fraction", manifest.union_volume_fraction},
                {"sum_volume_fraction", manifest.sum_volume_fraction}};
}

namespace {

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << text;
}

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

} // namespace

RunManifest run_pipeline(const RunConfig& raw_config, const std::string& out_dir) {
    RunConfig config = raw_config;
    apply_problem_defaults(config);
    config.validate();

    RunManifest manifest;
    manifest.config = config;
    manifest.out_dir = out_dir;
    std::filesystem::create_directories(out_dir);

    const auto manifest_path = join_path(out_dir, "manifest.json");
    const auto flush_manifest = [&] {
        manifest.artifacts["manifest"] = manifest_path;
        write_json_file(manifest_path, manifest_to_json(manifest));
    };

    std::string current_stage;
    const auto timed = [&](const std::string& stage, auto&& body) {
        current_stage = stage;
        const auto start = std::chrono::steady_clock::now();
        body();
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        manifest.timings.emplace_back(stage, elapsed.count());
    };

    try {
        Objective objective = make_objective(config.problem);

        BoTrace trace;
        timed("optimize", [&] {
            BoOptions bo_opts;
            bo_opts.iterations = config.bo_iterations;
            bo_opts.seed = config.seed;
            trace = run_bo(objective, bo_opts);
            if (trace.aborted) throw NumericError("optimization aborted: " + trace.abort_reason);
            const auto path = join_path(out_dir, "trace.json");
            write_json_file(path, trace_to_json(trace, objective.space()));
            manifest.artifacts["trace"] = path;
            manifest.incumbent = trace.incumbent_x;
            manifest.incumbent_value = trace.incumbent_value;
        });

        ExplanationDataset dataset;
        timed("dataset", [&] {
            dataset = generate_dataset(trace.model, objective.space(), config.explanation_samples,
                                       config.seed);
            const auto path = join_path(out_dir, "dataset.csv");
            write_dataset_csv(dataset, path);
            manifest.artifacts["dataset"] = path;
        });

        LinkageTree tree;
        timed("linkage", [&] {
            tree = build_linkage(dataset, config.linkage, config.distance);
            const auto path = join_path(out_dir, "linkage.csv");
            write_linkage_csv(tree, path);
            manifest.artifacts["linkage"] = path;
        });

        Clustering clustering;
        timed("prune", [&] {
            TunerContext ctx;
            ctx.dataset = &dataset;
            ctx.tree = &tree;
            ctx.f_best = trace.incumbent_value;
            ctx.t_alpha = config.t_alpha;
            ctx.weights = config.weights;
            ctx.min_cluster_size = config.min_cluster_size;
            if (config.pruning == PruningKind::Distance) {
                const double t_dist =
                    config.t_dist >= 0.0 ? config.t_dist : scalar_tune_distance(ctx);
                clustering = distance_prune(tree, t_dist, config.min_cluster_size);
                manifest.t_s_used = t_dist;
                return;
            }
            double t_s = config.t_s;
            if (config.tune_mode == TuneMode::Scalar) {
                t_s = scalar_tune(ctx);
            } else if (config.tune_mode == TuneMode::Pareto) {
                auto [front, chosen] =
                    nsga2_tune(ctx, config.nsga_generations, config.nsga_population, config.seed);
                t_s = chosen.t_s;
                const auto path = join_path(out_dir, "front.csv");
                write_front_csv(front, path);
                manifest.artifacts["front"] = path;
            }
            clustering = variance_prune(tree, dataset, t_s, config.min_cluster_size);
            manifest.t_s_used = t_s;
        });

        RuleSet ruleset;
        std::vector<SensitivityReport> sensitivities;
        timed("rules", [&] {
            ruleset = construct_rules(clustering, dataset);
            score_rules(ruleset, dataset, trace.incumbent_value, config.weights);
            ruleset = rank_and_filter(std::move(ruleset), config.t_alpha);
            manifest.retained_rules = static_cast<int>(ruleset.rules.size());
        });

        timed("sensitivity", [&] {
            std::string text;
            for (std::size_t r = 0; r < ruleset.rules.size(); ++r) {
                sensitivities.push_back(sensitivity(ruleset.rules[r], trace.model, dataset));
                text += "rule " + std::to_string(r + 1) + ": " +
                        sensitivity_to_text(sensitivities.back(), objective.space()) + "\n";
            }
            std::ofstream csv(join_path(out_dir, "sensitivity.csv"));
            if (!csv) throw ConfigError("cannot open for writing: sensitivity.csv");
            csv << "rule,dimension,score,label\n";
            csv.precision(17);
            for (std::size_t r = 0; r < sensitivities.size(); ++r) {
                for (int j = 0; j < objective.space().dims(); ++j) {
                    csv << (r + 1) << ',' << objective.space().names[j] << ','
                        << sensitivities[r].scores[j] << ','
                        << (sensitivities[r].tune[j] ? "TUNE" : "NOTUNE") << '\n';
                }
            }
            manifest.artifacts["sensitivity"] = join_path(out_dir, "sensitivity.csv");

            const auto rules_json_path = join_path(out_dir, "rules.json");
            write_json_file(rules_json_path, ruleset_to_json(ruleset, objective.space(),
                                                             trace.incumbent_value, sensitivities));
            manifest.artifacts["rules_json"] = rules_json_path;

            const auto rules_txt_path = join_path(out_dir, "rules.txt");
            write_text_file(rules_txt_path, rules_to_text(ruleset, objective.space()) +
                                                (text.empty() ? "" : "\n" + text));
            manifest.artifacts["rules_txt"] = rules_txt_path;
        });

        timed("evaluate", [&] {
            if (!ruleset.rules.empty()) {
                manifest.mean_fidelity =
                    fidelity(ruleset, trace.model, config.fidelity_samples, config.seed).mean;
            }
            manifest.union_volume_fraction =
                estimate_union_volume_fraction(ruleset, objective.space(), config.seed);
            manifest.sum_volume_fraction = summed_volume_fraction(ruleset, objective.space());
        });

        timed("plot", [&] {
            const auto path = join_path(out_dir, "plot.svg");
            write_text_file(path,
                            render_svg(ruleset, dataset, objective.known_minima(), trace.incumbent_x));
            manifest.artifacts["plot"] = path;
        });

        manifest.completed = true;
        flush_manifest();
    } catch (const std::exception& e) {
        manifest.failed_stage = current_stage;
        manifest.error = e.what();
        flush_manifest();
        throw;
    }
    return manifest;
}

} // namespace tnt
