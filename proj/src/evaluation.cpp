#include "tnt/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "tnt/errors.hpp"
#include "tnt/linkage.hpp"
#include "tnt/prune.hpp"
#include "tnt/rng.hpp"
#include "tnt/tuner.hpp"

namespace tnt {

FidelityResult fidelity(const RuleSet& ruleset, const GpModel& model, int n_samples,
                        std::uint64_t seed) {
    if (ruleset.rules.empty()) throw ConfigError("fidelity of an empty rule set is undefined");
    const std::size_t k = ruleset.rules.size();
    double total_volume = 0.0;
    for (const Rule& r : ruleset.rules) total_volume += r.antecedent_volume();

    FidelityResult result;
    result.per_rule.assign(k, 0.0);
    result.samples_per_rule.assign(k, 0);
    for (std::size_t r = 0; r < k; ++r) {
        const double share = total_volume > 0.0
                                 ? ruleset.rules[r].antecedent_volume() / total_volume
                                 : 1.0 / static_cast<double>(k);
        result.samples_per_rule[r] =
            std::max(10, static_cast<int>(std::lround(share * n_samples)));
    }

    Rng rng(seed, rng_stream::kFidelity);
    int total_hits = 0, total_drawn = 0;
    for (std::size_t r = 0; r < k; ++r) {
        const Rule& rule = ruleset.rules[r];
        std::vector<std::vector<double>> points(
            static_cast<std::size_t>(result.samples_per_rule[r]));
        for (auto& x : points) {
            x.resize(rule.antecedent.size());
            for (std::size_t j = 0; j < x.size(); ++j) {
                x[j] = rng.uniform(rule.antecedent[j].lower, rule.antecedent[j].upper);
            }
        }
        const Posterior post = model.predict(points);
        int hits = 0;
        for (double m : post.mean) {
            if (rule.consequent.contains(m)) ++hits;
        }
        result.per_rule[r] = static_cast<double>(hits) / points.size();
        total_hits += hits;
        total_drawn += static_cast<int>(points.size());
    }
    result.mean = static_cast<double>(total_hits) / total_drawn;
    return result;
}

FidelityResult holdout_fidelity(const RuleSet& ruleset,
                                const std::vector<std::vector<double>>& inputs,
                                const std::vector<double>& values) {
    if (ruleset.rules.empty()) throw ConfigError("fidelity of an empty rule set is undefined");
    const std::size_t k = ruleset.rules.size();
    FidelityResult result;
    result.per_rule.assign(k, 0.0);
    result.samples_per_rule.assign(k, 0);
    std::vector<int> hits(k, 0);
    int total_hits = 0, total_counted = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        for (std::size_t r = 0; r < k; ++r) {
            if (!ruleset.rules[r].antecedent_contains(inputs[i])) continue;
            ++result.samples_per_rule[r];
            ++total_counted;
            if (ruleset.rules[r].consequent.contains(values[i])) {
                ++hits[r];
                ++total_hits;
            }
        }
    }
    for (std::size_t r = 0; r < k; ++r) {
        result.per_rule[r] = result.samples_per_rule[r] > 0
                                 ? static_cast<double>(hits[r]) / result.samples_per_rule[r]
                                 : 1.0;
    }
    result.mean = total_counted > 0 ? static_cast<double>(total_hits) / total_counted : 1.0;
    return result;
}

double completeness(const RuleSet& ruleset, const SearchSpace& space) {
    std::size_t longest = 0;
    for (const Rule& rule : ruleset.rules) {
        std::size_t dims = 0;
        for (std::size_t j = 0; j < rule.antecedent.size(); ++j) {
            if (rule.antecedent[j].lower > space.lower[j] ||
                rule.antecedent[j].upper < space.upper[j]) {
                ++dims;
            }
        }
        longest = std::max(longest, dims);
    }
    return static_cast<double>(longest) / static_cast<double>(space.dims());
}

namespace {

int count_minima_inside(const RuleSet& ruleset, const std::vector<KnownMinimum>& minima,
                        double alpha_floor) {
    int hit = 0;
    for (const KnownMinimum& m : minima) {
        for (const Rule& rule : ruleset.rules) {
            if (rule.interestingness > alpha_floor && rule.antecedent_contains(m.location)) {
                ++hit;
                break;
            }
        }
    }
    return hit;
}

/// Shared explanation stage: cluster, build rules, score, filter.
RuleSet explain_dataset(const ExplanationDataset& dataset, const RunConfig& config,
                        double f_best) {
    const LinkageTree tree = build_linkage(dataset, config.linkage, config.distance);
    Clustering clusters;
    if (config.pruning == PruningKind::Variance) {
        clusters = variance_prune(tree, dataset, config.t_s, config.min_cluster_size);
    } else {
        double cut = config.t_dist;
        if (cut < 0.0) {
            TunerContext ctx;
            ctx.dataset = &dataset;
            ctx.tree = &tree;
            ctx.f_best = f_best;
            ctx.t_alpha = config.t_alpha;
            ctx.weights = config.weights;
            ctx.min_cluster_size = config.min_cluster_size;
            cut = scalar_tune_distance(ctx);
        }
        clusters = distance_prune(tree, cut, config.min_cluster_size);
    }
    RuleSet rules = construct_rules(clusters, dataset);
    score_rules(rules, dataset, f_best, config.weights);
    return rank_and_filter(std::move(rules), config.t_alpha);
}

} // namespace

EvalReport evaluate_gp_mode(const Objective& objective, const RunConfig& config) {
    BoOptions bo_opts;
    bo_opts.iterations = config.bo_iterations;
    bo_opts.seed = config.seed;
    const BoTrace trace = run_bo(objective, bo_opts);
    if (trace.aborted) throw NumericError("optimization aborted: " + trace.abort_reason);

    const ExplanationDataset dataset = generate_dataset(
        trace.model, objective.space(), config.explanation_samples, config.seed);
    const RuleSet rules = explain_dataset(dataset, config, trace.incumbent_value);

    EvalReport report;
    report.mode = "gp-surrogate";
    report.problem = objective.name();
    report.seed = config.seed;
    report.rule_count = static_cast<int>(rules.rules.size());
    report.completeness = completeness(rules, objective.space());
    report.minima_inside_rules = count_minima_inside(rules, objective.known_minima(), -1.0);
    if (!rules.rules.empty()) {
        const FidelityResult f =
            fidelity(rules, trace.model, config.fidelity_samples, config.seed);
        report.mean_fidelity = f.mean;
        report.per_rule_fidelity = f.per_rule;
    }
    return report;
}

EvalReport evaluate_gt_mode(const Objective& objective, const RunConfig& config, int gt_samples) {
    if (!objective.cheap_ground_truth()) {
        throw ConfigError("ground-truth mode needs a cheap objective; '" + objective.name() +
                          "' is too expensive");
    }
    Rng rng(config.seed, rng_stream::kGroundTruth);
    std::vector<std::vector<double>> inputs;
    std::vector<double> values;
    inputs.reserve(gt_samples);
    values.reserve(gt_samples);
    for (int i = 0; i < gt_samples; ++i) {
        inputs.push_back(objective.space().sample(rng));
        values.push_back(objective(inputs.back()));
    }
    const int train_n = (gt_samples * 3) / 4;
    std::vector<std::vector<double>> train_x(inputs.begin(), inputs.begin() + train_n);
    std::vector<double> train_y(values.begin(), values.begin() + train_n);
    std::vector<std::vector<double>> hold_x(inputs.begin() + train_n, inputs.end());
    std::vector<double> hold_y(values.begin() + train_n, values.end());

    const ExplanationDataset dataset =
        dataset_from_values(std::move(train_x), std::move(train_y), objective.space());
    const double f_best = *std::min_element(dataset.mean.begin(), dataset.mean.end());
    RuleSet rules = explain_dataset(dataset, config, f_best);
    for (Rule& rule : rules.rules) {  // exact values sit on the consequent boundary
        rule.consequent.lower -= 1e-6;
        rule.consequent.upper += 1e-6;
    }

    EvalReport report;
    report.mode = "ground-truth";
    report.problem = objective.name();
    report.seed = config.seed;
    report.rule_count = static_cast<int>(rules.rules.size());
    report.completeness = completeness(rules, objective.space());
    report.minima_inside_rules = count_minima_inside(rules, objective.known_minima(), -1.0);
    if (!rules.rules.empty()) {
        const FidelityResult f = holdout_fidelity(rules, hold_x, hold_y);
        report.mean_fidelity = f.mean;
        report.per_rule_fidelity = f.per_rule;
    }
    return report;
}

GtVsGpResult run_gt_vs_gp(const Objective& objective, const RunConfig& config) {
    return {evaluate_gp_mode(objective, config), evaluate_gt_mode(objective, config)};
}

AblationGrid run_clustering_ablation(const Objective& objective, const RunConfig& config,
                                     bool full_grid) {
    if (objective.known_minima().empty()) {
        throw ConfigError("clustering ablation needs a problem with known minima");
    }
    BoOptions bo_opts;
    bo_opts.iterations = config.bo_iterations;
    bo_opts.seed = config.seed;
    const BoTrace trace = run_bo(objective, bo_opts);
    if (trace.aborted) throw NumericError("optimization aborted: " + trace.abort_reason);
    const ExplanationDataset dataset = generate_dataset(
        trace.model, objective.space(), config.explanation_samples, config.seed);

    const LinkageMethod all_linkages[] = {
        LinkageMethod::Ward,     LinkageMethod::Complete, LinkageMethod::Average,
        LinkageMethod::Single,   LinkageMethod::Weighted, LinkageMethod::Centroid,
        LinkageMethod::Median};
    const DistanceMetric all_distances[] = {DistanceMetric::Euclidean,
                                            DistanceMetric::Mahalanobis};

    std::vector<AblationRow> specs;
    const auto add_spec = [&specs](LinkageMethod l, DistanceMetric m, PruningKind p) {
        AblationRow row;
        row.linkage = l;
        row.distance = m;
        row.pruning = p;
        specs.push_back(std::move(row));
    };
    for (LinkageMethod l : all_linkages) {
        for (DistanceMetric m : all_distances) {
            add_spec(l, m, PruningKind::Variance);
            if (full_grid) add_spec(l, m, PruningKind::Distance);
        }
    }
    if (!full_grid) {
        add_spec(LinkageMethod::Ward, DistanceMetric::Euclidean, PruningKind::Distance);
        add_spec(LinkageMethod::Complete, DistanceMetric::Euclidean, PruningKind::Distance);
    }

    AblationGrid grid;
    for (AblationRow row : specs) {
        try {
            const LinkageTree tree = build_linkage(dataset, row.linkage, row.distance);
            Clustering clusters;
            if (row.pruning == PruningKind::Variance) {
                clusters = variance_prune(tree, dataset, config.t_s, config.min_cluster_size);
            } else {
                double cut = config.t_dist;
                if (cut < 0.0) {
                    TunerContext ctx;
                    ctx.dataset = &dataset;
                    ctx.tree = &tree;
                    ctx.f_best = trace.incumbent_value;
                    ctx.t_alpha = config.t_alpha;
                    ctx.weights = config.weights;
                    ctx.min_cluster_size = config.min_cluster_size;
                    cut = scalar_tune_distance(ctx);
                }
                clusters = distance_prune(tree, cut, config.min_cluster_size);
            }
            row.initial_rules = static_cast<int>(clusters.clusters.size());
            RuleSet all_rules = construct_rules(clusters, dataset);
            score_rules(all_rules, dataset, trace.incumbent_value, config.weights);

            RuleSet high;
            for (const Rule& r : all_rules.rules) {
                if (r.interestingness > 0.6) {
                    high.rules.push_back(r);
                    row.mean_confidence += r.metrics.confidence;
                } else if (r.interestingness >= 0.4) {
                    ++row.moderate_rules;
                }
            }
            row.high_rules = static_cast<int>(high.rules.size());
            if (row.high_rules > 0) {
                row.mean_confidence /= row.high_rules;
                row.fidelity =
                    fidelity(high, trace.model, config.fidelity_samples, config.seed).mean;
                row.minima_hit = count_minima_inside(high, objective.known_minima(), 0.6);
            }
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        grid.rows.push_back(std::move(row));
    }
    return grid;
}

void write_eval_csv(const std::vector<EvalReport>& reports, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out.precision(10);
    out << "problem,mode,seed,rule_count,mean_fidelity,completeness,minima_inside_rules\n";
    for (const EvalReport& r : reports) {
        out << r.problem << ',' << r.mode << ',' << r.seed << ',' << r.rule_count << ','
            << r.mean_fidelity << ',' << r.completeness << ',' << r.minima_inside_rules << '\n';
    }
}

void write_ablation_csv(const AblationGrid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out.precision(10);
    out << "linkage,distance,pruning,initial_rules,high_rules,moderate_rules,mean_confidence,"
           "fidelity,minima_hit,failed,error\n";
    for (const AblationRow& r : grid.rows) {
        out << to_string(r.linkage) << ',' << to_string(r.distance) << ',' << to_string(r.pruning)
            << ',' << r.initial_rules << ',' << r.high_rules << ',' << r.moderate_rules << ','
            << r.mean_confidence << ',' << r.fidelity << ',' << r.minima_hit << ','
            << (r.failed ? 1 : 0) << ',' << r.error << '\n';
    }
}

std::string ablation_to_text(const AblationGrid& grid) {
    std::ostringstream out;
    out << std::left << std::setw(10) << "linkage" << std::setw(13) << "distance" << std::setw(10)
        << "pruning" << std::right << std::setw(9) << "initial" << std::setw(7) << "high"
        << std::setw(10) << "moderate" << std::setw(12) << "confidence" << std::setw(10)
        << "fidelity" << std::setw(8) << "minima" << '\n';
    out << std::setprecision(3) << std::fixed;
    for (const AblationRow& r : grid.rows) {
        out << std::left << std::setw(10) << to_string(r.linkage) << std::setw(13)
            << to_string(r.distance) << std::setw(10) << to_string(r.pruning) << std::right;
        if (r.failed) {
            out << "  failed: " << r.error << '\n';
            continue;
        }
        out << std::setw(9) << r.initial_rules << std::setw(7) << r.high_rules << std::setw(10)
            << r.moderate_rules << std::setw(12) << r.mean_confidence << std::setw(10)
            << r.fidelity << std::setw(8) << r.minima_hit << '\n';
    }
    return out.str();
}

} // namespace tnt
