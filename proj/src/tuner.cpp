#include "tnt/tuner.hpp"

#include <algorithm>
#include <fstream>

#include "tnt/errors.hpp"
#include "tnt/nsga2.hpp"
#include "tnt/prune.hpp"

namespace tnt {

namespace {

/// Shared scoring tail of the tuner: rules from the given clusters, filtered
/// at t_alpha, aggregated into candidate objectives.
TsCandidate evaluate_clustering(double threshold, const Clustering& clusters,
                                const TunerContext& ctx) {
    TsCandidate cand;
    cand.t_s = threshold;
    if (clusters.clusters.empty()) return cand;
    RuleSet rules = construct_rules(clusters, *ctx.dataset);
    score_rules(rules, *ctx.dataset, ctx.f_best, ctx.weights);
    rules = rank_and_filter(std::move(rules), ctx.t_alpha);
    cand.rule_count = static_cast<int>(rules.rules.size());
    if (cand.rule_count == 0) return cand;
    for (const Rule& r : rules.rules) {
        cand.mean_support += r.metrics.support;
        cand.mean_relevance += r.metrics.relevance_norm;
        cand.mean_alpha += r.interestingness;
    }
    cand.mean_support /= cand.rule_count;
    cand.mean_relevance /= cand.rule_count;
    cand.mean_alpha /= cand.rule_count;
    return cand;
}

} // namespace

TsCandidate evaluate_ts(double t_s, const TunerContext& ctx) {
    if (!ctx.dataset || !ctx.tree) throw ConfigError("tuner context is incomplete");
    const Clustering clusters = variance_prune(*ctx.tree, *ctx.dataset, t_s, ctx.min_cluster_size);
    return evaluate_clustering(t_s, clusters, ctx);
}

std::pair<ParetoFront, TsCandidate> nsga2_tune(const TunerContext& ctx, int generations,
                                               int population, std::uint64_t seed) {
    Nsga2Options opts;
    opts.generations = generations;
    opts.population = population;
    opts.seed = seed;
    const auto evaluate = [&](const std::vector<double>& genes) {
        return evaluate_ts(genes[0], ctx).objectives();
    };
    const auto front_individuals = nsga2_maximize(evaluate, {0.0}, {1.0}, opts);

    ParetoFront front;
    front.candidates.reserve(front_individuals.size());
    for (const auto& ind : front_individuals) {
        front.candidates.push_back(evaluate_ts(ind.genes[0], ctx));
    }
    std::sort(front.candidates.begin(), front.candidates.end(),
              [](const TsCandidate& a, const TsCandidate& b) { return a.t_s < b.t_s; });

    TsCandidate chosen;
    bool have = false;
    for (const TsCandidate& c : front.candidates) {
        const bool better = !have || c.rule_count > chosen.rule_count ||
                            (c.rule_count == chosen.rule_count &&
                             (c.mean_relevance > chosen.mean_relevance ||
                              (c.mean_relevance == chosen.mean_relevance && c.t_s < chosen.t_s)));
        if (better) {
            chosen = c;
            have = true;
        }
    }
    return {std::move(front), chosen};
}

double scalar_tune(const TunerContext& ctx, int grid_points) {
    if (grid_points < 2) throw ConfigError("scalar tuner grid needs at least 2 points");
    double best_ts = 0.0;
    double best_alpha = -1.0;
    for (int i = 0; i < grid_points; ++i) {
        const double t_s = static_cast<double>(i) / (grid_points - 1);
        const TsCandidate cand = evaluate_ts(t_s, ctx);
        const double score = cand.rule_count > 0 ? cand.mean_alpha : 0.0;
        if (score > best_alpha) {
            best_alpha = score;
            best_ts = t_s;
        }
    }
    return best_ts;
}

double scalar_tune_distance(const TunerContext& ctx, int grid_points) {
    if (grid_points < 2) throw ConfigError("scalar tuner grid needs at least 2 points");
    if (!ctx.dataset || !ctx.tree) throw ConfigError("tuner context is incomplete");
    double max_dist = 0.0;
    for (const MergeStep& m : ctx.tree->merges) max_dist = std::max(max_dist, m.distance);
    double best_t = 0.0;
    double best_alpha = -1.0;
    for (int i = 0; i < grid_points; ++i) {
        const double t = max_dist * static_cast<double>(i) / (grid_points - 1);
        const Clustering clusters = distance_prune(*ctx.tree, t, ctx.min_cluster_size);
        const TsCandidate cand = evaluate_clustering(t, clusters, ctx);
        const double score = cand.rule_count > 0 ? cand.mean_alpha : 0.0;
        if (score > best_alpha) {
            best_alpha = score;
            best_t = t;
        }
    }
    return best_t;
}

void write_front_csv(const ParetoFront& front, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out.precision(17);
    out << "t_s,mean_support,mean_relevance,rule_count,mean_alpha\n";
    for (const TsCandidate& c : front.candidates) {
        out << c.t_s << ',' << c.mean_support << ',' << c.mean_relevance << ',' << c.rule_count
            << ',' << c.mean_alpha << '\n';
    }
}

} // namespace tnt
