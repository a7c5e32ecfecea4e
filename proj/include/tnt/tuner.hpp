#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tnt/dataset.hpp"
#include "tnt/linkage.hpp"
#include "tnt/rules.hpp"

namespace tnt {

/// One evaluated clustering threshold with its explanation-quality objectives
/// (all maximized; aggregates are over the rules retained at t_alpha).
struct TsCandidate {
    double t_s = 0.0;
    double mean_support = 0.0;
    double mean_relevance = 0.0;
    int rule_count = 0;
    double mean_alpha = 0.0;  ///< bookkeeping for the scalar objective

    std::vector<double> objectives() const {
        return {mean_support, mean_relevance, static_cast<double>(rule_count)};
    }
};

struct ParetoFront {
    std::vector<TsCandidate> candidates;
};

/// Everything a threshold evaluation needs; dataset and tree are built once
/// and only re-pruned, so tuning never re-clusters.
struct TunerContext {
    const ExplanationDataset* dataset = nullptr;
    const LinkageTree* tree = nullptr;
    double f_best = 0.0;
    double t_alpha = 0.4;
    Weights weights;
    int min_cluster_size = kDefaultMinClusterSize;
};

/// Prune -> construct -> score -> filter at one threshold.
TsCandidate evaluate_ts(double t_s, const TunerContext& ctx);

/// NSGA-II over t_s in [0,1] maximizing (mean support, mean relevance, rule
/// count). Returns the front and the chosen candidate: most rules, ties broken
/// by higher mean relevance, then smaller t_s.
std::pair<ParetoFront, TsCandidate> nsga2_tune(const TunerContext& ctx, int generations = 25,
                                               int population = 20, std::uint64_t seed = 0);

/// Grid scan of t_s maximizing the mean interestingness of retained rules;
/// ties take the smaller threshold.
double scalar_tune(const TunerContext& ctx, int grid_points = 101);

/// Same grid scan for the dendrogram cut height used by distance pruning; the
/// grid spans [0, largest merge distance].
double scalar_tune_distance(const TunerContext& ctx, int grid_points = 101);

void write_front_csv(const ParetoFront& front, const std::string& path);

} // namespace tnt
