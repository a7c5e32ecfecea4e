#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tnt/bo.hpp"
#include "tnt/config.hpp"
#include "tnt/dataset.hpp"
#include "tnt/gp.hpp"
#include "tnt/problems.hpp"
#include "tnt/rules.hpp"

namespace tnt {

struct FidelityResult {
    double mean = 0.0;                  ///< total hits / total samples
    std::vector<double> per_rule;
    std::vector<int> samples_per_rule;
};

/// Draws points uniformly inside the rule antecedents (allocated proportional
/// to antecedent volume, at least 10 per rule) and scores the fraction whose
/// predicted mean lands inside the consequent.
FidelityResult fidelity(const RuleSet& ruleset, const GpModel& model, int n_samples = 300,
                        std::uint64_t seed = 0);

/// Holdout variant: scores direct objective values against the consequents of
/// whichever rules contain each held-out point.
FidelityResult holdout_fidelity(const RuleSet& ruleset,
                                const std::vector<std::vector<double>>& inputs,
                                const std::vector<double>& values);

/// Longest antecedent (dimensions narrower than the full space) over the
/// number of problem parameters.
double completeness(const RuleSet& ruleset, const SearchSpace& space);

/// One evaluated explanation run in either mode, Table-1-style.
struct EvalReport {
    std::string mode;  ///< "gp-surrogate" or "ground-truth"
    std::string problem;
    std::uint64_t seed = 0;
    int rule_count = 0;
    double mean_fidelity = 0.0;
    double completeness = 0.0;
    std::vector<double> per_rule_fidelity;
    int minima_inside_rules = 0;  ///< known minima contained in some retained rule
};

/// Standard surrogate-based run: optimize, explain, score, evaluate.
EvalReport evaluate_gp_mode(const Objective& objective, const RunConfig& config);

/// Ground-truth run: 1000 direct samples, 75/25 train/holdout split, clusters
/// built on exact values (std = 0, consequents widened by 1e-6), fidelity on
/// the holdout. No optimizer involved.
EvalReport evaluate_gt_mode(const Objective& objective, const RunConfig& config,
                            int gt_samples = 1000);

struct GtVsGpResult {
    EvalReport gp;
    EvalReport gt;
};

GtVsGpResult run_gt_vs_gp(const Objective& objective, const RunConfig& config);

/// One clustering configuration's outcome on a shared explanation dataset.
struct AblationRow {
    LinkageMethod linkage = LinkageMethod::Ward;
    DistanceMetric distance = DistanceMetric::Euclidean;
    PruningKind pruning = PruningKind::Variance;
    int initial_rules = 0;     ///< clusters before any interestingness filter
    int high_rules = 0;        ///< alpha > 0.6
    int moderate_rules = 0;    ///< 0.4 <= alpha < 0.6
    double mean_confidence = 0.0;  ///< over the high subset
    double fidelity = 0.0;         ///< of the high subset
    int minima_hit = 0;            ///< known minima inside some high rule
    bool failed = false;
    std::string error;
};

struct AblationGrid {
    std::vector<AblationRow> rows;
};

/// The 16-row grid: every linkage x distance with variance pruning, plus
/// ward/complete + euclidean with distance pruning. `full_grid` expands to all
/// 28 combinations.
AblationGrid run_clustering_ablation(const Objective& objective, const RunConfig& config,
                                     bool full_grid = false);

void write_eval_csv(const std::vector<EvalReport>& reports, const std::string& path);
void write_ablation_csv(const AblationGrid& grid, const std::string& path);
std::string ablation_to_text(const AblationGrid& grid);

} // namespace tnt
