#pragma once

#include <string>
#include <vector>

#include "tnt/dataset.hpp"
#include "tnt/gp.hpp"
#include "tnt/rules.hpp"

namespace tnt {

/// Per-dimension tuning advice for one rule: how strongly the surrogate's
/// mean reacts to each input inside the rule's region, and whether that
/// dimension is worth adjusting.
struct SensitivityReport {
    std::vector<double> scores;       ///< non-negative, sum to 1 unless all zero
    std::vector<bool> tune;           ///< TUNE label per dimension
    std::vector<Interval> suggested;  ///< the rule's antecedent for TUNE dims
};

/// score_j = mean |d mu / d x_j| over the dataset points inside the rule's
/// antecedent, by central finite differences with step 1e-4 of the dimension
/// range, normalized to sum 1. A dimension is TUNE when its share is at least
/// half the uniform share 1/d.
SensitivityReport sensitivity(const Rule& rule, const GpModel& model,
                              const ExplanationDataset& dataset);

/// "TUNE: x1 in [a,b], ... | NOTUNE: x2" block for one rule.
std::string sensitivity_to_text(const SensitivityReport& report, const SearchSpace& space);

} // namespace tnt
