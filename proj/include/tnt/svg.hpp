#pragma once

#include <string>
#include <vector>

#include "tnt/dataset.hpp"
#include "tnt/problems.hpp"
#include "tnt/rules.hpp"

namespace tnt {

/// Renders the explanation dataset (first two dimensions) as a scatter plot
/// coloured by posterior mean, with rule antecedents drawn as rectangles: red
/// for highly interesting rules (alpha >= 0.6), amber for moderate ones.
/// Known minima are drawn as crosses and the incumbent as a diamond.
std::string render_svg(const RuleSet& ruleset, const ExplanationDataset& dataset,
                       const std::vector<KnownMinimum>& known_minima,
                       const std::vector<double>& incumbent);

} // namespace tnt
