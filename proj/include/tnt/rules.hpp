#pragma once

#include <string>
#include <vector>

#include "tnt/dataset.hpp"
#include "tnt/prune.hpp"

namespace tnt {

struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double v) const { return v >= lower && v <= upper; }
    double width() const { return upper - lower; }
};

struct RuleMetrics {
    double coverage = 0.0;        ///< fraction of dataset rows inside the antecedent
    double support = 0.0;         ///< fraction jointly inside antecedent and consequent
    double confidence = 0.0;      ///< support / coverage (0 when coverage is 0)
    double relevance_raw = 0.0;   ///< best log-density of the incumbent value over covered rows
    double relevance_norm = 0.0;  ///< min-max of raw across the rule set
};

/// Box rule: IF x inside the antecedent THEN the objective lies in the consequent.
struct Rule {
    std::vector<Interval> antecedent;  ///< one interval per input dimension
    Interval consequent;
    std::vector<int> member_indices;   ///< dataset rows of the source cluster
    RuleMetrics metrics;
    double interestingness = 0.0;

    bool antecedent_contains(const std::vector<double>& x) const;
    double antecedent_volume() const;
};

/// Weights of the interestingness sum; must total 1.
struct Weights {
    double coverage = 0.2;
    double support = 0.2;
    double confidence = 0.1;
    double relevance = 0.5;

    void validate() const;
};

struct RuleSet {
    std::vector<Rule> rules;
    double t_alpha_used = 0.0;  ///< threshold applied by rank_and_filter (0 = unfiltered)
};

/// Per-band label: HIGH for alpha >= 0.6, MODERATE for [0.4, 0.6), LOW below.
std::string interest_tag(double alpha);

/// One rule per cluster: antecedent = per-dimension min/max over the member
/// points (degenerate dimensions widened by 1e-9 of the space range);
/// consequent = [min(mu - 2 sigma), max(mu + 2 sigma)] over the members.
RuleSet construct_rules(const Clustering& clustering, const ExplanationDataset& dataset);

double coverage(const Rule& rule, const ExplanationDataset& dataset);
double support(const Rule& rule, const ExplanationDataset& dataset);
double confidence(double support_value, double coverage_value);
double interestingness(const RuleMetrics& metrics, const Weights& weights);

/// Fills every rule's metrics and interestingness. Relevance of a rule is the
/// maximum over rows covered by both its boxes of log N(f_best | mu, sigma^2),
/// then min-max normalized across the set (a lone rule gets 1; rules covering
/// nothing get 0).
void score_rules(RuleSet& ruleset, const ExplanationDataset& dataset, double f_best,
                 const Weights& weights = {});

/// Sorts by descending interestingness (ties: smaller coverage, then original
/// order) and drops rules below t_alpha.
RuleSet rank_and_filter(RuleSet ruleset, double t_alpha);

/// "IF x1 in [a,b] AND ... THEN f in [l,u]  (alpha=..., TAG)" listing, one rule
/// per block, ordered as stored.
std::string rules_to_text(const RuleSet& ruleset, const SearchSpace& space);

} // namespace tnt
