#include "tnt/rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tnt/errors.hpp"
#include "tnt/stats.hpp"

namespace tnt {

bool Rule::antecedent_contains(const std::vector<double>& x) const {
    for (std::size_t j = 0; j < antecedent.size(); ++j) {
        if (!antecedent[j].contains(x[j])) return false;
    }
    return true;
}

double Rule::antecedent_volume() const {
    double v = 1.0;
    for (const Interval& iv : antecedent) v *= std::max(iv.width(), 0.0);
    return v;
}

void Weights::validate() const {
    if (coverage < 0 || support < 0 || confidence < 0 || relevance < 0) {
        throw ConfigError("interestingness weights must be non-negative");
    }
    const double sum = coverage + support + confidence + relevance;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("interestingness weights must sum to 1");
    }
}

std::string interest_tag(double alpha) {
    if (alpha >= 0.6) return "HIGH";
    if (alpha >= 0.4) return "MODERATE";
    return "LOW";
}

RuleSet construct_rules(const Clustering& clustering, const ExplanationDataset& dataset) {
    RuleSet set;
    set.rules.reserve(clustering.clusters.size());
    const std::size_t d = dataset.dims();
    for (const std::vector<int>& members : clustering.clusters) {
        if (members.empty()) throw ConfigError("cannot build a rule from an empty cluster");
        Rule rule;
        rule.member_indices = members;
        rule.antecedent.assign(d, {std::numeric_limits<double>::infinity(),
                                   -std::numeric_limits<double>::infinity()});
        rule.consequent = {std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity()};
        for (int idx : members) {
            const auto i = static_cast<std::size_t>(idx);
            for (std::size_t j = 0; j < d; ++j) {
                rule.antecedent[j].lower = std::min(rule.antecedent[j].lower, dataset.inputs[i][j]);
                rule.antecedent[j].upper = std::max(rule.antecedent[j].upper, dataset.inputs[i][j]);
            }
            rule.consequent.lower = std::min(rule.consequent.lower,
                                             dataset.mean[i] - 2.0 * dataset.std[i]);
            rule.consequent.upper = std::max(rule.consequent.upper,
                                             dataset.mean[i] + 2.0 * dataset.std[i]);
        }
        for (std::size_t j = 0; j < d; ++j) {
            if (rule.antecedent[j].width() <= 0.0) {
                const double half = 0.5e-9 * dataset.space.range(j);
                rule.antecedent[j].lower -= half;
                rule.antecedent[j].upper += half;
            }
        }
        set.rules.push_back(std::move(rule));
    }
    return set;
}

double coverage(const Rule& rule, const ExplanationDataset& dataset) {
    if (dataset.size() == 0) throw ConfigError("coverage of an empty dataset is undefined");
    std::size_t hits = 0;
    for (const auto& x : dataset.inputs) {
        if (rule.antecedent_contains(x)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(dataset.size());
}

double support(const Rule& rule, const ExplanationDataset& dataset) {
    if (dataset.size() == 0) throw ConfigError("support of an empty dataset is undefined");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (rule.antecedent_contains(dataset.inputs[i]) && rule.consequent.contains(dataset.mean[i])) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(dataset.size());
}

double confidence(double support_value, double coverage_value) {
    return coverage_value > 0.0 ? support_value / coverage_value : 0.0;
}

double interestingness(const RuleMetrics& m, const Weights& w) {
    return w.coverage * m.coverage + w.support * m.support + w.confidence * m.confidence +
           w.relevance * m.relevance_norm;
}

void score_rules(RuleSet& ruleset, const ExplanationDataset& dataset, double f_best,
                 const Weights& weights) {
    weights.validate();
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    // The density's std is floored at 3.5% of the prediction spread. Without
    // the floor a surrogate that is razor-sharp around the incumbent assigns
    // near-zero density to its own neighbourhood (tiny sigma turns any
    // curvature offset into a huge z-score), and zero-std datasets built from
    // direct evaluations would degenerate entirely.
    const double sigma_floor = std::max(0.035 * std::sqrt(population_variance(dataset.mean)),
                                        1e-12);
    for (Rule& rule : ruleset.rules) {
        rule.metrics.coverage = coverage(rule, dataset);
        rule.metrics.support = support(rule, dataset);
        rule.metrics.confidence = confidence(rule.metrics.support, rule.metrics.coverage);
        // Relevance looks only at rows conforming to the WHOLE rule (inside
        // both boxes); a wide antecedent that merely overlaps the incumbent's
        // region spatially cannot inherit its likelihood. Member rows always
        // conform, so every constructed rule gets a finite raw score.
        double best = kNegInf;
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            if (!rule.antecedent_contains(dataset.inputs[i]) ||
                !rule.consequent.contains(dataset.mean[i])) {
                continue;
            }
            const double sigma = std::max(dataset.std[i], sigma_floor);
            best = std::max(best, gaussian_log_density(f_best, dataset.mean[i], sigma * sigma));
        }
        rule.metrics.relevance_raw = best;
    }

    // Min-max the raw scores on the likelihood scale: densities are shifted by
    // the best log-density before exponentiating, so the spread of the very
    // unlikely rules cannot wash out the contrast near the top. A rule whose
    // region cannot plausibly produce the incumbent value scores ~0 even when
    // its log-density is not the worst of the set.
    double lo = std::numeric_limits<double>::infinity(), hi = kNegInf;
    for (const Rule& rule : ruleset.rules) {
        if (std::isfinite(rule.metrics.relevance_raw)) {
            lo = std::min(lo, rule.metrics.relevance_raw);
            hi = std::max(hi, rule.metrics.relevance_raw);
        }
    }
    for (Rule& rule : ruleset.rules) {
        const double raw = rule.metrics.relevance_raw;
        if (!std::isfinite(raw)) {
            rule.metrics.relevance_norm = 0.0;
        } else if (hi > lo) {
            const double worst = std::exp(lo - hi);  // underflows to 0 harmlessly
            rule.metrics.relevance_norm = (std::exp(raw - hi) - worst) / (1.0 - worst);
        } else {
            rule.metrics.relevance_norm = 1.0;
        }
        rule.interestingness = interestingness(rule.metrics, weights);
    }
}

RuleSet rank_and_filter(RuleSet ruleset, double t_alpha) {
    std::vector<std::size_t> order(ruleset.rules.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Rule& ra = ruleset.rules[a];
        const Rule& rb = ruleset.rules[b];
        if (ra.interestingness != rb.interestingness) {
            return ra.interestingness > rb.interestingness;
        }
        if (ra.metrics.coverage != rb.metrics.coverage) {
            return ra.metrics.coverage < rb.metrics.coverage;
        }
        return a < b;
    });
    RuleSet out;
    out.t_alpha_used = t_alpha;
    for (std::size_t i : order) {
        if (ruleset.rules[i].interestingness >= t_alpha) {
            out.rules.push_back(std::move(ruleset.rules[i]));
        }
    }
    return out;
}

std::string rules_to_text(const RuleSet& ruleset, const SearchSpace& space) {
    std::ostringstream out;
    out.precision(6);
    if (ruleset.rules.empty()) {
        out << "(no rules retained at t_alpha=" << ruleset.t_alpha_used << ")\n";
        return out.str();
    }
    for (std::size_t r = 0; r < ruleset.rules.size(); ++r) {
        const Rule& rule = ruleset.rules[r];
        out << "rule " << (r + 1) << ": IF ";
        for (std::size_t j = 0; j < rule.antecedent.size(); ++j) {
            if (j > 0) out << " AND ";
            out << space.names[j] << " in [" << rule.antecedent[j].lower << ", "
                << rule.antecedent[j].upper << "]";
        }
        out << " THEN f in [" << rule.consequent.lower << ", " << rule.consequent.upper << "]";
        out << "  (alpha=" << rule.interestingness << ", " << interest_tag(rule.interestingness)
            << ", covr=" << rule.metrics.coverage << ", supp=" << rule.metrics.support
            << ", conf=" << rule.metrics.confidence << ", rel=" << rule.metrics.relevance_norm
            << ")\n";
    }
    return out.str();
}

} // namespace tnt
