#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tnt/dataset.hpp"
#include "tnt/errors.hpp"
#include "tnt/prune.hpp"
#include "tnt/rules.hpp"
#include "tnt/search_space.hpp"
#include "tnt/stats.hpp"

namespace {

/// 200 rows on a 1-d grid with values equal to the coordinate: membership
/// counts become exact fractions.
tnt::ExplanationDataset line_dataset() {
    std::vector<std::vector<double>> inputs;
    std::vector<double> values;
    for (int i = 0; i < 200; ++i) {
        const double x = (i + 0.5) / 200.0;
        inputs.push_back({x});
        values.push_back(x);
    }
    return tnt::dataset_from_values(std::move(inputs), std::move(values),
                                    tnt::make_space({"x1"}, {0.0}, {1.0}));
}

tnt::Rule box_rule(std::vector<tnt::Interval> antecedent, tnt::Interval consequent) {
    tnt::Rule rule;
    rule.antecedent = std::move(antecedent);
    rule.consequent = consequent;
    return rule;
}

} // namespace

TEST_CASE("interval basics") {
    const tnt::Interval iv{-1.0, 2.0};
    CHECK(iv.contains(-1.0));
    CHECK(iv.contains(2.0));
    CHECK(iv.contains(0.0));
    CHECK(!iv.contains(-1.0001));
    CHECK(!iv.contains(2.0001));
    CHECK(iv.width() == doctest::Approx(3.0));
}

TEST_CASE("rule construction from a two-point cluster") {
    // members {(1,2),(2,3)} with mu {0.5,0.7} and sigma {0.1,0.05}:
    // antecedent x1 in [1,2], x2 in [2,3]; consequent [0.3, 0.8]
    tnt::ExplanationDataset dataset;
    dataset.space = tnt::make_space({"x1", "x2"}, {0.0, 0.0}, {10.0, 10.0});
    dataset.inputs = {{1.0, 2.0}, {2.0, 3.0}};
    dataset.mean = {0.5, 0.7};
    dataset.std = {0.1, 0.05};
    dataset.mean_normalized = {0.0, 1.0};

    tnt::Clustering clustering;
    clustering.clusters = {{0, 1}};

    const tnt::RuleSet ruleset = tnt::construct_rules(clustering, dataset);
    REQUIRE(ruleset.rules.size() == 1);
    const tnt::Rule& rule = ruleset.rules[0];
    CHECK(rule.antecedent[0].lower == doctest::Approx(1.0));
    CHECK(rule.antecedent[0].upper == doctest::Approx(2.0));
    CHECK(rule.antecedent[1].lower == doctest::Approx(2.0));
    CHECK(rule.antecedent[1].upper == doctest::Approx(3.0));
    CHECK(rule.consequent.lower == doctest::Approx(0.3));
    CHECK(rule.consequent.upper == doctest::Approx(0.8));
    CHECK(rule.member_indices == std::vector<int>{0, 1});
    CHECK(rule.antecedent_contains({1.0, 2.0}));
    CHECK(rule.antecedent_contains({2.0, 3.0}));
    CHECK(rule.antecedent_volume() == doctest::Approx(1.0));
}

TEST_CASE("degenerate dimensions are widened to a sliver of the range") {
    tnt::ExplanationDataset dataset;
    dataset.space = tnt::make_space({"x1", "x2"}, {0.0, 0.0}, {10.0, 20.0});
    dataset.inputs = {{1.0, 7.0}, {2.0, 7.0}};  // x2 identical in both members
    dataset.mean = {0.0, 1.0};
    dataset.std = {0.0, 0.0};
    dataset.mean_normalized = {0.0, 1.0};

    tnt::Clustering clustering;
    clustering.clusters = {{0, 1}};
    const tnt::Rule rule = tnt::construct_rules(clustering, dataset).rules[0];

    CHECK(rule.antecedent[1].width() == doctest::Approx(1e-9 * 20.0));
    CHECK(rule.antecedent[1].contains(7.0));
    CHECK(rule.antecedent[0].width() == doctest::Approx(1.0));
}

TEST_CASE("member points always satisfy their own rule") {
    const tnt::ExplanationDataset dataset = line_dataset();
    tnt::Clustering clustering;
    clustering.clusters = {{0, 1, 2, 3, 4}, {50, 60, 70}, {199, 198, 120}};
    const tnt::RuleSet ruleset = tnt::construct_rules(clustering, dataset);
    REQUIRE(ruleset.rules.size() == 3);
    for (std::size_t r = 0; r < ruleset.rules.size(); ++r) {
        for (int member : clustering.clusters[r]) {
            CHECK(ruleset.rules[r].antecedent_contains(dataset.inputs[member]));
        }
    }
}

TEST_CASE("coverage counts antecedent membership") {
    const tnt::ExplanationDataset dataset = line_dataset();
    CHECK(tnt::coverage(box_rule({{0.0, 1.0}}, {0.0, 1.0}), dataset) == doctest::Approx(1.0));
    CHECK(tnt::coverage(box_rule({{2.0, 3.0}}, {0.0, 1.0}), dataset) == doctest::Approx(0.0));
    // [0, 0.25] holds exactly the 50 grid points below 0.25
    CHECK(tnt::coverage(box_rule({{0.0, 0.25}}, {0.0, 1.0}), dataset) == doctest::Approx(0.25));
}

TEST_CASE("support counts joint membership and never exceeds coverage") {
    const tnt::ExplanationDataset dataset = line_dataset();
    const double huge = std::numeric_limits<double>::max();

    CHECK(tnt::support(box_rule({{0.0, 0.25}}, {-huge, huge}), dataset) ==
          doctest::Approx(0.25));
    CHECK(tnt::support(box_rule({{2.0, 3.0}}, {-huge, huge}), dataset) == doctest::Approx(0.0));
    // antecedent keeps 50 rows, consequent [0, 0.2] keeps the 40 with value < 0.2
    CHECK(tnt::support(box_rule({{0.0, 0.25}}, {0.0, 0.2}), dataset) == doctest::Approx(0.2));

    for (double upper : {0.05, 0.1, 0.3, 0.7}) {
        const tnt::Rule rule = box_rule({{0.1, 0.6}}, {0.0, upper});
        CHECK(tnt::support(rule, dataset) <= tnt::coverage(rule, dataset) + 1e-12);
    }
}

TEST_CASE("confidence is the support to coverage ratio with a zero guard") {
    CHECK(tnt::confidence(0.09, 0.1) == doctest::Approx(0.9));
    CHECK(tnt::confidence(0.25, 0.25) == doctest::Approx(1.0));
    CHECK(tnt::confidence(0.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("interestingness weighted sum") {
    tnt::RuleMetrics metrics;
    metrics.coverage = 0.1;
    metrics.support = 0.09;
    metrics.confidence = 0.9;
    metrics.relevance_norm = 1.0;
    CHECK(tnt::interestingness(metrics, {}) == doctest::Approx(0.628));

    tnt::RuleMetrics ones;
    ones.coverage = ones.support = ones.confidence = ones.relevance_norm = 1.0;
    CHECK(tnt::interestingness(ones, {}) == doctest::Approx(1.0));
    CHECK(tnt::interestingness(tnt::RuleMetrics{}, {}) == doctest::Approx(0.0));

    SUBCASE("custom weights reweight the sum") {
        tnt::Weights w{0.25, 0.25, 0.25, 0.25};
        CHECK(tnt::interestingness(metrics, w) ==
              doctest::Approx(0.25 * (0.1 + 0.09 + 0.9 + 1.0)));
    }
    SUBCASE("invalid weights are rejected") {
        CHECK_THROWS_AS((tnt::Weights{0.2, 0.2, 0.1, 0.4}).validate(), tnt::ConfigError);
        CHECK_THROWS_AS((tnt::Weights{-0.1, 0.5, 0.1, 0.5}).validate(), tnt::ConfigError);
        CHECK_NOTHROW(tnt::Weights{}.validate());
    }
}

TEST_CASE("relevance scoring against the incumbent") {
    // quadratic landscape with its minimum at x = 0.3; the incumbent value is 0
    std::vector<std::vector<double>> inputs;
    std::vector<double> values;
    for (int i = 0; i < 100; ++i) {
        const double x = (i + 0.5) / 100.0;
        inputs.push_back({x});
        values.push_back((x - 0.3) * (x - 0.3));
    }
    const tnt::ExplanationDataset dataset = tnt::dataset_from_values(
        std::move(inputs), std::move(values), tnt::make_space({"x1"}, {0.0}, {1.0}));
    const double f_best = 0.0;

    tnt::RuleSet ruleset;
    ruleset.rules.push_back(box_rule({{0.2, 0.4}}, {-1.0, 1.0}));  // incumbent basin
    ruleset.rules.push_back(box_rule({{0.2, 0.4}}, {-1.0, 1.0}));  // identical twin
    ruleset.rules.push_back(box_rule({{0.7, 0.9}}, {-1.0, 1.0}));  // far shoulder
    tnt::score_rules(ruleset, dataset, f_best);

    const tnt::RuleMetrics& basin = ruleset.rules[0].metrics;
    const tnt::RuleMetrics& twin = ruleset.rules[1].metrics;
    const tnt::RuleMetrics& shoulder = ruleset.rules[2].metrics;

    SUBCASE("the incumbent's rule holds the maximum raw and normalized relevance") {
        CHECK(basin.relevance_raw > shoulder.relevance_raw);
        CHECK(basin.relevance_norm == doctest::Approx(1.0));
        CHECK(shoulder.relevance_norm == doctest::Approx(0.0));
    }
    SUBCASE("identical rules score identically") {
        CHECK(basin.relevance_raw == twin.relevance_raw);
        CHECK(basin.relevance_norm == twin.relevance_norm);
        CHECK(ruleset.rules[0].interestingness == ruleset.rules[1].interestingness);
    }
    SUBCASE("normalization reproduces the likelihood-scale min-max formula") {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const tnt::Rule& rule : ruleset.rules) {
            lo = std::min(lo, rule.metrics.relevance_raw);
            hi = std::max(hi, rule.metrics.relevance_raw);
        }
        for (const tnt::Rule& rule : ruleset.rules) {
            const double worst = std::exp(lo - hi);
            const double expect =
                (std::exp(rule.metrics.relevance_raw - hi) - worst) / (1.0 - worst);
            CHECK(rule.metrics.relevance_norm == doctest::Approx(expect).epsilon(1e-12));
        }
    }
    SUBCASE("normalized relevance is monotone in the raw score") {
        std::vector<std::pair<double, double>> pairs;
        for (const tnt::Rule& rule : ruleset.rules) {
            pairs.emplace_back(rule.metrics.relevance_raw, rule.metrics.relevance_norm);
        }
        std::sort(pairs.begin(), pairs.end());
        for (std::size_t i = 1; i < pairs.size(); ++i) {
            CHECK(pairs[i].second >= pairs[i - 1].second - 1e-15);
        }
    }
    SUBCASE("a rule covering no data points scores zero relevance") {
        tnt::RuleSet with_empty = ruleset;
        with_empty.rules.push_back(box_rule({{2.0, 3.0}}, {-1.0, 1.0}));
        tnt::score_rules(with_empty, dataset, f_best);
        const tnt::RuleMetrics& empty = with_empty.rules.back().metrics;
        CHECK(empty.coverage == doctest::Approx(0.0));
        CHECK(empty.confidence == doctest::Approx(0.0));
        CHECK(empty.relevance_norm == doctest::Approx(0.0));
        CHECK(!std::isfinite(empty.relevance_raw));
    }
    SUBCASE("a lone rule is normalized to 1") {
        tnt::RuleSet lone;
        lone.rules.push_back(box_rule({{0.2, 0.4}}, {-1.0, 1.0}));
        tnt::score_rules(lone, dataset, f_best);
        CHECK(lone.rules[0].metrics.relevance_norm == doctest::Approx(1.0));
    }
}

TEST_CASE("interest tags follow the alpha bands") {
    CHECK(tnt::interest_tag(1.0) == "HIGH");
    CHECK(tnt::interest_tag(0.6) == "HIGH");
    CHECK(tnt::interest_tag(0.59) == "MODERATE");
    CHECK(tnt::interest_tag(0.4) == "MODERATE");
    CHECK(tnt::interest_tag(0.39) == "LOW");
    CHECK(tnt::interest_tag(0.0) == "LOW");
}

TEST_CASE("ranking and filtering") {
    auto scored = [](double alpha, double coverage) {
        tnt::Rule rule;
        rule.antecedent = {{0.0, 1.0}};
        rule.consequent = {0.0, 1.0};
        rule.interestingness = alpha;
        rule.metrics.coverage = coverage;
        return rule;
    };

    tnt::RuleSet ruleset;
    ruleset.rules = {scored(0.5, 0.3), scored(0.7, 0.9), scored(0.3, 0.1)};

    SUBCASE("alpha 0.7/0.5/0.3 at threshold 0.4 keeps two, tagged HIGH and MODERATE") {
        const tnt::RuleSet kept = tnt::rank_and_filter(ruleset, 0.4);
        REQUIRE(kept.rules.size() == 2);
        CHECK(kept.rules[0].interestingness == doctest::Approx(0.7));
        CHECK(kept.rules[1].interestingness == doctest::Approx(0.5));
        CHECK(tnt::interest_tag(kept.rules[0].interestingness) == "HIGH");
        CHECK(tnt::interest_tag(kept.rules[1].interestingness) == "MODERATE");
        CHECK(kept.t_alpha_used == doctest::Approx(0.4));
    }
    SUBCASE("threshold zero keeps everything, sorted descending") {
        const tnt::RuleSet kept = tnt::rank_and_filter(ruleset, 0.0);
        REQUIRE(kept.rules.size() == 3);
        CHECK(std::is_sorted(kept.rules.begin(), kept.rules.end(),
                             [](const tnt::Rule& a, const tnt::Rule& b) {
                                 return a.interestingness > b.interestingness;
                             }));
    }
    SUBCASE("the HPO-style threshold 0.7 keeps only the top rule") {
        const tnt::RuleSet kept = tnt::rank_and_filter(ruleset, 0.7);
        REQUIRE(kept.rules.size() == 1);
        CHECK(kept.rules[0].interestingness == doctest::Approx(0.7));
    }
    SUBCASE("alpha ties break toward smaller coverage, then insertion order") {
        tnt::RuleSet tied;
        tied.rules = {scored(0.5, 0.9), scored(0.5, 0.2), scored(0.5, 0.2)};
        tied.rules[0].consequent.upper = 10.0;  // marker for identity tracking
        const tnt::RuleSet kept = tnt::rank_and_filter(tied, 0.0);
        CHECK(kept.rules[0].metrics.coverage == doctest::Approx(0.2));
        CHECK(kept.rules[1].metrics.coverage == doctest::Approx(0.2));
        CHECK(kept.rules[2].metrics.coverage == doctest::Approx(0.9));
        CHECK(kept.rules[2].consequent.upper == doctest::Approx(10.0));
    }
    SUBCASE("filtering is idempotent") {
        const tnt::RuleSet once = tnt::rank_and_filter(ruleset, 0.4);
        const tnt::RuleSet twice = tnt::rank_and_filter(once, 0.4);
        REQUIRE(twice.rules.size() == once.rules.size());
        for (std::size_t i = 0; i < once.rules.size(); ++i) {
            CHECK(twice.rules[i].interestingness ==
                  doctest::Approx(once.rules[i].interestingness));
        }
    }
}

TEST_CASE("rule scores are invariant to affine rescaling of the objective") {
    // full construct-and-score path on one dataset, then on a*y + b
    std::vector<std::vector<double>> inputs;
    std::vector<double> values;
    for (int i = 0; i < 60; ++i) {
        const double x = (i + 0.5) / 60.0;
        inputs.push_back({x});
        values.push_back(std::sin(6.0 * x) + 0.5 * x);
    }
    const tnt::SearchSpace space = tnt::make_space({"x1"}, {0.0}, {1.0});
    const tnt::ExplanationDataset base = tnt::dataset_from_values(inputs, values, space);

    const double a = 7.0, b = -3.0;
    std::vector<double> rescaled = values;
    for (double& v : rescaled) v = a * v + b;
    const tnt::ExplanationDataset shifted = tnt::dataset_from_values(inputs, rescaled, space);

    tnt::Clustering clustering;
    clustering.clusters = {{0, 1, 2, 3, 4, 5, 6, 7}, {20, 21, 22, 23, 24},
                           {40, 41, 42, 43, 44, 45}, {55, 56, 57, 58, 59}};

    tnt::RuleSet rules_base = tnt::construct_rules(clustering, base);
    tnt::RuleSet rules_shifted = tnt::construct_rules(clustering, shifted);
    const double f_best = *std::min_element(values.begin(), values.end());
    tnt::score_rules(rules_base, base, f_best);
    tnt::score_rules(rules_shifted, shifted, a * f_best + b);

    REQUIRE(rules_base.rules.size() == rules_shifted.rules.size());
    for (std::size_t i = 0; i < rules_base.rules.size(); ++i) {
        const tnt::RuleMetrics& m0 = rules_base.rules[i].metrics;
        const tnt::RuleMetrics& m1 = rules_shifted.rules[i].metrics;
        CHECK(m1.coverage == doctest::Approx(m0.coverage));
        CHECK(m1.support == doctest::Approx(m0.support));
        CHECK(m1.confidence == doctest::Approx(m0.confidence));
        CHECK(m1.relevance_norm == doctest::Approx(m0.relevance_norm).epsilon(1e-9));
        CHECK(rules_shifted.rules[i].interestingness ==
              doctest::Approx(rules_base.rules[i].interestingness).epsilon(1e-9));
    }

    const tnt::RuleSet ranked_base = tnt::rank_and_filter(rules_base, 0.0);
    const tnt::RuleSet ranked_shifted = tnt::rank_and_filter(rules_shifted, 0.0);
    for (std::size_t i = 0; i < ranked_base.rules.size(); ++i) {
        CHECK(ranked_base.rules[i].member_indices == ranked_shifted.rules[i].member_indices);
    }
}

TEST_CASE("text rendering lists rules with their metrics") {
    const tnt::SearchSpace space = tnt::make_space({"x1", "x2"}, {0.0, 0.0}, {1.0, 1.0});

    tnt::RuleSet ruleset;
    tnt::Rule rule;
    rule.antecedent = {{0.1, 0.4}, {0.5, 0.9}};
    rule.consequent = {-2.0, 3.0};
    rule.interestingness = 0.75;
    rule.metrics.coverage = 0.3;
    rule.metrics.support = 0.2;
    rule.metrics.confidence = 0.66;
    rule.metrics.relevance_norm = 0.9;
    ruleset.rules.push_back(rule);
    ruleset.t_alpha_used = 0.4;

    const std::string text = tnt::rules_to_text(ruleset, space);
    CHECK(text.find("rule 1:") != std::string::npos);
    CHECK(text.find("IF x1 in [") != std::string::npos);
    CHECK(text.find("AND x2 in [") != std::string::npos);
    CHECK(text.find("THEN f in [") != std::string::npos);
    CHECK(text.find("alpha=0.75") != std::string::npos);
    CHECK(text.find("HIGH") != std::string::npos);

    const tnt::RuleSet empty{{}, 0.4};
    const std::string none = tnt::rules_to_text(empty, space);
    CHECK(none.find("no rules retained") != std::string::npos);
    CHECK(none.find("0.4") != std::string::npos);
}
