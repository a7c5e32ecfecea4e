#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "tnt/config.hpp"
#include "tnt/dataset.hpp"
#include "tnt/errors.hpp"
#include "tnt/evaluation.hpp"
#include "tnt/gp.hpp"
#include "tnt/problems.hpp"
#include "tnt/rules.hpp"
#include "tnt/search_space.hpp"

namespace {

tnt::Rule box_rule(std::vector<tnt::Interval> antecedent, tnt::Interval consequent) {
    tnt::Rule rule;
    rule.antecedent = std::move(antecedent);
    rule.consequent = consequent;
    return rule;
}

/// Plane f = x1 + x2 fit exactly enough for sign-level assertions.
tnt::GpModel plane_model() {
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            const double x = i / 5.0, y = j / 5.0;
            xs.push_back({x, y});
            ys.push_back(x + y);
        }
    }
    tnt::Kernel kernel;
    kernel.lengthscales = {0.6, 0.6};
    kernel.signal_variance = 1.0;
    kernel.noise_variance = 1e-6;
    return tnt::GpModel::from_parts(xs, ys, kernel);
}

std::string first_line(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

bool rows_equal(const tnt::AblationRow& a, const tnt::AblationRow& b) {
    return a.linkage == b.linkage && a.distance == b.distance && a.pruning == b.pruning &&
           a.initial_rules == b.initial_rules && a.high_rules == b.high_rules &&
           a.moderate_rules == b.moderate_rules && a.mean_confidence == b.mean_confidence &&
           a.fidelity == b.fidelity && a.minima_hit == b.minima_hit && a.failed == b.failed &&
           a.error == b.error;
}

} // namespace

TEST_CASE("fidelity hits everything inside a wide consequent and nothing outside") {
    const tnt::GpModel model = plane_model();
    tnt::RuleSet wide;
    wide.rules.push_back(
        box_rule({{0.0, 1.0}, {0.0, 1.0}}, {-1e6, 1e6}));
    const tnt::FidelityResult all = tnt::fidelity(wide, model, 200, 1);
    CHECK(all.mean == doctest::Approx(1.0));
    CHECK(all.per_rule[0] == doctest::Approx(1.0));

    tnt::RuleSet far;
    far.rules.push_back(box_rule({{0.0, 1.0}, {0.0, 1.0}}, {1e5, 2e5}));
    const tnt::FidelityResult none = tnt::fidelity(far, model, 200, 1);
    CHECK(none.mean == doctest::Approx(0.0));
}

TEST_CASE("fidelity allocates samples by antecedent volume with a floor of ten") {
    const tnt::GpModel model = plane_model();
    tnt::RuleSet rules;
    rules.rules.push_back(box_rule({{0.0, 0.9}, {0.0, 1.0}}, {-1e6, 1e6}));   // volume 0.9
    rules.rules.push_back(box_rule({{0.0, 1e-4}, {0.0, 1e-3}}, {-1e6, 1e6}));  // tiny
    const tnt::FidelityResult result = tnt::fidelity(rules, model, 300, 0);

    REQUIRE(result.samples_per_rule.size() == 2);
    CHECK(result.samples_per_rule[0] == 300);  // lround(0.9999.. * 300)
    CHECK(result.samples_per_rule[1] == 10);   // floor kicks in
    // mean is the pooled hit fraction, i.e. the sample-weighted per-rule mean
    const double pooled = (result.per_rule[0] * result.samples_per_rule[0] +
                           result.per_rule[1] * result.samples_per_rule[1]) /
                          (result.samples_per_rule[0] + result.samples_per_rule[1]);
    CHECK(result.mean == doctest::Approx(pooled).epsilon(1e-12));
}

TEST_CASE("fidelity rejects an empty rule set and replays per seed") {
    const tnt::GpModel model = plane_model();
    CHECK_THROWS_AS((void)tnt::fidelity(tnt::RuleSet{}, model, 100, 0), tnt::ConfigError);

    // consequent splits the posterior range so the estimate depends on the draw
    tnt::RuleSet rules;
    rules.rules.push_back(box_rule({{0.0, 1.0}, {0.0, 1.0}}, {-1e6, 1.0}));
    const tnt::FidelityResult a = tnt::fidelity(rules, model, 400, 7);
    const tnt::FidelityResult b = tnt::fidelity(rules, model, 400, 7);
    const tnt::FidelityResult c = tnt::fidelity(rules, model, 400, 8);
    CHECK(a.mean == b.mean);
    CHECK(a.per_rule == b.per_rule);
    CHECK(a.mean > 0.2);
    CHECK(a.mean < 0.8);
    CHECK(a.mean != c.mean);
}

TEST_CASE("completeness is the narrowed-dimension share of the longest rule") {
    const tnt::SearchSpace space = tnt::make_space(
        {"a", "b", "c", "d", "e", "f"}, std::vector<double>(6, 0.0), std::vector<double>(6, 1.0));

    std::vector<tnt::Interval> half_narrow(6, tnt::Interval{0.0, 1.0});
    half_narrow[0] = {0.1, 1.0};
    half_narrow[2] = {0.0, 0.9};
    half_narrow[4] = {0.2, 0.8};
    tnt::RuleSet three;
    three.rules.push_back(box_rule(half_narrow, {0.0, 1.0}));
    CHECK(tnt::completeness(three, space) == doctest::Approx(0.5));

    tnt::RuleSet mixed = three;  // adding a fully narrowed rule lifts the max
    mixed.rules.push_back(
        box_rule(std::vector<tnt::Interval>(6, tnt::Interval{0.2, 0.8}), {0.0, 1.0}));
    CHECK(tnt::completeness(mixed, space) == doctest::Approx(1.0));

    tnt::RuleSet full_space;  // exact full-range dimensions do not count
    full_space.rules.push_back(
        box_rule(std::vector<tnt::Interval>(6, tnt::Interval{0.0, 1.0}), {0.0, 1.0}));
    CHECK(tnt::completeness(full_space, space) == doctest::Approx(0.0));
    CHECK(tnt::completeness(tnt::RuleSet{}, space) == doctest::Approx(0.0));
}

TEST_CASE("holdout fidelity scores each point once per containing rule") {
    tnt::RuleSet rules;
    rules.rules.push_back(box_rule({{0.0, 0.5}, {0.0, 1.0}}, {0.0, 1.0}));
    rules.rules.push_back(box_rule({{0.25, 0.75}, {0.0, 1.0}}, {10.0, 11.0}));
    rules.rules.push_back(box_rule({{0.95, 0.96}, {0.95, 0.96}}, {0.0, 1.0}));

    const std::vector<std::vector<double>> inputs = {
        {0.3, 0.5},  // inside rules 0 and 1
        {0.1, 0.5},  // inside rule 0 only
        {0.9, 0.5},  // inside nothing
    };
    const std::vector<double> values = {0.5, 5.0, 0.5};
    const tnt::FidelityResult result = tnt::holdout_fidelity(rules, inputs, values);

    CHECK(result.samples_per_rule == (std::vector<int>{2, 1, 0}));
    CHECK(result.per_rule[0] == doctest::Approx(0.5));   // hit 0.5, miss 5.0
    CHECK(result.per_rule[1] == doctest::Approx(0.0));   // 0.5 outside [10, 11]
    CHECK(result.per_rule[2] == doctest::Approx(1.0));   // vacuous coverage
    CHECK(result.mean == doctest::Approx(1.0 / 3.0));    // one hit of three countings

    const tnt::FidelityResult vacuous =
        tnt::holdout_fidelity(rules, {{0.9, 0.5}}, {1.0});
    CHECK(vacuous.mean == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)tnt::holdout_fidelity(tnt::RuleSet{}, inputs, values),
                    tnt::ConfigError);
}

TEST_CASE("ground-truth evaluation fills the report schema deterministically") {
    const tnt::Objective objective = tnt::make_objective("booth");
    tnt::RunConfig config;
    config.problem = "booth";
    tnt::apply_problem_defaults(config);
    config.seed = 2;

    const tnt::EvalReport report = tnt::evaluate_gt_mode(objective, config, 400);
    CHECK(report.mode == "ground-truth");
    CHECK(report.problem == "booth");
    CHECK(report.seed == 2);
    CHECK(report.rule_count == static_cast<int>(report.per_rule_fidelity.size()));
    CHECK(report.completeness >= 0.0);
    CHECK(report.completeness <= 1.0);
    CHECK(report.mean_fidelity >= 0.0);
    CHECK(report.mean_fidelity <= 1.0);
    CHECK(report.minima_inside_rules <= 1);

    const tnt::EvalReport again = tnt::evaluate_gt_mode(objective, config, 400);
    CHECK(again.rule_count == report.rule_count);
    CHECK(again.mean_fidelity == report.mean_fidelity);
    CHECK(again.completeness == report.completeness);
}

TEST_CASE("ground-truth evaluation refuses an objective without cheap evaluations") {
    const tnt::Objective objective = tnt::make_objective("toy-hpo");
    tnt::RunConfig config;
    config.problem = "toy-hpo";
    tnt::apply_problem_defaults(config);
    CHECK_THROWS_AS((void)tnt::evaluate_gt_mode(objective, config), tnt::ConfigError);
}

TEST_CASE("surrogate evaluation fills the report schema deterministically") {
    const tnt::Objective objective = tnt::make_objective("booth");
    tnt::RunConfig config;
    config.problem = "booth";
    tnt::apply_problem_defaults(config);
    config.seed = 3;
    config.bo_iterations = 15;
    config.explanation_samples = 80;

    const tnt::EvalReport report = tnt::evaluate_gp_mode(objective, config);
    CHECK(report.mode == "gp-surrogate");
    CHECK(report.problem == "booth");
    CHECK(report.seed == 3);
    CHECK(report.rule_count == static_cast<int>(report.per_rule_fidelity.size()));
    CHECK(report.mean_fidelity >= 0.0);
    CHECK(report.mean_fidelity <= 1.0);
    CHECK(report.minima_inside_rules <= 1);

    const tnt::GtVsGpResult both = tnt::run_gt_vs_gp(objective, config);
    CHECK(both.gp.mode == "gp-surrogate");
    CHECK(both.gt.mode == "ground-truth");
    CHECK(both.gp.rule_count == report.rule_count);
    CHECK(both.gp.mean_fidelity == report.mean_fidelity);
}

TEST_CASE("the clustering ablation walks sixteen configurations, or twenty-eight in full") {
    const tnt::Objective objective = tnt::make_objective("booth");
    tnt::RunConfig config;
    config.problem = "booth";
    tnt::apply_problem_defaults(config);
    config.seed = 1;
    config.bo_iterations = 15;
    config.explanation_samples = 60;

    const tnt::AblationGrid grid = tnt::run_clustering_ablation(objective, config);
    REQUIRE(grid.rows.size() == 16);

    int variance_rows = 0, distance_rows = 0;
    std::set<std::pair<int, int>> variance_pairs;
    for (const tnt::AblationRow& row : grid.rows) {
        if (row.pruning == tnt::PruningKind::Variance) {
            ++variance_rows;
            variance_pairs.insert({static_cast<int>(row.linkage),
                                   static_cast<int>(row.distance)});
        } else {
            ++distance_rows;
            CHECK(row.distance == tnt::DistanceMetric::Euclidean);
            CHECK((row.linkage == tnt::LinkageMethod::Ward ||
                   row.linkage == tnt::LinkageMethod::Complete));
        }
        if (!row.failed) {
            CHECK(row.high_rules >= 0);
            CHECK(row.moderate_rules >= 0);
            CHECK(row.high_rules + row.moderate_rules <= row.initial_rules);
            if (row.high_rules == 0) {
                CHECK(row.fidelity == 0.0);
                CHECK(row.minima_hit == 0);
            } else {
                CHECK(row.fidelity >= 0.0);
                CHECK(row.fidelity <= 1.0);
            }
        } else {
            CHECK(!row.error.empty());
        }
    }
    CHECK(variance_rows == 14);
    CHECK(distance_rows == 2);
    CHECK(variance_pairs.size() == 14);  // every linkage x metric combination once

    const tnt::AblationGrid again = tnt::run_clustering_ablation(objective, config);
    REQUIRE(again.rows.size() == grid.rows.size());
    for (std::size_t i = 0; i < grid.rows.size(); ++i) {
        CHECK(rows_equal(grid.rows[i], again.rows[i]));
    }

    const tnt::AblationGrid full = tnt::run_clustering_ablation(objective, config, true);
    CHECK(full.rows.size() == 28);
}

TEST_CASE("evaluation tables use stable headers") {
    tnt::EvalReport report;
    report.mode = "gp-surrogate";
    report.problem = "booth";
    report.seed = 5;
    report.rule_count = 2;
    report.mean_fidelity = 0.75;
    report.completeness = 1.0;
    report.minima_inside_rules = 1;

    const auto eval_path = temp_file("tnt_eval_header.csv");
    tnt::write_eval_csv({report}, eval_path.string());
    CHECK(first_line(eval_path.string()) ==
          "problem,mode,seed,rule_count,mean_fidelity,completeness,minima_inside_rules");
    std::ifstream in(eval_path.string());
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "booth,gp-surrogate,5,2,0.75,1,1");

    tnt::AblationGrid grid;
    grid.rows.emplace_back();
    const auto ablation_path = temp_file("tnt_ablation_header.csv");
    tnt::write_ablation_csv(grid, ablation_path.string());
    CHECK(first_line(ablation_path.string()) ==
          "linkage,distance,pruning,initial_rules,high_rules,moderate_rules,mean_confidence,"
          "fidelity,minima_hit,failed,error");
    CHECK(tnt::ablation_to_text(grid).find("ward") != std::string::npos);

    std::filesystem::remove(eval_path);
    std::filesystem::remove(ablation_path);
}
