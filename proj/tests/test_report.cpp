#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tnt/bo.hpp"
#include "tnt/config.hpp"
#include "tnt/dataset.hpp"
#include "tnt/errors.hpp"
#include "tnt/io_json.hpp"
#include "tnt/pipeline.hpp"
#include "tnt/problems.hpp"
#include "tnt/rng.hpp"
#include "tnt/rules.hpp"
#include "tnt/search_space.hpp"
#include "tnt/svg.hpp"

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

tnt::RunConfig fast_booth_config(std::uint64_t seed) {
    tnt::RunConfig config;
    config.problem = "booth";
    tnt::apply_problem_defaults(config);
    config.seed = seed;
    config.bo_iterations = 15;
    config.explanation_samples = 80;
    return config;
}

tnt::Rule manual_rule(std::vector<tnt::Interval> antecedent, tnt::Interval consequent,
                      double alpha) {
    tnt::Rule rule;
    rule.antecedent = std::move(antecedent);
    rule.consequent = consequent;
    rule.interestingness = alpha;
    return rule;
}

} // namespace

TEST_CASE("the pipeline writes every artifact and a truthful manifest") {
    const fs::path dir = fresh_dir("tnt_pipeline_run");
    const tnt::RunConfig config = fast_booth_config(5);
    const tnt::RunManifest manifest = tnt::run_pipeline(config, dir.string());

    CHECK(manifest.completed);
    CHECK(manifest.failed_stage.empty());
    for (const char* name :
         {"trace", "dataset", "linkage", "sensitivity", "rules_json", "rules_txt", "plot",
          "manifest"}) {
        INFO(name);
        REQUIRE(manifest.artifacts.count(name) == 1);
        CHECK(fs::exists(manifest.artifacts.at(name)));
        CHECK(fs::file_size(manifest.artifacts.at(name)) > 0);
    }
    CHECK(manifest.incumbent.size() == 2);
    CHECK(manifest.t_s_used == doctest::Approx(config.t_s));
    CHECK(manifest.retained_rules >= 0);
    CHECK(!manifest.timings.empty());
    CHECK(manifest.union_volume_fraction <= manifest.sum_volume_fraction + 0.02);
    CHECK(manifest.union_volume_fraction >= 0.0);

    const tnt::RuleSet rules =
        tnt::ruleset_from_json(tnt::read_json_file(manifest.artifacts.at("rules_json")));
    CHECK(static_cast<int>(rules.rules.size()) == manifest.retained_rules);
    const tnt::SearchSpace space = tnt::make_objective("booth").space();
    for (const tnt::Rule& rule : rules.rules) {
        for (int j = 0; j < space.dims(); ++j) {
            CHECK(rule.antecedent[j].lower >= space.lower[j] - 1e-9);
            CHECK(rule.antecedent[j].upper <= space.upper[j] + 1e-9);
        }
    }
    if (manifest.retained_rules > 0) {
        CHECK(manifest.mean_fidelity >= 0.0);
        CHECK(manifest.mean_fidelity <= 1.0);
    }
}

TEST_CASE("identical configurations produce byte-identical reports") {
    const fs::path dir_a = fresh_dir("tnt_pipeline_a");
    const fs::path dir_b = fresh_dir("tnt_pipeline_b");
    const tnt::RunConfig config = fast_booth_config(9);
    const tnt::RunManifest ma = tnt::run_pipeline(config, dir_a.string());
    const tnt::RunManifest mb = tnt::run_pipeline(config, dir_b.string());

    CHECK(slurp(ma.artifacts.at("rules_json")) == slurp(mb.artifacts.at("rules_json")));
    CHECK(slurp(ma.artifacts.at("rules_txt")) == slurp(mb.artifacts.at("rules_txt")));
    CHECK(slurp(ma.artifacts.at("dataset")) == slurp(mb.artifacts.at("dataset")));
    CHECK(slurp(ma.artifacts.at("plot")) == slurp(mb.artifacts.at("plot")));

    // manifests agree once timings and output paths are set aside
    nlohmann::json ja = tnt::manifest_to_json(ma);
    nlohmann::json jb = tnt::manifest_to_json(mb);
    for (nlohmann::json* j : {&ja, &jb}) {
        j->erase("timings");
        j->erase("out_dir");
        j->erase("artifacts");
    }
    CHECK(ja.dump(2) == jb.dump(2));
}

TEST_CASE("Pareto tuning adds the trade-off front to the artifacts") {
    const fs::path dir = fresh_dir("tnt_pipeline_pareto");
    tnt::RunConfig config = fast_booth_config(3);
    config.tune_mode = tnt::TuneMode::Pareto;
    config.nsga_generations = 5;
    config.nsga_population = 8;
    const tnt::RunManifest manifest = tnt::run_pipeline(config, dir.string());

    CHECK(manifest.completed);
    REQUIRE(manifest.artifacts.count("front") == 1);
    std::ifstream front(manifest.artifacts.at("front"));
    std::string header;
    std::getline(front, header);
    CHECK(header == "t_s,mean_support,mean_relevance,rule_count,mean_alpha");
    std::string row;
    CHECK(std::getline(front, row));
    CHECK(manifest.t_s_used >= 0.0);
    CHECK(manifest.t_s_used <= 1.0);
}

TEST_CASE("a failing stage leaves a partial manifest behind") {
    const fs::path dir = fresh_dir("tnt_pipeline_fail");
    tnt::RunConfig config = fast_booth_config(1);
    config.tune_mode = tnt::TuneMode::Pareto;
    config.nsga_population = 3;  // rejected inside the tuning stage

    CHECK_THROWS_AS((void)tnt::run_pipeline(config, dir.string()), tnt::ConfigError);
    REQUIRE(fs::exists(dir / "manifest.json"));
    const nlohmann::json doc = tnt::read_json_file((dir / "manifest.json").string());
    CHECK(!doc["completed"].get<bool>());
    CHECK(doc["failed_stage"].get<std::string>() == "prune");
    CHECK(!doc["error"].get<std::string>().empty());
}

TEST_CASE("an optimizer trace survives the JSON round trip") {
    const tnt::Objective objective = tnt::make_objective("matyas");
    tnt::BoOptions opts;
    opts.iterations = 8;
    opts.seed = 11;
    const tnt::BoTrace trace = tnt::run_bo(objective, opts);

    const fs::path path = fs::temp_directory_path() / "tnt_trace_roundtrip.json";
    tnt::write_json_file(path.string(), tnt::trace_to_json(trace, objective.space()));
    const tnt::BoTrace back = tnt::trace_from_json(tnt::read_json_file(path.string()));

    REQUIRE(back.evaluations.size() == trace.evaluations.size());
    for (std::size_t i = 0; i < trace.evaluations.size(); ++i) {
        CHECK(back.evaluations[i].x == trace.evaluations[i].x);
        CHECK(back.evaluations[i].value == trace.evaluations[i].value);
    }
    CHECK(back.incumbent_history == trace.incumbent_history);
    CHECK(back.incumbent_x == trace.incumbent_x);
    CHECK(back.incumbent_value == trace.incumbent_value);
    CHECK(back.iterations == trace.iterations);
    CHECK(back.initial_design_size == trace.initial_design_size);
    CHECK(back.aborted == trace.aborted);

    // the rebuilt surrogate predicts identically
    tnt::Rng rng(99);
    for (int i = 0; i < 10; ++i) {
        const std::vector<double> x = objective.space().sample(rng);
        const tnt::Posterior a = trace.model.predict_one(x);
        const tnt::Posterior b = back.model.predict_one(x);
        CHECK(a.mean[0] == doctest::Approx(b.mean[0]).epsilon(1e-12));
        CHECK(a.std[0] == doctest::Approx(b.std[0]).epsilon(1e-12));
    }
    fs::remove(path);
}

TEST_CASE("rule sets and configurations survive their JSON round trips") {
    const tnt::SearchSpace space = tnt::make_space({"x1", "x2"}, {0.0, 0.0}, {1.0, 1.0});
    tnt::Rng rng(4);
    std::vector<std::vector<double>> inputs;
    std::vector<double> values;
    for (int i = 0; i < 40; ++i) {
        inputs.push_back(space.sample(rng));
        values.push_back(inputs.back()[0] - inputs.back()[1]);
    }
    const tnt::ExplanationDataset dataset =
        tnt::dataset_from_values(std::move(inputs), std::move(values), space);

    tnt::Clustering clustering;
    clustering.clusters.push_back({0, 1, 2, 3, 4, 5});
    clustering.clusters.push_back({6, 7, 8, 9, 10, 11, 12});
    tnt::RuleSet ruleset = tnt::construct_rules(clustering, dataset);
    tnt::score_rules(ruleset, dataset, -0.9, {});
    ruleset = tnt::rank_and_filter(std::move(ruleset), 0.0);

    const nlohmann::json doc = tnt::ruleset_to_json(ruleset, space, -0.9);
    const tnt::RuleSet back = tnt::ruleset_from_json(doc);
    REQUIRE(back.rules.size() == ruleset.rules.size());
    for (std::size_t i = 0; i < ruleset.rules.size(); ++i) {
        const tnt::Rule& a = ruleset.rules[i];
        const tnt::Rule& b = back.rules[i];
        for (std::size_t j = 0; j < a.antecedent.size(); ++j) {
            CHECK(b.antecedent[j].lower == a.antecedent[j].lower);
            CHECK(b.antecedent[j].upper == a.antecedent[j].upper);
        }
        CHECK(b.consequent.lower == a.consequent.lower);
        CHECK(b.consequent.upper == a.consequent.upper);
        CHECK(b.metrics.coverage == a.metrics.coverage);
        CHECK(b.metrics.support == a.metrics.support);
        CHECK(b.metrics.confidence == a.metrics.confidence);
        CHECK(b.metrics.relevance_norm == a.metrics.relevance_norm);
        CHECK(b.interestingness == a.interestingness);
        CHECK(b.member_indices == a.member_indices);
    }

    tnt::RunConfig config;
    config.problem = "himmelblau";
    tnt::apply_problem_defaults(config);
    config.seed = 17;
    config.linkage = tnt::LinkageMethod::Average;
    config.distance = tnt::DistanceMetric::Euclidean;
    config.pruning = tnt::PruningKind::Distance;
    config.tune_mode = tnt::TuneMode::Scalar;
    config.t_dist = 0.75;
    config.weights = {0.25, 0.25, 0.25, 0.25};
    const tnt::RunConfig round = tnt::config_from_json(tnt::config_to_json(config));
    CHECK(round.problem == config.problem);
    CHECK(round.seed == config.seed);
    CHECK(round.bo_iterations == config.bo_iterations);
    CHECK(round.explanation_samples == config.explanation_samples);
    CHECK(round.t_s == config.t_s);
    CHECK(round.t_alpha == config.t_alpha);
    CHECK(round.t_dist == config.t_dist);
    CHECK(round.linkage == config.linkage);
    CHECK(round.distance == config.distance);
    CHECK(round.pruning == config.pruning);
    CHECK(round.tune_mode == config.tune_mode);
    CHECK(round.min_cluster_size == config.min_cluster_size);
    CHECK(round.fidelity_samples == config.fidelity_samples);
    CHECK(round.nsga_generations == config.nsga_generations);
    CHECK(round.nsga_population == config.nsga_population);
    CHECK(round.weights.coverage == config.weights.coverage);
    CHECK(round.weights.relevance == config.weights.relevance);
}

TEST_CASE("JSON files are written with deterministic bytes") {
    const nlohmann::json doc = {{"zeta", 1.5}, {"alpha", {{"b", 2}, {"a", 1}}}, {"list", {3, 1}}};
    const fs::path p1 = fs::temp_directory_path() / "tnt_json_a.json";
    const fs::path p2 = fs::temp_directory_path() / "tnt_json_b.json";
    tnt::write_json_file(p1.string(), doc);
    tnt::write_json_file(p2.string(), doc);
    const std::string one = slurp(p1);
    CHECK(one == slurp(p2));
    CHECK(one.back() == '\n');
    CHECK(one.find("\"alpha\"") < one.find("\"zeta\""));  // alphabetical keys
    CHECK_THROWS_AS(tnt::write_json_file("/nonexistent-dir/x.json", doc), tnt::ConfigError);
    fs::remove(p1);
    fs::remove(p2);
}

TEST_CASE("the plot draws interesting rules, known minima and the incumbent") {
    const tnt::SearchSpace space = tnt::make_space({"x1", "x2"}, {0.0, 0.0}, {10.0, 10.0});
    std::vector<std::vector<double>> inputs;
    std::vector<double> values;
    tnt::Rng rng(6);
    for (int i = 0; i < 25; ++i) {
        inputs.push_back(space.sample(rng));
        values.push_back(inputs.back()[0]);
    }
    const tnt::ExplanationDataset dataset =
        tnt::dataset_from_values(std::move(inputs), std::move(values), space);

    tnt::RuleSet ruleset;
    ruleset.rules.push_back(manual_rule({{2.5, 5.0}, {1.0, 4.0}}, {0.0, 1.0}, 0.9));
    ruleset.rules.push_back(manual_rule({{6.0, 8.0}, {6.0, 9.0}}, {0.0, 1.0}, 0.7));
    ruleset.rules.push_back(manual_rule({{0.0, 1.0}, {0.0, 1.0}}, {0.0, 1.0}, 0.5));
    ruleset.rules.push_back(manual_rule({{9.0, 10.0}, {9.0, 10.0}}, {0.0, 1.0}, 0.1));

    const std::vector<tnt::KnownMinimum> minima = {{{1.0, 3.0}, 0.0}, {{7.0, 7.0}, 0.0}};
    const std::vector<double> incumbent = {1.02, 2.97};
    const std::string svg = tnt::render_svg(ruleset, dataset, minima, incumbent);

    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_occurrences(svg, "class=\"rule-high\"") == 2);
    CHECK(count_occurrences(svg, "class=\"rule-moderate\"") == 1);
    CHECK(count_occurrences(svg, "rule-low") == 0);
    CHECK(count_occurrences(svg, "class=\"known-minimum\"") == 2);
    CHECK(count_occurrences(svg, "class=\"incumbent\"") == 1);
    CHECK(count_occurrences(svg, "<circle") == 25);

    // x = 60 + 2.5/10 * 600 = 210, width = (5 - 2.5)/10 * 600 = 150
    CHECK(svg.find("x=\"210.00\"") != std::string::npos);
    CHECK(svg.find("width=\"150.00\"") != std::string::npos);

    const std::string empty_svg = tnt::render_svg(tnt::RuleSet{}, dataset, {}, {});
    CHECK(empty_svg.rfind("<svg", 0) == 0);
    CHECK(count_occurrences(empty_svg, "<rect class=\"rule") == 0);
}

TEST_CASE("union and summed volume fractions behave like measures") {
    const tnt::SearchSpace space = tnt::make_space({"x1", "x2"}, {0.0, 0.0}, {1.0, 1.0});

    tnt::RuleSet single;
    single.rules.push_back(manual_rule({{0.0, 0.5}, {0.0, 0.5}}, {0.0, 1.0}, 0.9));
    CHECK(tnt::summed_volume_fraction(single, space) == doctest::Approx(0.25));
    const double union_single = tnt::estimate_union_volume_fraction(single, space, 1);
    CHECK(union_single == doctest::Approx(0.25).epsilon(0.06));

    tnt::RuleSet disjoint = single;
    disjoint.rules.push_back(manual_rule({{0.5, 1.0}, {0.5, 1.0}}, {0.0, 1.0}, 0.9));
    CHECK(tnt::summed_volume_fraction(disjoint, space) == doctest::Approx(0.5));
    CHECK(tnt::estimate_union_volume_fraction(disjoint, space, 1) ==
          doctest::Approx(0.5).epsilon(0.04));

    tnt::RuleSet overlapping = single;
    overlapping.rules.push_back(manual_rule({{0.0, 0.5}, {0.0, 0.5}}, {0.0, 1.0}, 0.9));
    CHECK(tnt::summed_volume_fraction(overlapping, space) == doctest::Approx(0.5));
    CHECK(tnt::estimate_union_volume_fraction(overlapping, space, 1) ==
          doctest::Approx(0.25).epsilon(0.06));

    // antecedents sticking out of the space are clipped before summing
    tnt::RuleSet clipped;
    clipped.rules.push_back(manual_rule({{-1.0, 0.5}, {0.0, 1.0}}, {0.0, 1.0}, 0.9));
    CHECK(tnt::summed_volume_fraction(clipped, space) == doctest::Approx(0.5));

    CHECK(tnt::estimate_union_volume_fraction(single, space, 1) == union_single);
    CHECK(tnt::estimate_union_volume_fraction(tnt::RuleSet{}, space, 1) == doctest::Approx(0.0));
}
