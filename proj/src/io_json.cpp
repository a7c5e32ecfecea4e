#include "tnt/io_json.hpp"

#include <fstream>
#include <vector>

#include "tnt/errors.hpp"

namespace tnt {

using nlohmann::json;

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw ConfigError("write failed: " + path);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
}

namespace {

json space_to_json(const SearchSpace& space) {
    return json{{"names", space.names}, {"lower", space.lower}, {"upper", space.upper}};
}

json interval_to_json(const Interval& iv) {
    return json{{"lower", iv.lower}, {"upper", iv.upper}};
}

Interval interval_from_json(const json& doc) {
    return Interval{doc.at("lower").get<double>(), doc.at("upper").get<double>()};
}

} // namespace

SearchSpace space_from_json(const json& doc) {
    SearchSpace space;
    space.names = doc.at("names").get<std::vector<std::string>>();
    space.lower = doc.at("lower").get<std::vector<double>>();
    space.upper = doc.at("upper").get<std::vector<double>>();
    space.validate();
    return space;
}

json trace_to_json(const BoTrace& trace, const SearchSpace& space) {
    json evals = json::array();
    for (const Evaluation& e : trace.evaluations)
        evals.push_back(json{{"x", e.x}, {"value", e.value}});

    const Kernel& k = trace.model.kernel();
    json gp{{"lengthscales", k.lengthscales},
            {"signal_variance", k.signal_variance},
            {"noise_variance", k.noise_variance},
            {"log_marginal_likelihood", trace.model.fitted_log_marginal()}};

    return json{{"space", space_to_json(space)},
                {"evaluations", evals},
                {"incumbent_history", trace.incumbent_history},
                {"incumbent_x", trace.incumbent_x},
                {"incumbent_value", trace.incumbent_value},
                {"iterations", trace.iterations},
                {"initial_design_size", trace.initial_design_size},
                {"aborted", trace.aborted},
                {"abort_reason", trace.abort_reason},
                {"gp", gp}};
}

BoTrace trace_from_json(const json& doc) {
    BoTrace trace;
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    for (const json& e : doc.at("evaluations")) {
        Evaluation ev{e.at("x").get<std::vector<double>>(), e.at("value").get<double>()};
        inputs.push_back(ev.x);
        targets.push_back(ev.value);
        trace.evaluations.push_back(std::move(ev));
    }
    trace.incumbent_history = doc.at("incumbent_history").get<std::vector<double>>();
    trace.incumbent_x = doc.at("incumbent_x").get<std::vector<double>>();
    trace.incumbent_value = doc.at("incumbent_value").get<double>();
    trace.iterations = doc.at("iterations").get<int>();
    trace.initial_design_size = doc.at("initial_design_size").get<int>();
    trace.aborted = doc.at("aborted").get<bool>();
    trace.abort_reason = doc.at("abort_reason").get<std::string>();

    const json& gp = doc.at("gp");
    Kernel kernel;
    kernel.lengthscales = gp.at("lengthscales").get<std::vector<double>>();
    kernel.signal_variance = gp.at("signal_variance").get<double>();
    kernel.noise_variance = gp.at("noise_variance").get<double>();
    if (!inputs.empty()) trace.model = GpModel::from_parts(inputs, targets, kernel);
    return trace;
}

json ruleset_to_json(const RuleSet& ruleset, const SearchSpace& space, double f_best,
                     const std::vector<SensitivityReport>& sensitivities) {
    json rules = json::array();
    for (std::size_t r = 0; r < ruleset.rules.size(); ++r) {
        const Rule& rule = ruleset.rules[r];
        json antecedent = json::array();
        for (int j = 0; j < space.dims(); ++j) {
            json iv = interval_to_json(rule.antecedent[j]);
            iv["name"] = space.names[j];
            antecedent.push_back(std::move(iv));
        }
        json entry{{"antecedent", antecedent},
                   {"consequent", interval_to_json(rule.consequent)},
                   {"coverage", rule.metrics.coverage},
                   {"support", rule.metrics.support},
                   {"confidence", rule.metrics.confidence},
                   {"relevance_raw", rule.metrics.relevance_raw},
                   {"relevance", rule.metrics.relevance_norm},
                   {"interestingness", rule.interestingness},
                   {"tag", interest_tag(rule.interestingness)},
                   {"members", rule.member_indices}};
        if (r < sensitivities.size()) {
            const SensitivityReport& s = sensitivities[r];
            json dims = json::array();
            for (int j = 0; j < space.dims(); ++j) {
                dims.push_back(json{{"name", space.names[j]},
                                    {"score", s.scores[j]},
                                    {"label", s.tune[j] ? "TUNE" : "NOTUNE"}});
            }
            entry["sensitivity"] = std::move(dims);
        }
        rules.push_back(std::move(entry));
    }
    return json{{"space", space_to_json(space)},
                {"f_best", f_best},
                {"t_alpha", ruleset.t_alpha_used},
                {"rules", rules}};
}

RuleSet ruleset_from_json(const json& doc) {
    RuleSet ruleset;
    ruleset.t_alpha_used = doc.at("t_alpha").get<double>();
    for (const json& entry : doc.at("rules")) {
        Rule rule;
        for (const json& iv : entry.at("antecedent")) rule.antecedent.push_back(interval_from_json(iv));
        rule.consequent = interval_from_json(entry.at("consequent"));
        rule.metrics.coverage = entry.at("coverage").get<double>();
        rule.metrics.support = entry.at("support").get<double>();
        rule.metrics.confidence = entry.at("confidence").get<double>();
        rule.metrics.relevance_raw = entry.at("relevance_raw").get<double>();
        rule.metrics.relevance_norm = entry.at("relevance").get<double>();
        rule.interestingness = entry.at("interestingness").get<double>();
        rule.member_indices = entry.at("members").get<std::vector<int>>();
        ruleset.rules.push_back(std::move(rule));
    }
    return ruleset;
}

json config_to_json(const RunConfig& config) {
    return json{{"problem", config.problem},
                {"seed", config.seed},
                {"bo_iterations", config.bo_iterations},
                {"explanation_samples", config.explanation_samples},
                {"t_s", config.t_s},
                {"t_alpha", config.t_alpha},
                {"t_dist", config.t_dist},
                {"linkage", to_string(config.linkage)},
                {"distance", to_string(config.distance)},
                {"pruning", to_string(config.pruning)},
                {"tune_mode", to_string(config.tune_mode)},
                {"min_cluster_size", config.min_cluster_size},
                {"w_coverage", config.weights.coverage},
                {"w_support", config.weights.support},
                {"w_confidence", config.weights.confidence},
                {"w_relevance", config.weights.relevance},
                {"fidelity_samples", config.fidelity_samples},
                {"nsga_generations", config.nsga_generations},
                {"nsga_population", config.nsga_population}};
}

RunConfig config_from_json(const json& doc) {
    RunConfig config;
    config.problem = doc.at("problem").get<std::string>();
    config.seed = doc.at("seed").get<std::uint64_t>();
    config.bo_iterations = doc.at("bo_iterations").get<int>();
    config.explanation_samples = doc.at("explanation_samples").get<int>();
    config.t_s = doc.at("t_s").get<double>();
    config.t_alpha = doc.at("t_alpha").get<double>();
    config.t_dist = doc.at("t_dist").get<double>();
    config.linkage = linkage_from_string(doc.at("linkage").get<std::string>());
    config.distance = distance_from_string(doc.at("distance").get<std::string>());
    config.pruning = pruning_from_string(doc.at("pruning").get<std::string>());
    config.tune_mode = tune_mode_from_string(doc.at("tune_mode").get<std::string>());
    config.min_cluster_size = doc.at("min_cluster_size").get<int>();
    config.weights.coverage = doc.at("w_coverage").get<double>();
    config.weights.support = doc.at("w_support").get<double>();
    config.weights.confidence = doc.at("w_confidence").get<double>();
    config.weights.relevance = doc.at("w_relevance").get<double>();
    config.fidelity_samples = doc.at("fidelity_samples").get<int>();
    config.nsga_generations = doc.at("nsga_generations").get<int>();
    config.nsga_population = doc.at("nsga_population").get<int>();
    return config;
}

} // namespace tnt
