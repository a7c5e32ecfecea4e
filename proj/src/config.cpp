#include "tnt/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tnt/errors.hpp"
#include "tnt/problems.hpp"

namespace tnt {

PruningKind pruning_from_string(const std::string& s) {
    if (s == "variance") return PruningKind::Variance;
    if (s == "distance") return PruningKind::Distance;
    throw ConfigError("unknown pruning kind '" + s + "'");
}

TuneMode tune_mode_from_string(const std::string& s) {
    if (s == "fixed") return TuneMode::Fixed;
    if (s == "scalar") return TuneMode::Scalar;
    if (s == "pareto") return TuneMode::Pareto;
    throw ConfigError("unknown tuning mode '" + s + "'");
}

std::string to_string(PruningKind p) {
    return p == PruningKind::Variance ? "variance" : "distance";
}

std::string to_string(TuneMode m) {
    switch (m) {
        case TuneMode::Fixed: return "fixed";
        case TuneMode::Scalar: return "scalar";
        case TuneMode::Pareto: return "pareto";
    }
    return "?";
}

void RunConfig::validate() const {
    if (bo_iterations < 1) throw ConfigError("bo_iterations must be at least 1");
    if (explanation_samples < 10) throw ConfigError("explanation_samples must be at least 10");
    if (t_s < 0.0 || t_s > 1.0) throw ConfigError("t_s must lie in [0,1]");
    if (t_alpha < 0.0 || t_alpha > 1.0) throw ConfigError("t_alpha must lie in [0,1]");
    if (min_cluster_size < 1) throw ConfigError("min_cluster_size must be positive");
    if (fidelity_samples < 1) throw ConfigError("fidelity_samples must be positive");
    weights.validate();
}

namespace {

struct ProblemDefaults {
    int iterations;
    int samples;
    double t_s;
    double t_alpha;
};

ProblemDefaults defaults_for(const std::string& problem) {
    if (problem == "booth") return {100, 200, 1e-1, 0.4};
    if (problem == "matyas") return {100, 200, 1e-3, 0.4};
    if (problem == "himmelblau") return {200, 400, 5e-2, 0.4};
    if (problem == "holder") return {800, 1600, 2e-3, 0.4};
    if (problem == "cross") return {800, 1600, 2e-6, 0.4};
    if (problem == "toy-hpo") return {60, 500, 0.7, 0.7};
    throw ConfigError("unknown problem '" + problem + "'");
}

} // namespace

void apply_problem_defaults(RunConfig& config) {
    const ProblemDefaults d = defaults_for(config.problem);
    if (config.bo_iterations < 0) config.bo_iterations = d.iterations;
    if (config.explanation_samples < 0) config.explanation_samples = d.samples;
    if (config.t_s < 0.0) config.t_s = d.t_s;
    if (config.t_alpha < 0.0) config.t_alpha = d.t_alpha;
}

void apply_override(RunConfig& config, const std::string& key, const std::string& value) {
    try {
        if (key == "problem") config.problem = value;
        else if (key == "seed") config.seed = std::stoull(value);
        else if (key == "bo_iterations") config.bo_iterations = std::stoi(value);
        else if (key == "explanation_samples") config.explanation_samples = std::stoi(value);
        else if (key == "t_s") config.t_s = std::stod(value);
        else if (key == "t_alpha") config.t_alpha = std::stod(value);
        else if (key == "t_dist") config.t_dist = std::stod(value);
        else if (key == "linkage") config.linkage = linkage_from_string(value);
        else if (key == "distance") config.distance = distance_from_string(value);
        else if (key == "pruning") config.pruning = pruning_from_string(value);
        else if (key == "tune_mode") config.tune_mode = tune_mode_from_string(value);
        else if (key == "min_cluster_size") config.min_cluster_size = std::stoi(value);
        else if (key == "fidelity_samples") config.fidelity_samples = std::stoi(value);
        else if (key == "nsga_generations") config.nsga_generations = std::stoi(value);
        else if (key == "nsga_population") config.nsga_population = std::stoi(value);
        else if (key == "w_coverage") config.weights.coverage = std::stod(value);
        else if (key == "w_support") config.weights.support = std::stod(value);
        else if (key == "w_confidence") config.weights.confidence = std::stod(value);
        else if (key == "w_relevance") config.weights.relevance = std::stod(value);
        else throw ConfigError("unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
        throw ConfigError("invalid value '" + value + "' for config key '" + key + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("out-of-range value '" + value + "' for config key '" + key + "'");
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("malformed config line " + std::to_string(line_no) + " in " + path);
        }
        apply_override(config, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return config;
}

} // namespace tnt
