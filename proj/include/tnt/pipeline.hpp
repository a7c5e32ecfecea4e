#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tnt/config.hpp"
#include "tnt/rules.hpp"

namespace tnt {

/// Record of one full run: the resolved configuration, every artifact written,
/// per-stage timings and the headline statistics. Serialized as manifest.json;
/// two runs with the same configuration produce byte-identical manifests once
/// the timing block is ignored.
struct RunManifest {
    RunConfig config;
    std::string out_dir;
    std::map<std::string, std::string> artifacts;            ///< artifact name -> path
    std::vector<std::pair<std::string, double>> timings;     ///< stage -> seconds
    bool completed = false;
    std::string failed_stage;
    std::string error;

    std::vector<double> incumbent;
    double incumbent_value = 0.0;
    double t_s_used = -1.0;           ///< threshold actually applied (post-tuning)
    int retained_rules = 0;
    double mean_fidelity = 0.0;
    double union_volume_fraction = 0.0;  ///< Monte Carlo box-union share of the space
    double sum_volume_fraction = 0.0;    ///< clipped per-box volumes summed
};

/// Optimize -> sample explanation dataset -> cluster -> prune (threshold fixed
/// or tuned per config) -> build/score/filter rules -> sensitivity -> emit
/// trace.json, dataset.csv, linkage.csv, rules.json, rules.txt,
/// sensitivity.csv, plot.svg, manifest.json (plus front.csv when Pareto
/// tuning). A stage failure still writes the partial manifest, then rethrows.
RunManifest run_pipeline(const RunConfig& config, const std::string& out_dir);

nlohmann::json manifest_to_json(const RunManifest& manifest);

/// Fraction of the space covered by the union of retained antecedents,
/// estimated with n uniform points.
double estimate_union_volume_fraction(const RuleSet& ruleset, const SearchSpace& space,
                                      std::uint64_t seed, int n_samples = 10000);

/// Sum of the antecedent volumes (each clipped to the space) over the space
/// volume; an overlap-ignoring upper bound on the union fraction.
double summed_volume_fraction(const RuleSet& ruleset, const SearchSpace& space);

} // namespace tnt
