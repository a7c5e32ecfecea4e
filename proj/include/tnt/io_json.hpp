#pragma once

#include <string>

#include <json.hpp>

#include "tnt/bo.hpp"
#include "tnt/config.hpp"
#include "tnt/rules.hpp"
#include "tnt/sensitivity.hpp"

namespace tnt {

/// Writes with 2-space indentation and alphabetically ordered keys, so equal
/// documents serialize to identical bytes. Throws ConfigError on I/O failure.
void write_json_file(const std::string& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::string& path);

/// Evaluations, incumbent history and the final surrogate (hyperparameters +
/// training data), enough to rebuild the model with trace_from_json.
nlohmann::json trace_to_json(const BoTrace& trace, const SearchSpace& space);
BoTrace trace_from_json(const nlohmann::json& doc);
SearchSpace space_from_json(const nlohmann::json& doc);

/// Rules with intervals keyed by dimension name, metrics, interestingness and
/// tag; per-rule sensitivity blocks when reports are supplied (one per rule).
nlohmann::json ruleset_to_json(const RuleSet& ruleset, const SearchSpace& space, double f_best,
                               const std::vector<SensitivityReport>& sensitivities = {});
RuleSet ruleset_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& doc);

} // namespace tnt
