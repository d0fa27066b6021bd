#pragma once

// JSON experiment configs, `key=value` overrides, trajectory CSV files and
// summary documents. Every document carries `schema_version`.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nmb/experiment.hpp"
#include "nmb/harness.hpp"
#include "nmb/metrics.hpp"
#include "nmb/stats.hpp"
#include "nmb/studies.hpp"

namespace nmb {

using json = nlohmann::ordered_json;

json config_to_json(const ExperimentConfig& cfg);
// Rejects unknown keys and wrongly typed values with a ConfigError naming the
// field path (e.g. "environment.sigma_min"). Does not run validate().
ExperimentConfig config_from_json(const json& doc);

ExperimentConfig load_config(const std::filesystem::path& path);

// `key=value`; the key is a dotted path into the resolved config
// ("environment.k", "agents.ducb.gamma", "agents.0.xi"). A bare key is
// looked up under "environment" first, then at the top level. The value is
// read as JSON, falling back to a plain string. Unknown keys throw ConfigError.
void apply_override(json& doc, const std::string& assignment);

// Parse -> overrides -> re-parse -> validate.
ExperimentConfig resolve_config(const json& doc, const std::vector<std::string>& overrides);

// Columns: step, context_id, switched, arm, reward, optimal_arm, regret,
// alpha_0..alpha_{k-1}, inv_temperature, stimulated. Floats use 9
// significant digits. A leading '#' line carries schema_version, agent, seed.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);
void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryLog& log);

json to_json(const AlignedCurve& curve);
json to_json(const MetricSummary& summary);
json to_json(const stats::AnovaResult& result);
json to_json(const GridResult& result);
json to_json(const StimulationResult& result);

}  // namespace nmb
