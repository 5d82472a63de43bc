#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pemc/experiment.hpp"

namespace pemc {

// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

nlohmann::json to_json(const CostBreakdown& costs);
nlohmann::json to_json(const OptimizerConfig& config);
nlohmann::json to_json(const ExperimentReport& report);

// Optimizer settings from a config document. Top-level keys apply to every
// algorithm; "ga", "bpso" and "de" objects override them per algorithm.
// Unknown keys are rejected.
OptimizerConfig config_from_json(const nlohmann::json& doc, Algorithm algorithm);
OptimizerConfig load_config(const std::filesystem::path& path, Algorithm algorithm);

std::string trace_csv(const DispatchTrace& trace);
std::string convergence_csv(const RunResult& run);

using SweepTable = std::vector<std::pair<Algorithm, std::vector<SweepRow>>>;
std::string sweep_csv(const SweepTable& table);
nlohmann::json sweep_json(const SweepTable& table);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace pemc
