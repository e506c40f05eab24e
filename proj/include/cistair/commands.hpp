#pragma once

#include <string>

#include <json.hpp>

#include "cistair/config.hpp"

namespace cistair {

// Result of a command: process status (0 ok, 4 invariant violation, 5 budget) and a JSON report.
struct CommandResult {
    int status = 0;
    nlohmann::json report;
};

// Resolves the configured pair to diagonal parameters; throws Unsupported for s = 0
// and for pairs that are not in the diagonal normal form.
DiagonalPairParams<double> resolve_diagonal(const RunConfig& cfg);

CommandResult cmd_exponents(const RunConfig& cfg);
// Writes theta_table.csv and series.csv to cfg.output_dir.
CommandResult cmd_staircase(const RunConfig& cfg);
// Writes mesh.json, mesh.csv, profile.csv, levels.csv and manifest.json to cfg.output_dir.
CommandResult cmd_realize(const RunConfig& cfg);
// Re-loads the artifacts in `dir` and re-runs every audit.
CommandResult cmd_verify(const std::string& dir);

}  // namespace cistair
