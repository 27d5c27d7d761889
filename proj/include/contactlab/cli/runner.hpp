#pragma once

#include <json.hpp>

#include "contactlab/cli/config.hpp"

namespace contactlab::cli {

inline constexpr const char* kEngineVersion = "0.1.0";

struct RunResult {
  nlohmann::json report;
  int exit_code = 0;  // 0 all verdicts pass, 1 violations
};

/// Samples the domain, evaluates the configured suites at every point and
/// merges the per-point records. Throws ConfigError when the sampled box
/// needs an exclusion predicate that the immersion does not declare.
RunResult run(const RunConfig& cfg);

/// Copy of a report with the timestamp removed.
nlohmann::json without_timestamp(nlohmann::json report);

}  // namespace contactlab::cli
