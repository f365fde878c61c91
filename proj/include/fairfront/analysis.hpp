#pragma once

// End-to-end pipelines over a dataset and a value configuration, shared by
// the C API, the CLI and the HTTP service.

#include <cstddef>
#include <string>
#include <vector>

#include "fairfront/core_model.hpp"
#include "fairfront/error.hpp"
#include "fairfront/io.hpp"
#include "fairfront/justice.hpp"
#include "fairfront/sweep.hpp"

namespace fairfront {

struct ValidationReport {
  std::vector<std::string> groups;
  std::vector<std::size_t> group_sizes;
  std::vector<std::size_t> claim_counts;
  std::vector<std::string> empty_positions;
  /// First blocking problem other than empty positions (SchemaViolation or
  /// UnknownAttribute text), empty when none.
  std::string problem;
  ErrorCode problem_code = ErrorCode::InvalidArgument;

  bool ok() const noexcept { return empty_positions.empty() && problem.empty(); }
};

ValidationReport validate_inputs(const Dataset& dataset, const ValueConfig& config);

struct RuleEvaluation {
  std::vector<std::string> groups;
  std::vector<double> thresholds;
  double dm_utility = 0.0;
  double fairness_score = 0.0;
  PositionUtilities positions;
  std::vector<std::size_t> group_sizes;
  std::vector<std::size_t> accepted;

  double acceptance_rate(std::size_t g) const {
    return static_cast<double>(accepted[g]) / static_cast<double>(group_sizes[g]);
  }
};

/// Scores one rule with the single-rule operations.
RuleEvaluation evaluate_rule(const Dataset& dataset, const ValueConfig& config,
                             const DecisionRule& rule);

/// Sweep, Pareto flags and viability flags in one call; the result carries
/// config_digest(config).
SweepResult run_sweep(const Dataset& dataset, const ValueConfig& config,
                      SweepOptions options = {});

}  // namespace fairfront
