#pragma once

// Deterministic text output: reals with 12 significant digits, CSV and JSON
// renderings of sweeps and single rules.

#include <string>
#include <string_view>

#include "json.hpp"

#include "fairfront/analysis.hpp"
#include "fairfront/error.hpp"
#include "fairfront/sweep.hpp"

namespace fairfront {

/// printf %.12g (round-half-even on the exact binary value); negative zero
/// prints as 0.
std::string format_real(double value);

/// `value` rounded to 12 significant digits, so that JSON dumps are stable.
double round_real(double value);

/// Stable key of a rule: "F=0.5,M=0.6" with format_real thresholds.
std::string rule_key(const std::vector<std::string>& groups, std::span<const double> thresholds);

std::string csv_escape(std::string_view field);

/// One row per rule: threshold_<g>..., dm_utility, fairness_score,
/// utility_<g>..., on_front, viable. `front_only` keeps on-front rules in
/// front_path order.
std::string sweep_to_csv(const SweepResult& result, bool front_only = false);

nlohmann::json point_to_json(const SweepResult& result, std::size_t index);

/// {groups, config_digest, claim_counts, size, front_size, viable_count,
///  extremes, points}. `viable_only` drops non-viable points; `front_only`
/// keeps on-front points in front_path order.
nlohmann::json sweep_to_json(const SweepResult& result, bool viable_only = false,
                             bool front_only = false);

/// Text summary printed by the CLI after a sweep.
std::string sweep_summary(const SweepResult& result);

nlohmann::json evaluation_to_json(const RuleEvaluation& evaluation);

nlohmann::json report_to_json(const ValidationReport& report);

/// {code, message, detail} plus row/column when known.
nlohmann::json error_to_json(const Error& error);

}  // namespace fairfront
