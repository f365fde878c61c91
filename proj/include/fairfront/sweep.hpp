#pragma once

// Exhaustive search over group-specific thresholds and Pareto analysis of
// (decision-maker utility, fairness score).

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairfront/core_model.hpp"
#include "fairfront/justice.hpp"
#include "fairfront/utility.hpp"

namespace fairfront {

inline constexpr std::size_t kDefaultGridSize = 101;
inline constexpr std::size_t kDefaultSweepCap = 10'000'000;

/// Candidate thresholds per group, groups in dataset vocabulary order.
struct ThresholdGrid {
  std::vector<std::string> groups;
  std::vector<std::vector<double>> per_group;

  /// Product of per-group sizes, saturating at SIZE_MAX.
  std::size_t combinations() const noexcept;
  bool operator==(const ThresholdGrid&) const = default;
};

/// n evenly spaced values from lo to hi, both endpoints exact.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Same linspace for every group. Throws InvalidRange unless n >= 2 and
/// 0 <= lo < hi <= 1.01.
ThresholdGrid threshold_grid(const Dataset& dataset, std::size_t n = kDefaultGridSize,
                             double lo = 0.0, double hi = 1.0);

/// Explicit lists. Every group of the dataset needs a non-empty, strictly
/// increasing list inside [0, 1.01]; throws InvalidRange or
/// MissingGroupThreshold otherwise.
ThresholdGrid custom_grid(const Dataset& dataset,
                          const std::vector<std::pair<std::string, std::vector<double>>>& lists);

struct EvaluatedRule {
  std::size_t index = 0;           // position in the sweep
  std::vector<double> thresholds;  // aligned with positions.groups
  double dm_utility = 0.0;
  double fairness_score = 0.0;
  PositionUtilities positions;
  bool on_front = false;
  bool viable = false;

  DecisionRule rule() const;
};

/// Column-oriented store of evaluated rules in lexicographic grid order
/// (first group is the slowest-varying index).
struct SweepResult {
  std::vector<std::string> groups;
  std::vector<std::size_t> claim_counts;
  std::string config_digest;

  std::vector<double> thresholds;       // size() x groups.size(), row-major
  std::vector<double> group_utilities;  // size() x groups.size(), row-major
  std::vector<double> dm_utility;
  std::vector<double> fairness_score;
  std::vector<std::uint8_t> on_front;
  std::vector<std::uint8_t> viable;

  std::size_t size() const noexcept { return dm_utility.size(); }
  bool empty() const noexcept { return dm_utility.empty(); }

  std::span<const double> thresholds_of(std::size_t i) const;
  std::span<const double> utilities_of(std::size_t i) const;
  EvaluatedRule at(std::size_t i) const;

  /// Appends a rule with both flags cleared.
  void append(std::span<const double> rule_thresholds, double dm, double fairness,
              std::span<const double> utilities);
};

struct SweepOptions {
  unsigned threads = 1;
  std::size_t cap = kDefaultSweepCap;
  std::string config_digest;
  /// Incremented as rules finish; may be read concurrently.
  std::atomic<std::size_t>* progress = nullptr;
};

/// Evaluates one rule per element of the Cartesian product of the grid.
/// Output does not depend on the thread count. Throws SweepTooLarge,
/// TooFewGroups, EmptyPosition, WeightLengthMismatch and the component
/// validation errors.
SweepResult sweep(const Dataset& dataset, const ThresholdGrid& grid, const DMUtilitySpec& dm_spec,
                  const DSUtilitySpec& ds_spec, const ClaimsDifferentiator& differentiator,
                  const PatternOfJustice& pattern, EvaluationMode mode,
                  const SweepOptions& options = {});

/// Non-dominated flags for a point cloud (maximize both coordinates).
/// Exact comparisons; duplicates of a front point are all on the front.
/// O(m log m).
std::vector<std::uint8_t> pareto_flags(std::span<const double> x, std::span<const double> y);

/// Copy of `result` with on_front populated. Throws EmptySweep.
SweepResult pareto_front(SweepResult result);

/// Copy of `result` with viable = (dm_utility >= floor).
SweepResult filter_viable(SweepResult result,
                          double floor = 0.0);

/// (max decision-maker utility, max fairness) among on-front rules. Ties go
/// to the larger other coordinate, then the earlier rule. Throws EmptySweep.
std::pair<std::size_t, std::size_t> extreme_indices(const SweepResult& result);
std::pair<EvaluatedRule, EvaluatedRule> extreme_points(const SweepResult& result);

/// On-front indices from the max-utility end to the max-fairness end:
/// decreasing dm utility, ties by increasing fairness, then index.
std::vector<std::size_t> front_path(const SweepResult& result);

}  // namespace fairfront
