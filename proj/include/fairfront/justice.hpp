#pragma once

// Claims differentiators, relevant positions and patterns of justice.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fairfront/core_model.hpp"
#include "fairfront/utility.hpp"

namespace fairfront {

struct AllClaims {
  bool operator==(const AllClaims&) const = default;
};

struct OutcomeEquals {
  int outcome = 1;
  bool operator==(const OutcomeEquals&) const = default;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

struct AttributePredicate {
  std::string attribute;
  CompareOp op = CompareOp::Eq;
  AttributeValue value;
  bool operator==(const AttributePredicate&) const = default;
};

/// Decides which individuals hold comparable claims to utility.
using ClaimsDifferentiator = std::variant<AllClaims, OutcomeEquals, AttributePredicate>;

struct Egalitarian {
  bool operator==(const Egalitarian&) const = default;
};
struct Maximin {
  bool operator==(const Maximin&) const = default;
};
/// Rank weights, worst-off position first.
struct Prioritarian {
  std::vector<double> weights;
  bool operator==(const Prioritarian&) const = default;
};
struct Sufficientarian {
  double tau = 0.0;
  bool operator==(const Sufficientarian&) const = default;
};

using PatternOfJustice = std::variant<Egalitarian, Maximin, Prioritarian, Sufficientarian>;

/// Checks weights are finite, non-negative, non-increasing and not all
/// zero, and that tau is finite. Does not check the weight count.
void validate(const PatternOfJustice& pattern);

/// Mean decision-subject utility of claim holders, per group in dataset
/// vocabulary order.
struct PositionUtilities {
  std::vector<std::string> groups;
  std::vector<double> utilities;
  std::vector<std::size_t> counts;

  std::size_t size() const noexcept { return groups.size(); }
  /// Throws InvalidArgument for an unknown label.
  double utility_of(const std::string& group) const;
  std::size_t count_of(const std::string& group) const;

  bool operator==(const PositionUtilities&) const = default;
};

bool compare(const AttributeValue& lhs, CompareOp op, const AttributeValue& rhs);

/// Throws UnknownAttribute when a predicate names an attribute an
/// individual lacks, AttributeTypeMismatch when a number is compared with a
/// string.
std::vector<bool> claims_mask(const Dataset& dataset, const ClaimsDifferentiator& differentiator);

/// Number of claim holders per group, in vocabulary order.
std::vector<std::size_t> claim_counts(const Dataset& dataset, const std::vector<bool>& mask);

/// Throws TooFewGroups, EmptyPosition, LengthMismatch.
PositionUtilities position_utilities(const Dataset& dataset, const DecisionVector& decisions,
                                     const DSUtilitySpec& ds_spec,
                                     const ClaimsDifferentiator& differentiator,
                                     EvaluationMode mode);

/// Same with a precomputed claims mask.
PositionUtilities position_utilities(const Dataset& dataset, const DecisionVector& decisions,
                                     const DSUtilitySpec& ds_spec, const std::vector<bool>& mask,
                                     EvaluationMode mode);

/// Per-group mean utility of claim holders written into `out` (vocabulary
/// order). `counts` must come from claim_counts on the same mask and be
/// non-zero; this is the allocation-free kernel behind position_utilities.
void accumulate_position_means(const Dataset& dataset, const DecisionVector& decisions,
                               const DSUtilitySpec& ds_spec, const std::vector<bool>& mask,
                               EvaluationMode mode, std::span<const std::size_t> counts,
                               std::span<double> out);

/// Higher is fairer.
///   Egalitarian:     -(max U - min U)
///   Maximin:         min U
///   Prioritarian:    sum_j w_j U_(j) / sum_j w_j, U sorted ascending
///   Sufficientarian: -sum_g max(tau - U_g, 0)
/// Throws TooFewGroups, WeightLengthMismatch, AllZeroWeights.
double fairness_score(const PositionUtilities& positions, const PatternOfJustice& pattern);
double fairness_score(std::span<const double> utilities, const PatternOfJustice& pattern);

}  // namespace fairfront
