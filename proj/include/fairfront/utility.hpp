#pragma once

// Decision-maker and decision-subject utility.

#include <map>
#include <string>
#include <variant>

#include "fairfront/core_model.hpp"

namespace fairfront {

/// Utility of each (decision, outcome) cell.
struct UtilityTable {
  double accept_repay = 0.0;    // d=1, y=1
  double accept_default = 0.0;  // d=1, y=0
  double reject_repay = 0.0;    // d=0, y=1
  double reject_default = 0.0;  // d=0, y=0

  double at(int decision, int outcome) const noexcept {
    if (decision != 0) return outcome != 0 ? accept_repay : accept_default;
    return outcome != 0 ? reject_repay : reject_default;
  }
  bool is_finite() const noexcept;

  bool operator==(const UtilityTable&) const = default;
};

/// Lender with one interest rate: accepted and repaid earns rate * amount,
/// accepted and defaulted loses the amount, rejected is neutral. Always
/// amount-scaled.
struct LendingUtility {
  double interest_rate = 0.1;

  UtilityTable as_table() const noexcept { return {interest_rate, -1.0, 0.0, 0.0}; }
  bool operator==(const LendingUtility&) const = default;
};

struct TableUtility {
  UtilityTable table;
  bool amount_scaled = false;
  bool operator==(const TableUtility&) const = default;
};

using DMUtilitySpec = std::variant<LendingUtility, TableUtility>;

struct DSUtilitySpec {
  UtilityTable base;
  std::map<std::string, UtilityTable> per_group_overrides;
  bool amount_scaled = false;

  const UtilityTable& table_for(const std::string& group) const;
  bool operator==(const DSUtilitySpec&) const = default;
};

enum class EvaluationMode { Expected, Empirical };

/// Throws InvalidArgument if the spec breaks its invariants.
void validate(const DMUtilitySpec& spec);
void validate(const DSUtilitySpec& spec);

/// Utility of one cell table for a given individual and decision. Expected
/// mode weights the two outcome cells by the score; empirical mode reads the
/// observed outcome.
double table_utility(const UtilityTable& table, bool amount_scaled, const Individual& individual,
                     int decision, EvaluationMode mode) noexcept;

double dm_utility_individual(const Individual& individual, int decision, const DMUtilitySpec& spec,
                             EvaluationMode mode) noexcept;

/// Sum over individuals in dataset order. Throws LengthMismatch.
double dm_utility_total(const Dataset& dataset, const DecisionVector& decisions,
                        const DMUtilitySpec& spec, EvaluationMode mode);

double ds_utility_individual(const Individual& individual, int decision, const DSUtilitySpec& spec,
                             EvaluationMode mode);

/// Score p* at which accepting and rejecting have equal expected utility.
/// Throws DegenerateSpec (detail "always accept", "always reject" or
/// "inverted") when the accept/reject difference does not change sign from
/// negative to positive on (0, 1).
double optimal_uniform_threshold(const DMUtilitySpec& spec);

}  // namespace fairfront
