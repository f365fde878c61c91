#include "fairfront/utility.hpp"

#include <cmath>

#include "fairfront/error.hpp"

namespace fairfront {

bool UtilityTable::is_finite() const noexcept {
  return std::isfinite(accept_repay) && std::isfinite(accept_default) &&
         std::isfinite(reject_repay) && std::isfinite(reject_default);
}

const UtilityTable& DSUtilitySpec::table_for(const std::string& group) const {
  auto it = per_group_overrides.find(group);
  return it == per_group_overrides.end() ? base : it->second;
}

void validate(const DMUtilitySpec& spec) {
  if (const auto* lending = std::get_if<LendingUtility>(&spec)) {
    if (!std::isfinite(lending->interest_rate) || !(lending->interest_rate > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "interest rate must be finite and > 0");
    }
    return;
  }
  if (!std::get<TableUtility>(spec).table.is_finite()) {
    throw Error(ErrorCode::InvalidArgument, "decision-maker utility table must be finite");
  }
}

void validate(const DSUtilitySpec& spec) {
  if (!spec.base.is_finite()) {
    throw Error(ErrorCode::InvalidArgument, "decision-subject utility table must be finite");
  }
  for (const auto& [group, table] : spec.per_group_overrides) {
    if (!table.is_finite()) {
      throw Error(ErrorCode::InvalidArgument,
                  "decision-subject utility override for '" + group + "' must be finite", group);
    }
  }
}

double table_utility(const UtilityTable& table, bool amount_scaled, const Individual& individual,
                     int decision, EvaluationMode mode) noexcept {
  double u = 0.0;
  if (mode == EvaluationMode::Empirical) {
    u = table.at(decision, individual.outcome);
  } else {
    const double p = individual.score;
    u = p * table.at(decision, 1) + (1.0 - p) * table.at(decision, 0);
  }
  return amount_scaled ? u * individual.amount : u;
}

double dm_utility_individual(const Individual& individual, int decision, const DMUtilitySpec& spec,
                             EvaluationMode mode) noexcept {
  if (const auto* lending = std::get_if<LendingUtility>(&spec)) {
    return table_utility(lending->as_table(), true, individual, decision, mode);
  }
  const auto& t = std::get<TableUtility>(spec);
  return table_utility(t.table, t.amount_scaled, individual, decision, mode);
}

double dm_utility_total(const Dataset& dataset, const DecisionVector& decisions,
                        const DMUtilitySpec& spec, EvaluationMode mode) {
  if (decisions.size() != dataset.size()) {
    throw Error(ErrorCode::LengthMismatch, "decision vector length differs from dataset size");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    total += dm_utility_individual(dataset[i], decisions[i], spec, mode);
  }
  return total;
}

double ds_utility_individual(const Individual& individual, int decision, const DSUtilitySpec& spec,
                             EvaluationMode mode) {
  return table_utility(spec.table_for(individual.group), spec.amount_scaled, individual, decision,
                       mode);
}

double optimal_uniform_threshold(const DMUtilitySpec& spec) {
  validate(spec);
  const UtilityTable u = std::holds_alternative<LendingUtility>(spec)
                             ? std::get<LendingUtility>(spec).as_table()
                             : std::get<TableUtility>(spec).table;
  // accept - reject at p = 0 and p = 1; the difference is linear in p.
  const double gain_if_repay = u.accept_repay - u.reject_repay;
  const double loss_if_default = u.reject_default - u.accept_default;
  const double diff_at_zero = -loss_if_default;
  const double diff_at_one = gain_if_repay;
  if (diff_at_zero >= 0.0 && diff_at_one >= 0.0) {
    throw Error(ErrorCode::DegenerateSpec, "accepting is never worse than rejecting",
                "always accept");
  }
  if (diff_at_zero <= 0.0 && diff_at_one <= 0.0) {
    throw Error(ErrorCode::DegenerateSpec, "rejecting is never worse than accepting",
                "always reject");
  }
  if (diff_at_zero > 0.0) {
    throw Error(ErrorCode::DegenerateSpec, "accepting pays off only for low scores", "inverted");
  }
  return loss_if_default / (gain_if_repay + loss_if_default);
}

}  // namespace fairfront
