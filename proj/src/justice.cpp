#include "fairfront/justice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairfront/error.hpp"

namespace fairfront {

void validate(const PatternOfJustice& pattern) {
  if (const auto* prio = std::get_if<Prioritarian>(&pattern)) {
    bool any_positive = false;
    for (std::size_t j = 0; j < prio->weights.size(); ++j) {
      const double w = prio->weights[j];
      if (!std::isfinite(w) || w < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "weights must be finite and non-negative",
                    "weights/" + std::to_string(j));
      }
      if (j > 0 && w > prio->weights[j - 1]) {
        throw Error(ErrorCode::InvalidArgument, "weights must be non-increasing",
                    "weights/" + std::to_string(j));
      }
      any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) {
      throw Error(ErrorCode::AllZeroWeights, "at least one weight must be positive", "weights");
    }
  } else if (const auto* suff = std::get_if<Sufficientarian>(&pattern)) {
    if (!std::isfinite(suff->tau)) {
      throw Error(ErrorCode::InvalidArgument, "tau must be finite", "tau");
    }
  }
}

double PositionUtilities::utility_of(const std::string& group) const {
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g] == group) return utilities[g];
  }
  throw Error(ErrorCode::InvalidArgument, "unknown group '" + group + "'", group);
}

std::size_t PositionUtilities::count_of(const std::string& group) const {
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g] == group) return counts[g];
  }
  throw Error(ErrorCode::InvalidArgument, "unknown group '" + group + "'", group);
}

namespace {

template <typename T>
bool compare_ordered(const T& a, CompareOp op, const T& b) {
  switch (op) {
    case CompareOp::Eq: return a == b;
    case CompareOp::Ne: return a != b;
    case CompareOp::Lt: return a < b;
    case CompareOp::Le: return a <= b;
    case CompareOp::Gt: return a > b;
    case CompareOp::Ge: return a >= b;
  }
  return false;
}

}  // namespace

bool compare(const AttributeValue& lhs, CompareOp op, const AttributeValue& rhs) {
  if (lhs.index() != rhs.index()) {
    throw Error(ErrorCode::AttributeTypeMismatch, "cannot compare a number with a string");
  }
  if (const auto* a = std::get_if<double>(&lhs)) {
    return compare_ordered(*a, op, std::get<double>(rhs));
  }
  return compare_ordered(std::get<std::string>(lhs), op, std::get<std::string>(rhs));
}

std::vector<bool> claims_mask(const Dataset& dataset, const ClaimsDifferentiator& differentiator) {
  std::vector<bool> mask(dataset.size(), true);
  if (const auto* eq = std::get_if<OutcomeEquals>(&differentiator)) {
    for (std::size_t i = 0; i < dataset.size(); ++i) mask[i] = dataset[i].outcome == eq->outcome;
  } else if (const auto* pred = std::get_if<AttributePredicate>(&differentiator)) {
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const auto& attrs = dataset[i].attributes;
      auto it = attrs.find(pred->attribute);
      if (it == attrs.end()) {
        throw Error(ErrorCode::UnknownAttribute, "unknown attribute '" + pred->attribute + "'",
                    pred->attribute, i + 1, pred->attribute);
      }
      try {
        mask[i] = compare(it->second, pred->op, pred->value);
      } catch (const Error& e) {
        throw Error(e.code(), e.what(), pred->attribute, i + 1, pred->attribute);
      }
    }
  }
  return mask;
}

std::vector<std::size_t> claim_counts(const Dataset& dataset, const std::vector<bool>& mask) {
  std::vector<std::size_t> counts(dataset.group_count(), 0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (mask[i]) ++counts[dataset.group_index(i)];
  }
  return counts;
}

void accumulate_position_means(const Dataset& dataset, const DecisionVector& decisions,
                               const DSUtilitySpec& ds_spec, const std::vector<bool>& mask,
                               EvaluationMode mode, std::span<const std::size_t> counts,
                               std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!mask[i]) continue;
    out[dataset.group_index(i)] += ds_utility_individual(dataset[i], decisions[i], ds_spec, mode);
  }
  for (std::size_t g = 0; g < out.size(); ++g) out[g] /= static_cast<double>(counts[g]);
}

PositionUtilities position_utilities(const Dataset& dataset, const DecisionVector& decisions,
                                     const DSUtilitySpec& ds_spec, const std::vector<bool>& mask,
                                     EvaluationMode mode) {
  if (dataset.group_count() < 2) {
    throw Error(ErrorCode::TooFewGroups, "fairness analysis needs at least two groups");
  }
  if (decisions.size() != dataset.size() || mask.size() != dataset.size()) {
    throw Error(ErrorCode::LengthMismatch, "decision vector length differs from dataset size");
  }
  PositionUtilities out;
  out.groups = dataset.groups();
  out.counts = claim_counts(dataset, mask);
  for (std::size_t g = 0; g < out.size(); ++g) {
    if (out.counts[g] == 0) {
      throw Error(ErrorCode::EmptyPosition, "group '" + out.groups[g] + "' has no claim holders",
                  out.groups[g]);
    }
  }
  out.utilities.assign(out.size(), 0.0);
  accumulate_position_means(dataset, decisions, ds_spec, mask, mode, out.counts, out.utilities);
  return out;
}

PositionUtilities position_utilities(const Dataset& dataset, const DecisionVector& decisions,
                                     const DSUtilitySpec& ds_spec,
                                     const ClaimsDifferentiator& differentiator,
                                     EvaluationMode mode) {
  if (dataset.group_count() < 2) {
    throw Error(ErrorCode::TooFewGroups, "fairness analysis needs at least two groups");
  }
  return position_utilities(dataset, decisions, ds_spec, claims_mask(dataset, differentiator),
                            mode);
}

double fairness_score(const PositionUtilities& positions, const PatternOfJustice& pattern) {
  return fairness_score(std::span<const double>(positions.utilities), pattern);
}

double fairness_score(std::span<const double> u, const PatternOfJustice& pattern) {
  if (u.size() < 2) {
    throw Error(ErrorCode::TooFewGroups, "fairness score needs at least two positions");
  }
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());

  if (std::holds_alternative<Egalitarian>(pattern)) {
    const double range = *hi - *lo;
    return range == 0.0 ? 0.0 : -range;
  }
  if (std::holds_alternative<Maximin>(pattern)) {
    return *lo;
  }
  if (const auto* prio = std::get_if<Prioritarian>(&pattern)) {
    if (prio->weights.size() != u.size()) {
      throw Error(ErrorCode::WeightLengthMismatch,
                  "expected " + std::to_string(u.size()) + " weights, got " +
                      std::to_string(prio->weights.size()),
                  "weights");
    }
    const double weight_sum = std::accumulate(prio->weights.begin(), prio->weights.end(), 0.0);
    if (!(weight_sum > 0.0)) {
      throw Error(ErrorCode::AllZeroWeights, "at least one weight must be positive", "weights");
    }
    // Positions are already in label order, so a stable sort breaks ties by label.
    std::vector<std::size_t> order(u.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });
    double acc = 0.0;
    for (std::size_t j = 0; j < order.size(); ++j) acc += prio->weights[j] * u[order[j]];
    return acc / weight_sum;
  }
  const double tau = std::get<Sufficientarian>(pattern).tau;
  double shortfall = 0.0;
  for (double v : u) shortfall += std::max(tau - v, 0.0);
  return shortfall == 0.0 ? 0.0 : -shortfall;
}

}  // namespace fairfront
