#include "fairfront/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "fairfront/error.hpp"

namespace fairfront {

Dataset Dataset::create(std::vector<Individual> individuals) {
  if (individuals.empty()) {
    throw Error(ErrorCode::EmptyFile, "dataset has no individuals");
  }
  std::unordered_set<std::string> ids;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < individuals.size(); ++i) {
    const Individual& ind = individuals[i];
    if (!(ind.score >= 0.0 && ind.score <= 1.0)) {
      throw Error(ErrorCode::BadScore, "score must lie in [0, 1]", ind.id, i + 1, "score");
    }
    if (ind.outcome != 0 && ind.outcome != 1) {
      throw Error(ErrorCode::BadOutcome, "outcome must be 0 or 1", ind.id, i + 1, "outcome");
    }
    if (!(ind.amount >= 0.0) || !std::isfinite(ind.amount)) {
      throw Error(ErrorCode::BadAmount, "amount must be finite and non-negative", ind.id, i + 1,
                  "amount");
    }
    if (!ids.insert(ind.id).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate id '" + ind.id + "'", ind.id, i + 1, "id");
    }
    labels.insert(ind.group);
  }

  Dataset ds;
  ds.vocabulary_.assign(labels.begin(), labels.end());
  ds.group_index_.reserve(individuals.size());
  for (const Individual& ind : individuals) {
    auto it = std::lower_bound(ds.vocabulary_.begin(), ds.vocabulary_.end(), ind.group);
    ds.group_index_.push_back(static_cast<std::size_t>(it - ds.vocabulary_.begin()));
  }
  ds.individuals_ = std::move(individuals);
  return ds;
}

std::size_t Dataset::find_group(const std::string& label) const {
  auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), label);
  if (it == vocabulary_.end() || *it != label) return vocabulary_.size();
  return static_cast<std::size_t>(it - vocabulary_.begin());
}

const std::vector<std::string>& groups(const Dataset& dataset) { return dataset.groups(); }

bool is_valid_threshold(double t) noexcept { return t >= 0.0 && t <= kRejectAll; }

std::vector<double> resolve_thresholds(const Dataset& dataset, const DecisionRule& rule) {
  std::vector<double> out(dataset.group_count());
  if (const auto* u = std::get_if<UniformRule>(&rule)) {
    if (!is_valid_threshold(u->threshold)) {
      throw Error(ErrorCode::InvalidRange, "threshold must lie in [0, 1.01]");
    }
    std::fill(out.begin(), out.end(), u->threshold);
    return out;
  }
  const auto& per_group = std::get<GroupRule>(rule).thresholds;
  for (std::size_t g = 0; g < out.size(); ++g) {
    const std::string& label = dataset.groups()[g];
    auto it = per_group.find(label);
    if (it == per_group.end()) {
      throw Error(ErrorCode::MissingGroupThreshold, "no threshold for group '" + label + "'",
                  label);
    }
    if (!is_valid_threshold(it->second)) {
      throw Error(ErrorCode::InvalidRange, "threshold for group '" + label + "' must lie in [0, 1.01]",
                  label);
    }
    out[g] = it->second;
  }
  if (per_group.size() != out.size()) {
    for (const auto& [label, t] : per_group) {
      if (dataset.find_group(label) == dataset.group_count()) {
        throw Error(ErrorCode::InvalidArgument, "threshold given for unknown group '" + label + "'",
                    label);
      }
    }
  }
  return out;
}

void apply_thresholds(const Dataset& dataset, std::span<const double> thresholds,
                      DecisionVector& out) {
  out.resize(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out[i] = dataset[i].score >= thresholds[dataset.group_index(i)] ? 1 : 0;
  }
}

DecisionVector apply_rule(const Dataset& dataset, const DecisionRule& rule) {
  const std::vector<double> thresholds = resolve_thresholds(dataset, rule);
  DecisionVector out;
  apply_thresholds(dataset, thresholds, out);
  return out;
}

}  // namespace fairfront
