#pragma once

// Decision subjects, datasets and threshold decision rules.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace fairfront {

/// Threshold value that rejects everyone: acceptance is `score >= threshold`
/// and scores never exceed 1.
inline constexpr double kRejectAll = 1.01;

using AttributeValue = std::variant<double, std::string>;

struct Individual {
  std::string id;
  double score = 0.0;  // P(Y=1 | X) from the upstream model
  std::string group;
  int outcome = 0;
  double amount = 1.0;
  std::map<std::string, AttributeValue> attributes;

  bool operator==(const Individual&) const = default;
};

/// Immutable, validated collection of individuals. Group labels are
/// indexed by their position in the sorted vocabulary.
class Dataset {
 public:
  /// Throws Error on an empty list, out-of-range score/outcome/amount or a
  /// duplicate id.
  static Dataset create(std::vector<Individual> individuals);

  std::span<const Individual> individuals() const noexcept { return individuals_; }
  std::size_t size() const noexcept { return individuals_.size(); }
  const Individual& operator[](std::size_t i) const { return individuals_[i]; }

  const std::vector<std::string>& groups() const noexcept { return vocabulary_; }
  std::size_t group_count() const noexcept { return vocabulary_.size(); }

  /// Index into groups() of individual i.
  std::size_t group_index(std::size_t i) const { return group_index_[i]; }

  /// Index of a label in groups(), or group_count() when absent.
  std::size_t find_group(const std::string& label) const;

 private:
  Dataset() = default;

  std::vector<Individual> individuals_;
  std::vector<std::string> vocabulary_;
  std::vector<std::size_t> group_index_;
};

/// Free-function form of Dataset::groups().
const std::vector<std::string>& groups(const Dataset& dataset);

struct UniformRule {
  double threshold = 0.0;
  bool operator==(const UniformRule&) const = default;
};

struct GroupRule {
  std::map<std::string, double> thresholds;
  bool operator==(const GroupRule&) const = default;
};

using DecisionRule = std::variant<UniformRule, GroupRule>;

using DecisionVector = std::vector<std::uint8_t>;

bool is_valid_threshold(double t) noexcept;

/// Thresholds of `rule` laid out in dataset group order.
/// Throws MissingGroupThreshold or InvalidRange.
std::vector<double> resolve_thresholds(const Dataset& dataset, const DecisionRule& rule);

DecisionVector apply_rule(const Dataset& dataset, const DecisionRule& rule);

/// Same as apply_rule with thresholds already resolved to group order; `out`
/// is resized to the dataset size.
void apply_thresholds(const Dataset& dataset, std::span<const double> thresholds,
                      DecisionVector& out);

}  // namespace fairfront
