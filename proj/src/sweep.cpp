#include "fairfront/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "fairfront/error.hpp"

namespace fairfront {

std::size_t ThresholdGrid::combinations() const noexcept {
  std::size_t total = 1;
  for (const auto& list : per_group) {
    if (list.empty()) return 0;
    if (total > std::numeric_limits<std::size_t>::max() / list.size()) {
      return std::numeric_limits<std::size_t>::max();
    }
    total *= list.size();
  }
  return total;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double span = hi - lo;
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out[i] = lo + span * (static_cast<double>(i) / last);
  }
  out[n - 1] = hi;
  return out;
}

ThresholdGrid threshold_grid(const Dataset& dataset, std::size_t n, double lo, double hi) {
  if (n < 2 || !(lo >= 0.0) || !(lo < hi) || !(hi <= kRejectAll)) {
    throw Error(ErrorCode::InvalidRange, "grid needs n >= 2 and 0 <= lo < hi <= 1.01");
  }
  ThresholdGrid grid;
  grid.groups = dataset.groups();
  grid.per_group.assign(dataset.group_count(), linspace(lo, hi, n));
  return grid;
}

ThresholdGrid custom_grid(const Dataset& dataset,
                          const std::vector<std::pair<std::string, std::vector<double>>>& lists) {
  ThresholdGrid grid;
  grid.groups = dataset.groups();
  grid.per_group.resize(dataset.group_count());
  std::vector<bool> seen(dataset.group_count(), false);
  for (const auto& [label, values] : lists) {
    const std::size_t g = dataset.find_group(label);
    if (g == dataset.group_count()) {
      throw Error(ErrorCode::InvalidRange, "grid names unknown group '" + label + "'", label);
    }
    if (values.empty()) {
      throw Error(ErrorCode::InvalidRange, "grid for group '" + label + "' is empty", label);
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (!is_valid_threshold(values[j]) || (j > 0 && !(values[j] > values[j - 1]))) {
        throw Error(ErrorCode::InvalidRange,
                    "grid for group '" + label + "' must be strictly increasing within [0, 1.01]",
                    label);
      }
    }
    grid.per_group[g] = values;
    seen[g] = true;
  }
  for (std::size_t g = 0; g < seen.size(); ++g) {
    if (!seen[g]) {
      throw Error(ErrorCode::MissingGroupThreshold, "grid has no thresholds for group '" +
                                                        grid.groups[g] + "'",
                  grid.groups[g]);
    }
  }
  return grid;
}

DecisionRule EvaluatedRule::rule() const {
  GroupRule rule;
  for (std::size_t g = 0; g < thresholds.size(); ++g) {
    rule.thresholds.emplace(positions.groups[g], thresholds[g]);
  }
  return rule;
}

std::span<const double> SweepResult::thresholds_of(std::size_t i) const {
  return std::span<const double>(thresholds).subspan(i * groups.size(), groups.size());
}

std::span<const double> SweepResult::utilities_of(std::size_t i) const {
  return std::span<const double>(group_utilities).subspan(i * groups.size(), groups.size());
}

EvaluatedRule SweepResult::at(std::size_t i) const {
  if (i >= size()) {
    throw Error(ErrorCode::InvalidArgument, "rule index out of range", std::to_string(i));
  }
  EvaluatedRule rule;
  rule.index = i;
  auto t = thresholds_of(i);
  rule.thresholds.assign(t.begin(), t.end());
  rule.dm_utility = dm_utility[i];
  rule.fairness_score = fairness_score[i];
  rule.positions.groups = groups;
  auto u = utilities_of(i);
  rule.positions.utilities.assign(u.begin(), u.end());
  rule.positions.counts = claim_counts;
  rule.on_front = on_front[i] != 0;
  rule.viable = viable[i] != 0;
  return rule;
}

void SweepResult::append(std::span<const double> rule_thresholds, double dm, double fairness,
                         std::span<const double> utilities) {
  thresholds.insert(thresholds.end(), rule_thresholds.begin(), rule_thresholds.end());
  group_utilities.insert(group_utilities.end(), utilities.begin(), utilities.end());
  dm_utility.push_back(dm);
  fairness_score.push_back(fairness);
  on_front.push_back(0);
  viable.push_back(0);
}

SweepResult sweep(const Dataset& dataset, const ThresholdGrid& grid, const DMUtilitySpec& dm_spec,
                  const DSUtilitySpec& ds_spec, const ClaimsDifferentiator& differentiator,
                  const PatternOfJustice& pattern, EvaluationMode mode,
                  const SweepOptions& options) {
  validate(dm_spec);
  validate(ds_spec);
  validate(pattern);
  if (dataset.group_count() < 2) {
    throw Error(ErrorCode::TooFewGroups, "fairness analysis needs at least two groups");
  }
  if (grid.groups != dataset.groups() || grid.per_group.size() != grid.groups.size()) {
    throw Error(ErrorCode::InvalidArgument, "grid groups do not match the dataset");
  }
  const std::size_t total = grid.combinations();
  if (total == 0) {
    throw Error(ErrorCode::EmptySweep, "grid has an empty threshold list");
  }
  if (total > options.cap) {
    throw Error(ErrorCode::SweepTooLarge,
                "sweep of " + std::to_string(total) + " rules exceeds cap of " +
                    std::to_string(options.cap),
                std::to_string(total));
  }
  if (const auto* prio = std::get_if<Prioritarian>(&pattern);
      prio && prio->weights.size() != dataset.group_count()) {
    throw Error(ErrorCode::WeightLengthMismatch,
                "expected " + std::to_string(dataset.group_count()) + " weights, got " +
                    std::to_string(prio->weights.size()),
                "weights");
  }

  const std::vector<bool> mask = claims_mask(dataset, differentiator);
  const std::vector<std::size_t> counts = claim_counts(dataset, mask);
  for (std::size_t g = 0; g < counts.size(); ++g) {
    if (counts[g] == 0) {
      throw Error(ErrorCode::EmptyPosition,
                  "group '" + dataset.groups()[g] + "' has no claim holders", dataset.groups()[g]);
    }
  }

  const std::size_t k = dataset.group_count();
  SweepResult result;
  result.groups = dataset.groups();
  result.claim_counts = counts;
  result.config_digest = options.config_digest;
  result.thresholds.resize(total * k);
  result.group_utilities.resize(total * k);
  result.dm_utility.resize(total);
  result.fairness_score.resize(total);
  result.on_front.assign(total, 0);
  result.viable.assign(total, 0);

  auto evaluate_range = [&](std::size_t begin, std::size_t end) {
    DecisionVector decisions;
    std::vector<double> thresholds(k);
    std::size_t since_report = 0;
    for (std::size_t r = begin; r < end; ++r) {
      std::size_t rest = r;
      for (std::size_t g = k; g-- > 0;) {
        const auto& list = grid.per_group[g];
        thresholds[g] = list[rest % list.size()];
        rest /= list.size();
      }
      apply_thresholds(dataset, thresholds, decisions);
      std::span<double> utilities(result.group_utilities.data() + r * k, k);
      accumulate_position_means(dataset, decisions, ds_spec, mask, mode, counts, utilities);
      std::copy(thresholds.begin(), thresholds.end(), result.thresholds.begin() + r * k);
      result.dm_utility[r] = dm_utility_total(dataset, decisions, dm_spec, mode);
      result.fairness_score[r] = fairness_score(std::span<const double>(utilities), pattern);
      if (options.progress && ++since_report == 64) {
        options.progress->fetch_add(since_report, std::memory_order_relaxed);
        since_report = 0;
      }
    }
    if (options.progress && since_report) {
      options.progress->fetch_add(since_report, std::memory_order_relaxed);
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(options.threads == 0 ? 1 : options.threads, 1, total);
  if (workers == 1) {
    evaluate_range(0, total);
    return result;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(total, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        try {
          evaluate_range(begin, end);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

std::vector<std::uint8_t> pareto_flags(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "coordinate arrays differ in length");
  }
  const std::size_t m = x.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] > x[b];
    return y[a] > y[b];
  });

  // Walk blocks of equal x from the right. A point is on the front iff it
  // has the block's best y and that y beats every y seen at a larger x.
  std::vector<std::uint8_t> flags(m, 0);
  double best_y_at_larger_x = -std::numeric_limits<double>::infinity();
  bool any_larger = false;
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i;
    while (j < m && x[order[j]] == x[order[i]]) ++j;
    const double block_best = y[order[i]];
    if (!any_larger || block_best > best_y_at_larger_x) {
      for (std::size_t t = i; t < j && y[order[t]] == block_best; ++t) flags[order[t]] = 1;
    }
    if (!any_larger || block_best > best_y_at_larger_x) best_y_at_larger_x = block_best;
    any_larger = true;
    i = j;
  }
  return flags;
}

SweepResult pareto_front(SweepResult result) {
  if (result.empty()) throw Error(ErrorCode::EmptySweep, "no rules to analyse");
  result.on_front = pareto_flags(result.dm_utility, result.fairness_score);
  return result;
}

SweepResult filter_viable(SweepResult result, double floor) {
  for (std::size_t i = 0; i < result.size(); ++i) {
    result.viable[i] = result.dm_utility[i] >= floor ? 1 : 0;
  }
  return result;
}

std::pair<std::size_t, std::size_t> extreme_indices(const SweepResult& result) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::size_t best_dm = none;
  std::size_t best_fair = none;
  const auto& dm = result.dm_utility;
  const auto& fair = result.fairness_score;
  for (std::size_t i = 0; i < result.size(); ++i) {
    if (!result.on_front[i]) continue;
    if (best_dm == none || dm[i] > dm[best_dm] ||
        (dm[i] == dm[best_dm] && fair[i] > fair[best_dm])) {
      best_dm = i;
    }
    if (best_fair == none || fair[i] > fair[best_fair] ||
        (fair[i] == fair[best_fair] && dm[i] > dm[best_fair])) {
      best_fair = i;
    }
  }
  if (best_dm == none) throw Error(ErrorCode::EmptySweep, "no rules on the front");
  return {best_dm, best_fair};
}

std::pair<EvaluatedRule, EvaluatedRule> extreme_points(const SweepResult& result) {
  const auto [dm, fair] = extreme_indices(result);
  return {result.at(dm), result.at(fair)};
}

std::vector<std::size_t> front_path(const SweepResult& result) {
  std::vector<std::size_t> path;
  for (std::size_t i = 0; i < result.size(); ++i) {
    if (result.on_front[i]) path.push_back(i);
  }
  const auto& dm = result.dm_utility;
  const auto& fair = result.fairness_score;
  std::sort(path.begin(), path.end(), [&](std::size_t a, std::size_t b) {
    if (dm[a] != dm[b]) return dm[a] > dm[b];
    if (fair[a] != fair[b]) return fair[a] < fair[b];
    return a < b;
  });
  return path;
}

}  // namespace fairfront
