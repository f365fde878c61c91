#include "fairfront/analysis.hpp"

#include "fairfront/error.hpp"
#include "fairfront/utility.hpp"

namespace fairfront {

ValidationReport validate_inputs(const Dataset& dataset, const ValueConfig& config) {
  ValidationReport report;
  report.groups = dataset.groups();
  report.group_sizes.assign(dataset.group_count(), 0);
  for (std::size_t i = 0; i < dataset.size(); ++i) ++report.group_sizes[dataset.group_index(i)];

  try {
    const std::vector<bool> mask = claims_mask(dataset, config.differentiator);
    report.claim_counts = claim_counts(dataset, mask);
    for (std::size_t g = 0; g < report.groups.size(); ++g) {
      if (report.claim_counts[g] == 0) report.empty_positions.push_back(report.groups[g]);
    }
    check_config_against(config, dataset);
  } catch (const Error& e) {
    report.problem = e.what();
    report.problem_code = e.code();
  }
  return report;
}

RuleEvaluation evaluate_rule(const Dataset& dataset, const ValueConfig& config,
                             const DecisionRule& rule) {
  check_config_against(config, dataset);
  validate(config.pattern);
  RuleEvaluation out;
  out.groups = dataset.groups();
  out.thresholds = resolve_thresholds(dataset, rule);
  const DecisionVector decisions = apply_rule(dataset, rule);
  out.dm_utility = dm_utility_total(dataset, decisions, config.dm_spec, config.mode);
  out.positions =
      position_utilities(dataset, decisions, config.ds_spec, config.differentiator, config.mode);
  out.fairness_score = fairness_score(out.positions, config.pattern);
  out.group_sizes.assign(dataset.group_count(), 0);
  out.accepted.assign(dataset.group_count(), 0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    ++out.group_sizes[dataset.group_index(i)];
    out.accepted[dataset.group_index(i)] += decisions[i];
  }
  return out;
}

SweepResult run_sweep(const Dataset& dataset, const ValueConfig& config, SweepOptions options) {
  check_config_against(config, dataset);
  options.config_digest = config_digest(config);
  SweepResult result = sweep(dataset, make_grid(config, dataset), config.dm_spec, config.ds_spec,
                             config.differentiator, config.pattern, config.mode, options);
  return filter_viable(pareto_front(std::move(result)), config.viability_floor);
}

}  // namespace fairfront
