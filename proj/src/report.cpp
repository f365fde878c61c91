#include "fairfront/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace fairfront {

using nlohmann::json;

std::string format_real(double value) {
  if (value == 0.0) return "0";
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double round_real(double value) {
  if (!std::isfinite(value)) return value;
  if (value == 0.0) return 0.0;
  return std::strtod(format_real(value).c_str(), nullptr);
}

std::string rule_key(const std::vector<std::string>& groups, std::span<const double> thresholds) {
  std::string key;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (g) key += ',';
    key += groups[g];
    key += '=';
    key += format_real(thresholds[g]);
  }
  return key;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::vector<std::size_t> selected_rows(const SweepResult& result, bool viable_only,
                                       bool front_only) {
  std::vector<std::size_t> rows;
  if (front_only) {
    rows = front_path(result);
  } else {
    rows.reserve(result.size());
    for (std::size_t i = 0; i < result.size(); ++i) rows.push_back(i);
  }
  if (viable_only) {
    std::erase_if(rows, [&](std::size_t i) { return !result.viable[i]; });
  }
  return rows;
}

json group_map(const std::vector<std::string>& groups, std::span<const double> values) {
  json out = json::object();
  for (std::size_t g = 0; g < groups.size(); ++g) out[groups[g]] = round_real(values[g]);
  return out;
}

template <typename Int>
json count_map(const std::vector<std::string>& groups, const std::vector<Int>& values) {
  json out = json::object();
  for (std::size_t g = 0; g < groups.size(); ++g) out[groups[g]] = values[g];
  return out;
}

}  // namespace

std::string sweep_to_csv(const SweepResult& result, bool front_only) {
  std::string out;
  for (const auto& g : result.groups) out += csv_escape("threshold_" + g) + ',';
  out += "dm_utility,fairness_score";
  for (const auto& g : result.groups) out += ',' + csv_escape("utility_" + g);
  out += ",on_front,viable\n";
  for (std::size_t i : selected_rows(result, false, front_only)) {
    for (double t : result.thresholds_of(i)) out += format_real(t) + ',';
    out += format_real(result.dm_utility[i]);
    out += ',';
    out += format_real(result.fairness_score[i]);
    for (double u : result.utilities_of(i)) out += ',' + format_real(u);
    out += result.on_front[i] ? ",1" : ",0";
    out += result.viable[i] ? ",1\n" : ",0\n";
  }
  return out;
}

json point_to_json(const SweepResult& result, std::size_t i) {
  return {{"index", i},
          {"key", rule_key(result.groups, result.thresholds_of(i))},
          {"thresholds", group_map(result.groups, result.thresholds_of(i))},
          {"dm_utility", round_real(result.dm_utility[i])},
          {"fairness_score", round_real(result.fairness_score[i])},
          {"group_utilities", group_map(result.groups, result.utilities_of(i))},
          {"on_front", result.on_front[i] != 0},
          {"viable", result.viable[i] != 0}};
}

json sweep_to_json(const SweepResult& result, bool viable_only, bool front_only) {
  std::size_t front_size = 0;
  std::size_t viable_count = 0;
  for (std::size_t i = 0; i < result.size(); ++i) {
    front_size += result.on_front[i];
    viable_count += result.viable[i];
  }
  json extremes = nullptr;
  if (front_size > 0) {
    const auto [dm, fair] = extreme_indices(result);
    extremes = {{"max_dm_utility", dm}, {"max_fairness", fair}};
  }
  json points = json::array();
  for (std::size_t i : selected_rows(result, viable_only, front_only)) {
    points.push_back(point_to_json(result, i));
  }
  return {{"groups", result.groups},
          {"config_digest", result.config_digest},
          {"claim_counts", count_map(result.groups, result.claim_counts)},
          {"size", result.size()},
          {"front_size", front_size},
          {"viable_count", viable_count},
          {"extremes", extremes},
          {"points", std::move(points)}};
}

std::string sweep_summary(const SweepResult& result) {
  std::size_t front_size = 0;
  std::size_t viable_count = 0;
  for (std::size_t i = 0; i < result.size(); ++i) {
    front_size += result.on_front[i];
    viable_count += result.viable[i];
  }
  std::string out = std::to_string(result.size()) + " rules, " + std::to_string(front_size) +
                    " on front, " + std::to_string(viable_count) + " viable\n";
  if (front_size > 0) {
    const auto [dm, fair] = extreme_indices(result);
    auto line = [&](const char* label, std::size_t i) {
      return std::string(label) + rule_key(result.groups, result.thresholds_of(i)) +
             " dm_utility=" + format_real(result.dm_utility[i]) +
             " fairness_score=" + format_real(result.fairness_score[i]) + '\n';
    };
    out += line("max dm utility: ", dm);
    out += line("max fairness:   ", fair);
  }
  return out;
}

json evaluation_to_json(const RuleEvaluation& e) {
  json rates = json::object();
  for (std::size_t g = 0; g < e.groups.size(); ++g) rates[e.groups[g]] = round_real(e.acceptance_rate(g));
  return {{"key", rule_key(e.groups, e.thresholds)},
          {"thresholds", group_map(e.groups, e.thresholds)},
          {"dm_utility", round_real(e.dm_utility)},
          {"fairness_score", round_real(e.fairness_score)},
          {"group_utilities", group_map(e.groups, e.positions.utilities)},
          {"claim_counts", count_map(e.groups, e.positions.counts)},
          {"group_sizes", count_map(e.groups, e.group_sizes)},
          {"accepted", count_map(e.groups, e.accepted)},
          {"acceptance_rates", rates}};
}

json report_to_json(const ValidationReport& r) {
  json out = {{"valid", r.ok()},
              {"groups", r.groups},
              {"group_sizes", count_map(r.groups, r.group_sizes)},
              {"claim_counts", r.claim_counts.empty() ? json::object()
                                                       : count_map(r.groups, r.claim_counts)},
              {"empty_positions", r.empty_positions}};
  if (!r.problem.empty()) {
    out["problem"] = {{"code", std::string(error_code_name(r.problem_code))},
                      {"message", r.problem}};
  }
  return out;
}

json error_to_json(const Error& e) {
  json out = {{"code", std::string(error_code_name(e.code()))},
              {"message", e.what()},
              {"detail", e.detail()}};
  if (e.row()) out["row"] = *e.row();
  if (!e.column().empty()) out["column"] = e.column();
  return out;
}

}  // namespace fairfront
