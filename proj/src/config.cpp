#include <openssl/evp.h>

#include <cmath>
#include <set>

#include "fairfront/error.hpp"
#include "fairfront/io.hpp"

namespace fairfront {

using nlohmann::json;

namespace {

[[noreturn]] void violation(const std::string& path, const std::string& reason) {
  throw Error(ErrorCode::SchemaViolation, path + ": " + reason, path);
}

const json& member(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) violation(path + "/" + key, "is required");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) violation(path, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) violation(path, "must be finite");
  return d;
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) violation(path, "must be true or false");
  return v.get<bool>();
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) violation(path, "must be a string");
  return v.get<std::string>();
}

void expect_object(const json& v, const std::string& path) {
  if (!v.is_object()) violation(path, "must be an object");
}

void only_keys(const json& obj, std::initializer_list<std::string_view> allowed,
               const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) violation(path + "/" + key, "unknown key");
  }
}

/// Single-key object {"name": body}; a bare string "name" is accepted for
/// variants without parameters.
std::pair<std::string, json> tagged(const json& v, const std::string& path) {
  if (v.is_string()) return {v.get<std::string>(), json::object()};
  expect_object(v, path);
  if (v.size() != 1) violation(path, "must have exactly one key naming the variant");
  return {v.begin().key(), v.begin().value()};
}

UtilityTable table_from(const json& v, const std::string& path) {
  expect_object(v, path);
  only_keys(v, {"d1y1", "d1y0", "d0y1", "d0y0"}, path);
  UtilityTable t;
  t.accept_repay = number(member(v, "d1y1", path), path + "/d1y1");
  t.accept_default = number(member(v, "d1y0", path), path + "/d1y0");
  t.reject_repay = number(member(v, "d0y1", path), path + "/d0y1");
  t.reject_default = number(member(v, "d0y0", path), path + "/d0y0");
  return t;
}

json table_to(const UtilityTable& t) {
  return {{"d1y1", t.accept_repay},
          {"d1y0", t.accept_default},
          {"d0y1", t.reject_repay},
          {"d0y0", t.reject_default}};
}

DMUtilitySpec dm_from(const json& v, const std::string& path) {
  expect_object(v, path);
  if (v.contains("lending")) {
    only_keys(v, {"lending"}, path);
    const json& body = v["lending"];
    const std::string p = path + "/lending";
    expect_object(body, p);
    only_keys(body, {"interest_rate"}, p);
    const double z = number(member(body, "interest_rate", p), p + "/interest_rate");
    if (!(z > 0.0)) violation(p + "/interest_rate", "must be > 0");
    return LendingUtility{z};
  }
  if (v.contains("table")) {
    only_keys(v, {"table", "amount_scaled"}, path);
    TableUtility t;
    t.table = table_from(v["table"], path + "/table");
    if (v.contains("amount_scaled")) t.amount_scaled = boolean(v["amount_scaled"], path + "/amount_scaled");
    return t;
  }
  violation(path, "must contain 'lending' or 'table'");
}

json dm_to(const DMUtilitySpec& spec) {
  if (const auto* lending = std::get_if<LendingUtility>(&spec)) {
    return {{"lending", {{"interest_rate", lending->interest_rate}}}};
  }
  const auto& t = std::get<TableUtility>(spec);
  return {{"table", table_to(t.table)}, {"amount_scaled", t.amount_scaled}};
}

DSUtilitySpec ds_from(const json& v, const std::string& path) {
  expect_object(v, path);
  only_keys(v, {"table", "per_group", "amount_scaled"}, path);
  DSUtilitySpec spec;
  spec.base = table_from(member(v, "table", path), path + "/table");
  if (v.contains("per_group")) {
    const std::string p = path + "/per_group";
    expect_object(v["per_group"], p);
    for (const auto& [group, table] : v["per_group"].items()) {
      spec.per_group_overrides.emplace(group, table_from(table, p + "/" + group));
    }
  }
  if (v.contains("amount_scaled")) spec.amount_scaled = boolean(v["amount_scaled"], path + "/amount_scaled");
  return spec;
}

json ds_to(const DSUtilitySpec& spec) {
  json per_group = json::object();
  for (const auto& [group, table] : spec.per_group_overrides) per_group[group] = table_to(table);
  return {{"table", table_to(spec.base)},
          {"per_group", per_group},
          {"amount_scaled", spec.amount_scaled}};
}

std::optional<CompareOp> parse_op(std::string_view s) {
  if (s == "=" || s == "==") return CompareOp::Eq;
  if (s == "!=" || s == "≠") return CompareOp::Ne;
  if (s == "<") return CompareOp::Lt;
  if (s == "<=" || s == "≤") return CompareOp::Le;
  if (s == ">") return CompareOp::Gt;
  if (s == ">=" || s == "≥") return CompareOp::Ge;
  return std::nullopt;
}

ClaimsDifferentiator claims_from(const json& v, const std::string& path) {
  const auto [name, body] = tagged(v, path);
  if (name == "all") return AllClaims{};
  if (name == "outcome_equals") {
    if (!body.is_number_integer() || (body.get<long long>() != 0 && body.get<long long>() != 1)) {
      violation(path + "/outcome_equals", "must be 0 or 1");
    }
    return OutcomeEquals{static_cast<int>(body.get<long long>())};
  }
  if (name == "attribute") {
    const std::string p = path + "/attribute";
    expect_object(body, p);
    only_keys(body, {"name", "op", "value"}, p);
    AttributePredicate pred;
    pred.attribute = string(member(body, "name", p), p + "/name");
    const auto op = parse_op(string(member(body, "op", p), p + "/op"));
    if (!op) violation(p + "/op", "must be one of =, !=, <, <=, >, >=");
    pred.op = *op;
    const json& value = member(body, "value", p);
    if (value.is_string()) {
      pred.value = value.get<std::string>();
    } else {
      pred.value = number(value, p + "/value");
    }
    return pred;
  }
  violation(path, "unknown claims differentiator '" + name + "'");
}

json claims_to(const ClaimsDifferentiator& d) {
  if (std::holds_alternative<AllClaims>(d)) return "all";
  if (const auto* eq = std::get_if<OutcomeEquals>(&d)) return {{"outcome_equals", eq->outcome}};
  const auto& pred = std::get<AttributePredicate>(d);
  json value = std::holds_alternative<double>(pred.value) ? json(std::get<double>(pred.value))
                                                          : json(std::get<std::string>(pred.value));
  return {{"attribute",
           {{"name", pred.attribute}, {"op", std::string(compare_op_name(pred.op))}, {"value", value}}}};
}

PatternOfJustice pattern_from(const json& v, const std::string& path) {
  const auto [name, body] = tagged(v, path);
  const std::string p = path + "/" + name;
  if (name == "egalitarian" || name == "maximin") {
    if (!body.is_object() || !body.empty()) violation(p, "takes no parameters");
    if (name == "egalitarian") return Egalitarian{};
    return Maximin{};
  }
  if (name == "prioritarian") {
    expect_object(body, p);
    only_keys(body, {"weights"}, p);
    const json& weights = member(body, "weights", p);
    if (!weights.is_array() || weights.empty()) violation(p + "/weights", "must be a non-empty array");
    Prioritarian prio;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      const double w = number(weights[j], p + "/weights/" + std::to_string(j));
      if (w < 0.0) violation(p + "/weights/" + std::to_string(j), "must be non-negative");
      prio.weights.push_back(w);
    }
    for (std::size_t j = 1; j < prio.weights.size(); ++j) {
      if (prio.weights[j] > prio.weights[j - 1]) violation(p + "/weights", "must be non-increasing");
    }
    if (prio.weights.front() <= 0.0) violation(p + "/weights", "must contain a positive weight");
    return prio;
  }
  if (name == "sufficientarian") {
    expect_object(body, p);
    only_keys(body, {"tau"}, p);
    return Sufficientarian{number(member(body, "tau", p), p + "/tau")};
  }
  violation(path, "unknown pattern '" + name + "'");
}

json pattern_to(const PatternOfJustice& pattern) {
  if (std::holds_alternative<Egalitarian>(pattern)) return "egalitarian";
  if (std::holds_alternative<Maximin>(pattern)) return "maximin";
  if (const auto* prio = std::get_if<Prioritarian>(&pattern)) {
    return {{"prioritarian", {{"weights", prio->weights}}}};
  }
  return {{"sufficientarian", {{"tau", std::get<Sufficientarian>(pattern).tau}}}};
}

GridSpec grid_from(const json& v, const std::string& path) {
  expect_object(v, path);
  if (v.contains("per_group")) {
    only_keys(v, {"per_group"}, path);
    const std::string p = path + "/per_group";
    expect_object(v["per_group"], p);
    if (v["per_group"].empty()) violation(p, "must name at least one group");
    ExplicitGrid grid;
    for (const auto& [group, list] : v["per_group"].items()) {
      const std::string gp = p + "/" + group;
      if (!list.is_array() || list.empty()) violation(gp, "must be a non-empty array");
      std::vector<double> values;
      for (std::size_t j = 0; j < list.size(); ++j) {
        const double t = number(list[j], gp + "/" + std::to_string(j));
        if (!is_valid_threshold(t)) violation(gp + "/" + std::to_string(j), "must lie in [0, 1.01]");
        if (!values.empty() && !(t > values.back())) violation(gp, "must be strictly increasing");
        values.push_back(t);
      }
      grid.per_group.emplace_back(group, std::move(values));
    }
    return grid;
  }
  only_keys(v, {"n", "lo", "hi"}, path);
  LinspaceGrid grid;
  if (v.contains("n")) {
    if (!v["n"].is_number_integer() || v["n"].get<long long>() < 2) {
      violation(path + "/n", "must be an integer >= 2");
    }
    grid.n = static_cast<std::size_t>(v["n"].get<long long>());
  }
  if (v.contains("lo")) grid.lo = number(v["lo"], path + "/lo");
  if (v.contains("hi")) grid.hi = number(v["hi"], path + "/hi");
  if (!(grid.lo >= 0.0 && grid.lo < grid.hi && grid.hi <= kRejectAll)) {
    violation(path, "needs 0 <= lo < hi <= 1.01");
  }
  return grid;
}

json grid_to(const GridSpec& grid) {
  if (const auto* lin = std::get_if<LinspaceGrid>(&grid)) {
    return {{"n", lin->n}, {"lo", lin->lo}, {"hi", lin->hi}};
  }
  json per_group = json::object();
  for (const auto& [group, values] : std::get<ExplicitGrid>(grid).per_group) per_group[group] = values;
  return {{"per_group", per_group}};
}

}  // namespace

std::string_view mode_name(EvaluationMode mode) noexcept {
  return mode == EvaluationMode::Expected ? "expected" : "empirical";
}

std::string_view compare_op_name(CompareOp op) noexcept {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "=";
}

ValueConfig config_from_json(const json& doc) {
  expect_object(doc, "");
  only_keys(doc, {"dm_utility", "ds_utility", "claims", "positions", "pattern", "mode", "grid",
                  "viability_floor"},
            "");
  ValueConfig config;
  config.dm_spec = dm_from(member(doc, "dm_utility", ""), "/dm_utility");
  config.ds_spec = ds_from(member(doc, "ds_utility", ""), "/ds_utility");
  config.differentiator = claims_from(member(doc, "claims", ""), "/claims");
  if (doc.contains("positions")) {
    config.group_column = string(doc["positions"], "/positions");
    if (config.group_column.empty()) violation("/positions", "must name a column");
  }
  config.pattern = pattern_from(member(doc, "pattern", ""), "/pattern");
  if (doc.contains("mode")) {
    const std::string mode = string(doc["mode"], "/mode");
    if (mode == "expected") {
      config.mode = EvaluationMode::Expected;
    } else if (mode == "empirical") {
      config.mode = EvaluationMode::Empirical;
    } else {
      violation("/mode", "must be 'expected' or 'empirical'");
    }
  }
  if (doc.contains("grid")) config.grid = grid_from(doc["grid"], "/grid");
  if (doc.contains("viability_floor")) {
    const json& floor = doc["viability_floor"];
    if (floor.is_string() && floor.get<std::string>() == "-inf") {
      config.viability_floor = -std::numeric_limits<double>::infinity();
    } else {
      config.viability_floor = number(floor, "/viability_floor");
    }
  }
  return config;
}

ValueConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("invalid JSON: ") + e.what(), "");
  }
  return config_from_json(doc);
}

json config_to_json(const ValueConfig& config) {
  json floor = std::isinf(config.viability_floor) ? json("-inf") : json(config.viability_floor);
  return {{"dm_utility", dm_to(config.dm_spec)},
          {"ds_utility", ds_to(config.ds_spec)},
          {"claims", claims_to(config.differentiator)},
          {"positions", config.group_column},
          {"pattern", pattern_to(config.pattern)},
          {"mode", std::string(mode_name(config.mode))},
          {"grid", grid_to(config.grid)},
          {"viability_floor", floor}};
}

std::string serialize_config(const ValueConfig& config) { return config_to_json(config).dump(); }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::InvalidArgument, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string config_digest(const ValueConfig& config) {
  return sha256_hex(serialize_config(config));
}

void check_config_against(const ValueConfig& config, const Dataset& dataset) {
  if (dataset.group_count() < 2) {
    violation("/positions", "column '" + config.group_column + "' has fewer than two groups");
  }
  if (const auto* prio = std::get_if<Prioritarian>(&config.pattern);
      prio && prio->weights.size() != dataset.group_count()) {
    violation("/pattern/prioritarian/weights",
              "expected " + std::to_string(dataset.group_count()) + " weights (one per group), got " +
                  std::to_string(prio->weights.size()));
  }
  for (const auto& [group, table] : config.ds_spec.per_group_overrides) {
    if (dataset.find_group(group) == dataset.group_count()) {
      violation("/ds_utility/per_group/" + group, "names a group absent from the dataset");
    }
  }
  if (const auto* grid = std::get_if<ExplicitGrid>(&config.grid)) {
    std::set<std::string> named;
    for (const auto& [group, values] : grid->per_group) {
      if (dataset.find_group(group) == dataset.group_count()) {
        violation("/grid/per_group/" + group, "names a group absent from the dataset");
      }
      named.insert(group);
    }
    for (const auto& group : dataset.groups()) {
      if (!named.contains(group)) violation("/grid/per_group/" + group, "is required");
    }
  }
}

ThresholdGrid make_grid(const ValueConfig& config, const Dataset& dataset) {
  if (const auto* lin = std::get_if<LinspaceGrid>(&config.grid)) {
    return threshold_grid(dataset, lin->n, lin->lo, lin->hi);
  }
  return custom_grid(dataset, std::get<ExplicitGrid>(config.grid).per_group);
}

}  // namespace fairfront
