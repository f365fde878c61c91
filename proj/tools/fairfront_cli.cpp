// fairfront: batch interface over the fairfront C API.
//
//   fairfront validate          --dataset d.csv --config c.json
//   fairfront optimal-threshold --config c.json
//   fairfront evaluate          --dataset d.csv --config c.json --rule u:0.9
//   fairfront sweep             --dataset d.csv --config c.json --out s.csv --format csv
//   fairfront pareto            --dataset d.csv --config c.json --out front.json
//
// Exit codes: 0 success, 1 input/parse error, 2 semantic error, 3 sweep cap
// exceeded.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairfront/fairfront.h"

namespace {

struct Handles {
  std::unique_ptr<ff_config, decltype(&ff_config_free)> config{nullptr, ff_config_free};
  std::unique_ptr<ff_dataset, decltype(&ff_dataset_free)> dataset{nullptr, ff_dataset_free};
};

using OwnedString = std::unique_ptr<char, decltype(&ff_string_free)>;

struct Options {
  std::string dataset_path;
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::string rule;
  unsigned threads = 1;
  std::size_t cap = 0;
  std::string score_col = "score";
  std::string outcome_col = "outcome";
  std::optional<std::string> amount_col;
  std::optional<std::string> id_col;
  std::vector<std::string> attributes;
};

int fail(ff_status status) {
  std::cerr << "error [" << ff_last_error_code() << "]: " << ff_last_error_message() << '\n';
  return static_cast<int>(status);
}

int usage_error(const std::string& message) {
  std::cerr << "error [BadRule]: " << message << '\n';
  return 1;
}

int load_config(const Options& opt, Handles& h) {
  ff_config* raw = nullptr;
  if (ff_status s = ff_config_load(opt.config_path.c_str(), &raw); s != FF_OK) return fail(s);
  h.config.reset(raw);
  return 0;
}

int load_dataset(const Options& opt, Handles& h) {
  std::vector<const char*> attrs;
  for (const auto& a : opt.attributes) attrs.push_back(a.c_str());
  ff_schema schema{};
  schema.score_column = opt.score_col.c_str();
  schema.group_column = ff_config_group_column(h.config.get());
  schema.outcome_column = opt.outcome_col.c_str();
  schema.amount_column = opt.amount_col ? opt.amount_col->c_str() : nullptr;
  schema.id_column = opt.id_col ? opt.id_col->c_str() : nullptr;
  if (!opt.attributes.empty()) {
    schema.attribute_columns = attrs.data();
    schema.attribute_count = attrs.size();
  }
  ff_dataset* raw = nullptr;
  if (ff_status s = ff_dataset_load(opt.dataset_path.c_str(), &schema, &raw); s != FF_OK) {
    return fail(s);
  }
  h.dataset.reset(raw);
  return 0;
}

int load_both(const Options& opt, Handles& h) {
  if (int rc = load_config(opt, h)) return rc;
  return load_dataset(opt, h);
}

/// Writes to --out, or stdout when unset. Returns true when stdout was used.
bool emit(const Options& opt, const std::string& text) {
  if (opt.out_path.empty() || opt.out_path == "-") {
    std::cout << text;
    std::cout.flush();
    return true;
  }
  std::ofstream out(opt.out_path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "error [Io]: cannot write '" << opt.out_path << "'\n";
    std::exit(1);
  }
  return false;
}

int cmd_validate(const Options& opt) {
  Handles h;
  if (int rc = load_both(opt, h)) return rc;
  char* raw = nullptr;
  const ff_status s = ff_validate(h.dataset.get(), h.config.get(), &raw);
  OwnedString report(raw, ff_string_free);
  if (report) emit(opt, report.get());
  if (s != FF_OK) return fail(s);
  std::cerr << "valid: " << ff_dataset_size(h.dataset.get()) << " individuals, "
            << ff_dataset_group_count(h.dataset.get()) << " groups\n";
  return 0;
}

int cmd_optimal_threshold(const Options& opt) {
  Handles h;
  if (int rc = load_config(opt, h)) return rc;
  double p = 0.0;
  if (ff_status s = ff_config_optimal_threshold(h.config.get(), &p); s != FF_OK) {
    std::cerr << "error [" << ff_last_error_code() << "]: " << ff_last_error_message() << " ("
              << ff_last_error_json() << ")\n";
    return static_cast<int>(s);
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g\n", p);
  emit(opt, buf);
  return 0;
}

int cmd_evaluate(const Options& opt) {
  Handles h;
  if (int rc = load_both(opt, h)) return rc;
  char* raw = nullptr;
  ff_status s = FF_OK;
  if (opt.rule.rfind("u:", 0) == 0) {
    char* end = nullptr;
    const std::string value = opt.rule.substr(2);
    const double t = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') return usage_error("bad uniform threshold '" + value + "'");
    s = ff_evaluate_uniform(h.dataset.get(), h.config.get(), t, &raw);
  } else if (opt.rule.rfind("g:", 0) == 0) {
    std::vector<std::string> labels;
    std::vector<double> values;
    std::string rest = opt.rule.substr(2);
    std::size_t start = 0;
    while (start <= rest.size()) {
      const std::size_t comma = rest.find(',', start);
      const std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos
                                                                              : comma - start);
      const std::size_t eq = item.rfind('=');
      if (eq == std::string::npos || eq == 0) return usage_error("bad group threshold '" + item + "'");
      char* end = nullptr;
      const std::string value = item.substr(eq + 1);
      const double t = std::strtod(value.c_str(), &end);
      if (value.empty() || *end != '\0') return usage_error("bad group threshold '" + item + "'");
      labels.push_back(item.substr(0, eq));
      values.push_back(t);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    std::vector<const char*> label_ptrs;
    for (const auto& l : labels) label_ptrs.push_back(l.c_str());
    s = ff_evaluate_groups(h.dataset.get(), h.config.get(), label_ptrs.data(), values.data(),
                           values.size(), &raw);
  } else {
    return usage_error("--rule must be u:<t> or g:<group>=<t>,...");
  }
  if (s != FF_OK) return fail(s);
  OwnedString json(raw, ff_string_free);
  emit(opt, json.get());
  return 0;
}

int run_sweep_command(const Options& opt, bool front_only) {
  if (opt.format != "json" && opt.format != "csv") {
    return usage_error("--format must be csv or json");
  }
  Handles h;
  if (int rc = load_both(opt, h)) return rc;
  ff_sweep_options sweep_opts{opt.threads, opt.cap};
  ff_sweep* raw_sweep = nullptr;
  if (ff_status s = ff_sweep_run(h.dataset.get(), h.config.get(), &sweep_opts, &raw_sweep);
      s != FF_OK) {
    return fail(s);
  }
  std::unique_ptr<ff_sweep, decltype(&ff_sweep_free)> sweep(raw_sweep, ff_sweep_free);

  char* raw = nullptr;
  const ff_format format = opt.format == "csv" ? FF_FORMAT_CSV : FF_FORMAT_JSON;
  if (ff_status s = ff_sweep_render(sweep.get(), format, front_only ? 1 : 0, &raw); s != FF_OK) {
    return fail(s);
  }
  OwnedString body(raw, ff_string_free);
  const bool to_stdout = emit(opt, body.get());

  if (ff_status s = ff_sweep_summary(sweep.get(), &raw); s != FF_OK) return fail(s);
  OwnedString summary(raw, ff_string_free);
  (to_stdout ? std::cerr : std::cout) << summary.get();
  return 0;
}

void add_schema_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--score-col", opt.score_col, "Score column")->capture_default_str();
  cmd->add_option("--outcome-col", opt.outcome_col, "Outcome column")->capture_default_str();
  cmd->add_option("--amount-col", opt.amount_col, "Loan amount column (default: amount 1)");
  cmd->add_option("--id-col", opt.id_col, "Id column (default: row number)");
  cmd->add_option("--attr", opt.attributes,
                  "Attribute column usable by claims predicates (repeatable; default: all "
                  "remaining columns)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group-specific threshold search trading decision-maker utility against fairness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ff_version()));
  Options opt;

  auto* validate = app.add_subcommand("validate", "Check a dataset against a value configuration");
  validate->add_option("--dataset", opt.dataset_path, "Dataset CSV")->required();
  validate->add_option("--config", opt.config_path, "Value configuration JSON")->required();
  validate->add_option("--out", opt.out_path, "Report destination (default: stdout)");
  add_schema_flags(validate, opt);

  auto* optimal = app.add_subcommand("optimal-threshold",
                                     "Print the decision maker's break-even score");
  optimal->add_option("--config", opt.config_path, "Value configuration JSON")->required();
  optimal->add_option("--out", opt.out_path, "Destination (default: stdout)");

  auto* evaluate = app.add_subcommand("evaluate", "Score one decision rule");
  evaluate->add_option("--dataset", opt.dataset_path, "Dataset CSV")->required();
  evaluate->add_option("--config", opt.config_path, "Value configuration JSON")->required();
  evaluate->add_option("--rule", opt.rule, "u:<t> or g:<group>=<t>,...")->required();
  evaluate->add_option("--out", opt.out_path, "Destination (default: stdout)");
  add_schema_flags(evaluate, opt);

  std::vector<CLI::App*> sweepers;
  for (const char* name : {"sweep", "pareto"}) {
    auto* cmd = app.add_subcommand(name, std::string(name) == "sweep"
                                             ? "Evaluate every threshold combination"
                                             : "Evaluate every combination, export the front");
    cmd->add_option("--dataset", opt.dataset_path, "Dataset CSV")->required();
    cmd->add_option("--config", opt.config_path, "Value configuration JSON")->required();
    cmd->add_option("--out", opt.out_path, "Destination (default: stdout)");
    cmd->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--threads", opt.threads, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--cap", opt.cap, "Maximum number of rules (default 10000000)");
    add_schema_flags(cmd, opt);
    sweepers.push_back(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (validate->parsed()) return cmd_validate(opt);
  if (optimal->parsed()) return cmd_optimal_threshold(opt);
  if (evaluate->parsed()) return cmd_evaluate(opt);
  if (sweepers[0]->parsed()) return run_sweep_command(opt, false);
  return run_sweep_command(opt, true);
}
