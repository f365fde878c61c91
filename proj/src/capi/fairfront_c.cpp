#include "fairfront/fairfront.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "fairfront/analysis.hpp"
#include "fairfront/error.hpp"
#include "fairfront/io.hpp"
#include "fairfront/report.hpp"
#include "fairfront/utility.hpp"

struct ff_config {
  fairfront::ValueConfig value;
};

struct ff_dataset {
  fairfront::Dataset value;
};

struct ff_sweep {
  fairfront::SweepResult value;
};

namespace {

struct LastError {
  std::string code;
  std::string message;
  std::string json;
};

thread_local LastError last_error;

void clear_error() {
  last_error.code.clear();
  last_error.message.clear();
  last_error.json.clear();
}

ff_status set_error(ff_status status, std::string code, std::string message,
                    nlohmann::json payload) {
  last_error.code = std::move(code);
  last_error.message = std::move(message);
  last_error.json = payload.dump();
  return status;
}

ff_status status_of(fairfront::ErrorCode code) {
  switch (fairfront::error_class(code)) {
    case fairfront::ErrorClass::Input: return FF_ERR_INPUT;
    case fairfront::ErrorClass::Semantic: return FF_ERR_SEMANTIC;
    case fairfront::ErrorClass::Capacity: return FF_ERR_CAPACITY;
  }
  return FF_ERR_INTERNAL;
}

ff_status argument_error(const char* what) {
  return set_error(FF_ERR_ARGUMENT, "InvalidArgument", what,
                   {{"code", "InvalidArgument"}, {"message", what}, {"detail", ""}});
}

template <typename F>
ff_status try_(F&& f) {
  clear_error();
  try {
    f();
    return FF_OK;
  } catch (const fairfront::Error& e) {
    return set_error(status_of(e.code()), std::string(fairfront::error_code_name(e.code())),
                     e.what(), fairfront::error_to_json(e));
  } catch (const std::bad_alloc&) {
    return set_error(FF_ERR_INTERNAL, "OutOfMemory", "out of memory",
                     {{"code", "OutOfMemory"}, {"message", "out of memory"}, {"detail", ""}});
  } catch (const std::exception& e) {
    return set_error(FF_ERR_INTERNAL, "Internal", e.what(),
                     {{"code", "Internal"}, {"message", e.what()}, {"detail", ""}});
  } catch (...) {
    return set_error(FF_ERR_INTERNAL, "Internal", "unknown error",
                     {{"code", "Internal"}, {"message", "unknown error"}, {"detail", ""}});
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw fairfront::Error(fairfront::ErrorCode::Io, std::string("cannot open '") + path + "'",
                           path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fairfront::DatasetSchema to_schema(const ff_schema* schema) {
  fairfront::DatasetSchema out;
  if (!schema) return out;
  if (schema->score_column) out.score_column = schema->score_column;
  if (schema->group_column) out.group_column = schema->group_column;
  if (schema->outcome_column) out.outcome_column = schema->outcome_column;
  if (schema->amount_column) out.amount_column = schema->amount_column;
  if (schema->id_column) out.id_column = schema->id_column;
  if (schema->attribute_columns) {
    out.attribute_columns.emplace(schema->attribute_columns,
                                  schema->attribute_columns + schema->attribute_count);
  }
  return out;
}

}  // namespace

extern "C" {

const char* ff_version(void) { return "1.0.0"; }

const char* ff_last_error_code(void) { return last_error.code.c_str(); }
const char* ff_last_error_message(void) { return last_error.message.c_str(); }
const char* ff_last_error_json(void) { return last_error.json.c_str(); }

void ff_string_free(char* s) { std::free(s); }

ff_status ff_config_parse(const char* json, size_t length, ff_config** out) {
  if (!json || !out) return argument_error("json and out must not be NULL");
  return try_([&] {
    *out = new ff_config{fairfront::parse_config(std::string_view(json, length))};
  });
}

ff_status ff_config_load(const char* path, ff_config** out) {
  if (!path || !out) return argument_error("path and out must not be NULL");
  return try_([&] { *out = new ff_config{fairfront::parse_config(read_file(path))}; });
}

void ff_config_free(ff_config* config) { delete config; }

const char* ff_config_group_column(const ff_config* config) {
  return config ? config->value.group_column.c_str() : nullptr;
}

ff_status ff_config_serialize(const ff_config* config, char** out) {
  if (!config || !out) return argument_error("config and out must not be NULL");
  return try_([&] { *out = dup_string(fairfront::serialize_config(config->value)); });
}

ff_status ff_config_digest(const ff_config* config, char** out) {
  if (!config || !out) return argument_error("config and out must not be NULL");
  return try_([&] { *out = dup_string(fairfront::config_digest(config->value)); });
}

ff_status ff_config_optimal_threshold(const ff_config* config, double* out) {
  if (!config || !out) return argument_error("config and out must not be NULL");
  return try_([&] { *out = fairfront::optimal_uniform_threshold(config->value.dm_spec); });
}

ff_status ff_dataset_parse(const char* csv, size_t length, const ff_schema* schema,
                           ff_dataset** out) {
  if (!csv || !out) return argument_error("csv and out must not be NULL");
  return try_([&] {
    *out = new ff_dataset{fairfront::parse_dataset(std::string_view(csv, length), to_schema(schema))};
  });
}

ff_status ff_dataset_load(const char* path, const ff_schema* schema, ff_dataset** out) {
  if (!path || !out) return argument_error("path and out must not be NULL");
  return try_([&] {
    *out = new ff_dataset{fairfront::parse_dataset(read_file(path), to_schema(schema))};
  });
}

void ff_dataset_free(ff_dataset* dataset) { delete dataset; }

size_t ff_dataset_size(const ff_dataset* dataset) { return dataset ? dataset->value.size() : 0; }

size_t ff_dataset_group_count(const ff_dataset* dataset) {
  return dataset ? dataset->value.group_count() : 0;
}

const char* ff_dataset_group(const ff_dataset* dataset, size_t index) {
  if (!dataset || index >= dataset->value.group_count()) return nullptr;
  return dataset->value.groups()[index].c_str();
}

ff_status ff_validate(const ff_dataset* dataset, const ff_config* config, char** report_json) {
  if (!dataset || !config || !report_json) return argument_error("arguments must not be NULL");
  fairfront::ValidationReport report;
  const ff_status status =
      try_([&] { report = fairfront::validate_inputs(dataset->value, config->value); });
  if (status != FF_OK) return status;
  *report_json = dup_string(fairfront::report_to_json(report).dump(2) + "\n");
  if (!report.problem.empty()) {
    return set_error(status_of(report.problem_code),
                     std::string(fairfront::error_code_name(report.problem_code)), report.problem,
                     {{"code", std::string(fairfront::error_code_name(report.problem_code))},
                      {"message", report.problem},
                      {"detail", ""}});
  }
  if (!report.empty_positions.empty()) {
    const std::string& group = report.empty_positions.front();
    const std::string message = "group '" + group + "' has no claim holders";
    return set_error(FF_ERR_SEMANTIC, "EmptyPosition", message,
                     {{"code", "EmptyPosition"}, {"message", message}, {"detail", group}});
  }
  return FF_OK;
}

ff_status ff_evaluate_uniform(const ff_dataset* dataset, const ff_config* config, double threshold,
                              char** out_json) {
  if (!dataset || !config || !out_json) return argument_error("arguments must not be NULL");
  return try_([&] {
    const auto evaluation = fairfront::evaluate_rule(dataset->value, config->value,
                                                     fairfront::UniformRule{threshold});
    *out_json = dup_string(fairfront::evaluation_to_json(evaluation).dump(2) + "\n");
  });
}

ff_status ff_evaluate_groups(const ff_dataset* dataset, const ff_config* config,
                             const char* const* groups, const double* thresholds, size_t count,
                             char** out_json) {
  if (!dataset || !config || !out_json || (count && (!groups || !thresholds))) {
    return argument_error("arguments must not be NULL");
  }
  return try_([&] {
    fairfront::GroupRule rule;
    for (size_t i = 0; i < count; ++i) {
      if (!groups[i]) throw fairfront::Error(fairfront::ErrorCode::BadRule, "NULL group label");
      if (!rule.thresholds.emplace(groups[i], thresholds[i]).second) {
        throw fairfront::Error(fairfront::ErrorCode::BadRule,
                               std::string("group '") + groups[i] + "' given twice", groups[i]);
      }
    }
    const auto evaluation = fairfront::evaluate_rule(dataset->value, config->value, rule);
    *out_json = dup_string(fairfront::evaluation_to_json(evaluation).dump(2) + "\n");
  });
}

ff_status ff_sweep_run(const ff_dataset* dataset, const ff_config* config,
                       const ff_sweep_options* options, ff_sweep** out) {
  if (!dataset || !config || !out) return argument_error("arguments must not be NULL");
  return try_([&] {
    fairfront::SweepOptions opts;
    if (options) {
      opts.threads = options->threads == 0 ? 1 : options->threads;
      if (options->cap) opts.cap = options->cap;
    }
    *out = new ff_sweep{fairfront::run_sweep(dataset->value, config->value, opts)};
  });
}

void ff_sweep_free(ff_sweep* sweep) { delete sweep; }

size_t ff_sweep_size(const ff_sweep* sweep) { return sweep ? sweep->value.size() : 0; }

size_t ff_sweep_front_size(const ff_sweep* sweep) {
  if (!sweep) return 0;
  size_t n = 0;
  for (auto flag : sweep->value.on_front) n += flag;
  return n;
}

ff_status ff_sweep_point(const ff_sweep* sweep, size_t index, double* dm_utility,
                         double* fairness_score, int* on_front, int* viable) {
  if (!sweep) return argument_error("sweep must not be NULL");
  if (index >= sweep->value.size()) return argument_error("index out of range");
  clear_error();
  const auto& r = sweep->value;
  if (dm_utility) *dm_utility = r.dm_utility[index];
  if (fairness_score) *fairness_score = r.fairness_score[index];
  if (on_front) *on_front = r.on_front[index];
  if (viable) *viable = r.viable[index];
  return FF_OK;
}

ff_status ff_sweep_extremes(const ff_sweep* sweep, size_t* max_dm_utility, size_t* max_fairness) {
  if (!sweep || !max_dm_utility || !max_fairness) return argument_error("arguments must not be NULL");
  return try_([&] {
    const auto [dm, fair] = fairfront::extreme_indices(sweep->value);
    *max_dm_utility = dm;
    *max_fairness = fair;
  });
}

ff_status ff_sweep_render(const ff_sweep* sweep, ff_format format, int front_only, char** out) {
  if (!sweep || !out) return argument_error("sweep and out must not be NULL");
  if (format != FF_FORMAT_JSON && format != FF_FORMAT_CSV) return argument_error("unknown format");
  return try_([&] {
    if (format == FF_FORMAT_CSV) {
      *out = dup_string(fairfront::sweep_to_csv(sweep->value, front_only != 0));
    } else {
      *out = dup_string(fairfront::sweep_to_json(sweep->value, false, front_only != 0).dump(1) +
                        "\n");
    }
  });
}

ff_status ff_sweep_summary(const ff_sweep* sweep, char** out) {
  if (!sweep || !out) return argument_error("sweep and out must not be NULL");
  return try_([&] { *out = dup_string(fairfront::sweep_summary(sweep->value)); });
}

}  // extern "C"
