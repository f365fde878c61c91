/*
 * fairfront C API.
 *
 * Opaque handles own their data; every *_free accepts NULL. Functions that
 * can fail return an ff_status and leave a thread-local error (code name,
 * message and a JSON object) readable through ff_last_error_*. Strings
 * returned through char** out-parameters are heap allocated and must be
 * released with ff_string_free.
 */
#ifndef FAIRFRONT_H
#define FAIRFRONT_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(FAIRFRONT_BUILDING_LIBRARY)
#    define FAIRFRONT_API __declspec(dllexport)
#  else
#    define FAIRFRONT_API __declspec(dllimport)
#  endif
#else
#  define FAIRFRONT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum ff_status {
  FF_OK = 0,
  FF_ERR_INPUT = 1,    /* unreadable or malformed dataset/config */
  FF_ERR_SEMANTIC = 2, /* degenerate spec, empty position, ... */
  FF_ERR_CAPACITY = 3, /* sweep larger than the configured cap */
  FF_ERR_ARGUMENT = 4, /* NULL handle or out-of-range argument */
  FF_ERR_INTERNAL = 5
} ff_status;

typedef enum ff_format { FF_FORMAT_JSON = 0, FF_FORMAT_CSV = 1 } ff_format;

typedef struct ff_config ff_config;
typedef struct ff_dataset ff_dataset;
typedef struct ff_sweep ff_sweep;

/* Column mapping for CSV datasets. NULL members take the defaults "score",
 * "group" and "outcome"; no amount column (amount 1.0); row numbers as ids.
 * With attribute_columns NULL every other column becomes an attribute. */
typedef struct ff_schema {
  const char *score_column;
  const char *group_column;
  const char *outcome_column;
  const char *amount_column;
  const char *id_column;
  const char *const *attribute_columns;
  size_t attribute_count;
} ff_schema;

typedef struct ff_sweep_options {
  unsigned threads;  /* 0 or 1: single-threaded */
  size_t cap;        /* 0: default of 10,000,000 rules */
} ff_sweep_options;

FAIRFRONT_API const char *ff_version(void);

FAIRFRONT_API const char *ff_last_error_code(void);
FAIRFRONT_API const char *ff_last_error_message(void);
FAIRFRONT_API const char *ff_last_error_json(void);

FAIRFRONT_API void ff_string_free(char *s);

/* Value configuration */
FAIRFRONT_API ff_status ff_config_parse(const char *json, size_t length, ff_config **out);
FAIRFRONT_API ff_status ff_config_load(const char *path, ff_config **out);
FAIRFRONT_API void ff_config_free(ff_config *config);
FAIRFRONT_API const char *ff_config_group_column(const ff_config *config);
FAIRFRONT_API ff_status ff_config_serialize(const ff_config *config, char **out);
FAIRFRONT_API ff_status ff_config_digest(const ff_config *config, char **out);
/* Break-even score of the decision-maker utility. */
FAIRFRONT_API ff_status ff_config_optimal_threshold(const ff_config *config, double *out);

/* Datasets */
FAIRFRONT_API ff_status ff_dataset_parse(const char *csv, size_t length, const ff_schema *schema,
                                         ff_dataset **out);
FAIRFRONT_API ff_status ff_dataset_load(const char *path, const ff_schema *schema,
                                        ff_dataset **out);
FAIRFRONT_API void ff_dataset_free(ff_dataset *dataset);
FAIRFRONT_API size_t ff_dataset_size(const ff_dataset *dataset);
FAIRFRONT_API size_t ff_dataset_group_count(const ff_dataset *dataset);
/* Borrowed pointer, valid while the dataset lives. NULL when out of range. */
FAIRFRONT_API const char *ff_dataset_group(const ff_dataset *dataset, size_t index);

/* Writes a JSON report. Returns FF_ERR_SEMANTIC when a group has no claim
 * holders, FF_ERR_INPUT when the config does not fit the dataset; the report
 * is written in both cases. */
FAIRFRONT_API ff_status ff_validate(const ff_dataset *dataset, const ff_config *config,
                                    char **report_json);

/* Single-rule evaluation, JSON result. */
FAIRFRONT_API ff_status ff_evaluate_uniform(const ff_dataset *dataset, const ff_config *config,
                                            double threshold, char **out_json);
FAIRFRONT_API ff_status ff_evaluate_groups(const ff_dataset *dataset, const ff_config *config,
                                           const char *const *groups, const double *thresholds,
                                           size_t count, char **out_json);

/* Sweeps with Pareto and viability flags populated. */
FAIRFRONT_API ff_status ff_sweep_run(const ff_dataset *dataset, const ff_config *config,
                                     const ff_sweep_options *options, ff_sweep **out);
FAIRFRONT_API void ff_sweep_free(ff_sweep *sweep);
FAIRFRONT_API size_t ff_sweep_size(const ff_sweep *sweep);
FAIRFRONT_API size_t ff_sweep_front_size(const ff_sweep *sweep);
FAIRFRONT_API ff_status ff_sweep_point(const ff_sweep *sweep, size_t index, double *dm_utility,
                                       double *fairness_score, int *on_front, int *viable);
/* Indices of the max-utility and max-fairness front points. */
FAIRFRONT_API ff_status ff_sweep_extremes(const ff_sweep *sweep, size_t *max_dm_utility,
                                          size_t *max_fairness);
FAIRFRONT_API ff_status ff_sweep_render(const ff_sweep *sweep, ff_format format, int front_only,
                                        char **out);
FAIRFRONT_API ff_status ff_sweep_summary(const ff_sweep *sweep, char **out);

#ifdef __cplusplus
}
#endif

#endif /* FAIRFRONT_H */
