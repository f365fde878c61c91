#include "doctest.h"

#include <algorithm>
#include <cstring>
#include <string>

#include "fairfront/fairfront.h"
#include "json.hpp"

using nlohmann::json;

namespace {

const std::string kCsv =
    "id,score,group,outcome\n"
    "a,0.9,F,1\n"
    "b,0.5,F,1\n"
    "c,0.95,M,1\n"
    "d,0.6,M,0\n";

const std::string kConfig = R"({
  "dm_utility": {"lending": {"interest_rate": 0.1}},
  "ds_utility": {"table": {"d1y1": 10, "d1y0": -5, "d0y1": -1, "d0y0": 0}},
  "claims": {"outcome_equals": 1},
  "positions": "group",
  "pattern": "maximin",
  "mode": "empirical",
  "grid": {"per_group": {"F": [0, 0.8, 1.01], "M": [0, 0.8, 1.01]}}
})";

std::string take(char* s) {
  std::string out = s ? s : "";
  ff_string_free(s);
  return out;
}

struct Handles {
  ff_config* config = nullptr;
  ff_dataset* dataset = nullptr;

  explicit Handles(const std::string& config_text = kConfig, const std::string& csv = kCsv) {
    REQUIRE(ff_config_parse(config_text.data(), config_text.size(), &config) == FF_OK);
    ff_schema schema{};
    schema.id_column = "id";
    REQUIRE(ff_dataset_parse(csv.data(), csv.size(), &schema, &dataset) == FF_OK);
  }
  ~Handles() {
    ff_dataset_free(dataset);
    ff_config_free(config);
  }
};

}  // namespace

TEST_CASE("version and NULL handling") {
  CHECK(std::strlen(ff_version()) > 0);
  ff_config_free(nullptr);
  ff_dataset_free(nullptr);
  ff_sweep_free(nullptr);
  ff_string_free(nullptr);
  CHECK(ff_config_parse(nullptr, 0, nullptr) == FF_ERR_ARGUMENT);
  CHECK(std::string(ff_last_error_code()) == "InvalidArgument");
  CHECK(ff_dataset_size(nullptr) == 0);
  CHECK(ff_sweep_size(nullptr) == 0);
}

TEST_CASE("config handle") {
  Handles h;
  CHECK(std::string(ff_config_group_column(h.config)) == "group");
  char* text = nullptr;
  REQUIRE(ff_config_serialize(h.config, &text) == FF_OK);
  const std::string serialized = take(text);
  CHECK(json::parse(serialized)["mode"] == "empirical");

  char* digest = nullptr;
  REQUIRE(ff_config_digest(h.config, &digest) == FF_OK);
  CHECK(take(digest).size() == 64);

  double p = 0.0;
  REQUIRE(ff_config_optimal_threshold(h.config, &p) == FF_OK);
  CHECK(p == doctest::Approx(1.0 / 1.1).epsilon(1e-14));

  ff_config* bad = nullptr;
  const std::string broken = R"({"dm_utility": {"lending": {"interest_rate": -1}}})";
  CHECK(ff_config_parse(broken.data(), broken.size(), &bad) == FF_ERR_INPUT);
  CHECK(bad == nullptr);
  CHECK(std::string(ff_last_error_code()) == "SchemaViolation");
  CHECK(json::parse(ff_last_error_json())["detail"] == "/dm_utility/lending/interest_rate");

  const std::string degenerate = R"({
    "dm_utility": {"table": {"d1y1": 1, "d1y0": 1, "d0y1": 0, "d0y0": 0}},
    "ds_utility": {"table": {"d1y1": 1, "d1y0": 0, "d0y1": 0, "d0y0": 0}},
    "claims": "all", "pattern": "maximin"})";
  ff_config* always = nullptr;
  REQUIRE(ff_config_parse(degenerate.data(), degenerate.size(), &always) == FF_OK);
  CHECK(ff_config_optimal_threshold(always, &p) == FF_ERR_SEMANTIC);
  CHECK(std::string(ff_last_error_code()) == "DegenerateSpec");
  ff_config_free(always);

  CHECK(ff_config_load("/nonexistent/config.json", &bad) == FF_ERR_INPUT);
}

TEST_CASE("dataset handle") {
  Handles h;
  CHECK(ff_dataset_size(h.dataset) == 4);
  CHECK(ff_dataset_group_count(h.dataset) == 2);
  CHECK(std::string(ff_dataset_group(h.dataset, 1)) == "M");
  CHECK(ff_dataset_group(h.dataset, 2) == nullptr);

  ff_dataset* bad = nullptr;
  const std::string csv = "score,outcome\n0.5,1\n";
  CHECK(ff_dataset_parse(csv.data(), csv.size(), nullptr, &bad) == FF_ERR_INPUT);
  CHECK(std::string(ff_last_error_code()) == "MissingColumn");
  const json err = json::parse(ff_last_error_json());
  CHECK(err["column"] == "group");

  const std::string bad_score = "score,group,outcome\n0.5,F,1\n7,M,1\n";
  CHECK(ff_dataset_parse(bad_score.data(), bad_score.size(), nullptr, &bad) == FF_ERR_INPUT);
  CHECK(json::parse(ff_last_error_json())["row"] == 2);
}

TEST_CASE("validate and evaluate") {
  Handles h;
  char* report = nullptr;
  REQUIRE(ff_validate(h.dataset, h.config, &report) == FF_OK);
  const json r = json::parse(take(report));
  CHECK(r["valid"] == true);
  CHECK(r["claim_counts"]["F"] == 2);
  CHECK(r["claim_counts"]["M"] == 1);

  char* out = nullptr;
  REQUIRE(ff_evaluate_uniform(h.dataset, h.config, 0.8, &out) == FF_OK);
  const json e = json::parse(take(out));
  CHECK(e["group_utilities"]["F"] == 4.5);
  CHECK(e["group_utilities"]["M"] == 10.0);
  CHECK(e["fairness_score"] == 4.5);
  CHECK(e["accepted"]["F"] == 1);

  const char* groups[] = {"F", "M"};
  const double thresholds[] = {0.0, 1.01};
  REQUIRE(ff_evaluate_groups(h.dataset, h.config, groups, thresholds, 2, &out) == FF_OK);
  const json g = json::parse(take(out));
  CHECK(g["accepted"]["F"] == 2);
  CHECK(g["accepted"]["M"] == 0);
  CHECK(g["key"] == "F=0,M=1.01");

  CHECK(ff_evaluate_groups(h.dataset, h.config, groups, thresholds, 1, &out) != FF_OK);
  CHECK(std::string(ff_last_error_code()) == "MissingGroupThreshold");
  CHECK(ff_evaluate_uniform(h.dataset, h.config, 2.0, &out) != FF_OK);

  // Nobody with outcome 0 in group F.
  std::string no_claims = kConfig;
  no_claims.replace(no_claims.find("\"outcome_equals\": 1"), 19, "\"outcome_equals\": 0");
  Handles empty(no_claims);
  REQUIRE(ff_validate(empty.dataset, empty.config, &report) == FF_ERR_SEMANTIC);
  const json er = json::parse(take(report));
  CHECK(er["valid"] == false);
  CHECK(er["empty_positions"] == json::array({"F"}));
}

TEST_CASE("sweep handle") {
  Handles h;
  ff_sweep* sweep = nullptr;
  REQUIRE(ff_sweep_run(h.dataset, h.config, nullptr, &sweep) == FF_OK);
  CHECK(ff_sweep_size(sweep) == 9);
  CHECK(ff_sweep_front_size(sweep) >= 1);

  double dm = 0, fair = 0;
  int on_front = -1, viable = -1;
  // Index 4 is F=0.8, M=0.8.
  REQUIRE(ff_sweep_point(sweep, 4, &dm, &fair, &on_front, &viable) == FF_OK);
  CHECK(fair == 4.5);
  CHECK(dm == doctest::Approx(0.2));
  CHECK(ff_sweep_point(sweep, 9, &dm, &fair, &on_front, &viable) == FF_ERR_ARGUMENT);

  size_t best_dm = 99, best_fair = 99;
  REQUIRE(ff_sweep_extremes(sweep, &best_dm, &best_fair) == FF_OK);
  REQUIRE(ff_sweep_point(sweep, best_dm, &dm, &fair, &on_front, &viable) == FF_OK);
  CHECK(on_front == 1);

  char* csv = nullptr;
  REQUIRE(ff_sweep_render(sweep, FF_FORMAT_CSV, 0, &csv) == FF_OK);
  const std::string table = take(csv);
  CHECK(table.rfind("threshold_F,threshold_M,dm_utility,fairness_score,utility_F,utility_M,on_front,viable\n", 0) == 0);
  CHECK(std::count(table.begin(), table.end(), '\n') == 10);

  char* js = nullptr;
  REQUIRE(ff_sweep_render(sweep, FF_FORMAT_JSON, 1, &js) == FF_OK);
  const json front = json::parse(take(js));
  CHECK(front["size"] == 9);
  CHECK(front["points"].size() == ff_sweep_front_size(sweep));

  char* summary = nullptr;
  REQUIRE(ff_sweep_summary(sweep, &summary) == FF_OK);
  CHECK(take(summary).find("9 rules") != std::string::npos);
  ff_sweep_free(sweep);

  ff_sweep_options opts{1, 4};
  ff_sweep* too_big = nullptr;
  CHECK(ff_sweep_run(h.dataset, h.config, &opts, &too_big) == FF_ERR_CAPACITY);
  CHECK(std::string(ff_last_error_code()) == "SweepTooLarge");
  CHECK(too_big == nullptr);
}
