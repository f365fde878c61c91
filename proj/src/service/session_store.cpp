#include <cctype>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fairfront/analysis.hpp"
#include "fairfront/error.hpp"
#include "fairfront/report.hpp"
#include "fairfront/service.hpp"

namespace fairfront::service {

using nlohmann::json;
namespace fs = std::filesystem;

ServiceError::ServiceError(int status, std::string code, std::string message, json detail)
    : std::runtime_error(std::move(message)),
      status_(status),
      code_(std::move(code)),
      detail_(std::move(detail)) {}

json ServiceError::body() const {
  return {{"code", code_}, {"message", what()}, {"detail", detail_}};
}

std::string_view status_name(SessionStatus status) noexcept {
  switch (status) {
    case SessionStatus::Idle: return "idle";
    case SessionStatus::Sweeping: return "sweeping";
    case SessionStatus::Ready: return "ready";
    case SessionStatus::Error: return "error";
  }
  return "idle";
}

struct SessionStore::Session {
  std::mutex mutex;
  std::condition_variable idle_cv;

  std::string id;
  std::string csv;
  std::string dataset_digest;
  DatasetSchema schema;
  std::shared_ptr<const Dataset> dataset;
  std::optional<ValueConfig> config;
  std::string config_digest;

  SessionStatus status = SessionStatus::Idle;
  json error = nullptr;
  std::shared_ptr<const SweepResult> result;
  std::atomic<std::size_t> progress{0};
  std::size_t total = 0;
  std::string started_at;
  std::string finished_at;
  json selection = nullptr;

  std::chrono::steady_clock::time_point last_access = std::chrono::steady_clock::now();
};

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string new_session_id() {
  static std::mutex m;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(m);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

ServiceError from_error(int status, const Error& e) {
  return ServiceError(status, std::string(error_code_name(e.code())), e.what(), error_to_json(e));
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw ServiceError(400, "SchemaViolation", std::string("/schema/") + key + ": must be a string",
                       std::string("/schema/") + key);
  }
  return it->get<std::string>();
}

DatasetSchema schema_from(const json& body) {
  DatasetSchema schema;
  auto it = body.find("schema");
  if (it == body.end() || it->is_null()) return schema;
  if (!it->is_object()) {
    throw ServiceError(400, "SchemaViolation", "/schema: must be an object", "/schema");
  }
  const json& s = *it;
  if (auto v = optional_string(s, "score_column")) schema.score_column = *v;
  if (auto v = optional_string(s, "group_column")) schema.group_column = *v;
  if (auto v = optional_string(s, "outcome_column")) schema.outcome_column = *v;
  schema.amount_column = optional_string(s, "amount_column");
  schema.id_column = optional_string(s, "id_column");
  if (auto a = s.find("attribute_columns"); a != s.end() && !a->is_null()) {
    if (!a->is_array()) {
      throw ServiceError(400, "SchemaViolation", "/schema/attribute_columns: must be an array",
                         "/schema/attribute_columns");
    }
    std::vector<std::string> names;
    for (const auto& n : *a) {
      if (!n.is_string()) {
        throw ServiceError(400, "SchemaViolation",
                           "/schema/attribute_columns: entries must be strings",
                           "/schema/attribute_columns");
      }
      names.push_back(n.get<std::string>());
    }
    schema.attribute_columns = std::move(names);
  }
  return schema;
}

json schema_to(const DatasetSchema& schema) {
  json out = {{"score_column", schema.score_column},
              {"group_column", schema.group_column},
              {"outcome_column", schema.outcome_column},
              {"amount_column", schema.amount_column ? json(*schema.amount_column) : json(nullptr)},
              {"id_column", schema.id_column ? json(*schema.id_column) : json(nullptr)}};
  out["attribute_columns"] =
      schema.attribute_columns ? json(*schema.attribute_columns) : json(nullptr);
  return out;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

/// Index of the rule named by `key` in `result`; throws 404.
std::size_t resolve_rule(const SweepResult& result, const std::string& key) {
  if (all_digits(key)) {
    const std::size_t index = std::stoull(key);
    if (index < result.size()) return index;
    throw ServiceError(404, "UnknownRule", "rule index " + key + " is outside the sweep", key);
  }
  std::map<std::string, std::string> wanted;
  std::size_t start = 0;
  while (start <= key.size()) {
    const std::size_t comma = key.find(',', start);
    const std::string item =
        key.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const std::size_t eq = item.rfind('=');
    if (eq == std::string::npos) {
      throw ServiceError(404, "UnknownRule", "rule key must be an index or group=threshold,...",
                         key);
    }
    char* end = nullptr;
    const std::string value = item.substr(eq + 1);
    const double t = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') {
      throw ServiceError(404, "UnknownRule", "bad threshold in rule key", key);
    }
    wanted[item.substr(0, eq)] = format_real(t);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (wanted.size() == result.groups.size()) {
    for (std::size_t i = 0; i < result.size(); ++i) {
      const auto thresholds = result.thresholds_of(i);
      bool match = true;
      for (std::size_t g = 0; g < result.groups.size() && match; ++g) {
        auto it = wanted.find(result.groups[g]);
        match = it != wanted.end() && it->second == format_real(thresholds[g]);
      }
      if (match) return i;
    }
  }
  throw ServiceError(404, "UnknownRule", "no swept rule has thresholds " + key, key);
}

}  // namespace

SessionStore::SessionStore(ServiceOptions options) : options_(std::move(options)) {
  if (!options_.persist_dir.empty()) {
    fs::create_directories(options_.persist_dir);
    restore();
  }
  const unsigned n = std::max(1u, options_.workers);
  for (unsigned i = 0; i < n; ++i) workers_.emplace_back([this] { worker_loop(); });
}

SessionStore::~SessionStore() {
  {
    std::lock_guard lock(queue_mutex_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  for (auto& w : workers_) w.join();
}

void SessionStore::enqueue(std::function<void()> job) {
  {
    std::lock_guard lock(queue_mutex_);
    queue_.push_back(std::move(job));
  }
  queue_cv_.notify_one();
}

void SessionStore::worker_loop() {
  for (;;) {
    std::function<void()> job;
    {
      std::unique_lock lock(queue_mutex_);
      queue_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      job = std::move(queue_.front());
      queue_.pop_front();
    }
    job();
  }
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "UnknownSession", "no session '" + id + "'", id);
  it->second->last_access = std::chrono::steady_clock::now();
  return it->second;
}

std::size_t SessionStore::session_count() {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::size_t SessionStore::evict_expired() {
  const auto now = std::chrono::steady_clock::now();
  std::vector<std::string> evicted;
  {
    std::lock_guard lock(mutex_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      Session& s = *it->second;
      std::unique_lock session_lock(s.mutex, std::try_to_lock);
      const bool expired = session_lock.owns_lock() && s.status != SessionStatus::Sweeping &&
                           now - s.last_access > options_.session_ttl;
      if (expired) {
        evicted.push_back(it->first);
        session_lock.unlock();
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }
  if (!options_.persist_dir.empty()) {
    for (const auto& id : evicted) {
      std::error_code ec;
      fs::remove(fs::path(options_.persist_dir) / (id + ".json"), ec);
    }
  }
  return evicted.size();
}

void SessionStore::persist(const Session& s) {
  if (options_.persist_dir.empty()) return;
  const json snapshot = {{"id", s.id},
                         {"csv", s.csv},
                         {"schema", schema_to(s.schema)},
                         {"config", s.config ? config_to_json(*s.config) : json(nullptr)},
                         {"selection", s.selection}};
  const fs::path dir(options_.persist_dir);
  const fs::path tmp = dir / (s.id + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << snapshot.dump();
  }
  std::error_code ec;
  fs::rename(tmp, dir / (s.id + ".json"), ec);
}

void SessionStore::restore() {
  for (const auto& entry : fs::directory_iterator(options_.persist_dir)) {
    if (entry.path().extension() != ".json") continue;
    try {
      std::ifstream in(entry.path(), std::ios::binary);
      const json snapshot = json::parse(in);
      auto s = std::make_shared<Session>();
      s->id = snapshot.at("id").get<std::string>();
      s->csv = snapshot.at("csv").get<std::string>();
      s->dataset_digest = sha256_hex(s->csv);
      s->schema = schema_from(snapshot);
      if (!snapshot.at("config").is_null()) {
        s->config = config_from_json(snapshot.at("config"));
        s->schema.group_column = s->config->group_column;
        s->config_digest = config_digest(*s->config);
      }
      s->dataset = std::make_shared<const Dataset>(parse_dataset(s->csv, s->schema));
      s->selection = snapshot.value("selection", json(nullptr));
      sessions_.emplace(s->id, std::move(s));
    } catch (const std::exception&) {
      // Unreadable snapshots are skipped; the file is left for inspection.
    }
  }
}

std::string SessionStore::create(const json& body) {
  evict_expired();
  if (!body.is_object() || !body.contains("csv") || !body["csv"].is_string()) {
    throw ServiceError(400, "SchemaViolation", "/csv: request body needs a 'csv' string", "/csv");
  }
  auto s = std::make_shared<Session>();
  s->csv = body["csv"].get<std::string>();
  s->schema = schema_from(body);
  if (auto it = body.find("config"); it != body.end() && !it->is_null()) {
    try {
      s->config = config_from_json(*it);
    } catch (const Error& e) {
      throw from_error(400, e);
    }
    s->schema.group_column = s->config->group_column;
  }
  try {
    s->dataset = std::make_shared<const Dataset>(parse_dataset(s->csv, s->schema));
    if (s->config) check_config_against(*s->config, *s->dataset);
  } catch (const Error& e) {
    throw from_error(400, e);
  }
  if (s->config) s->config_digest = config_digest(*s->config);
  s->dataset_digest = sha256_hex(s->csv);
  s->id = new_session_id();
  persist(*s);
  std::lock_guard lock(mutex_);
  sessions_.emplace(s->id, s);
  return s->id;
}

json SessionStore::put_config(const std::string& id, const json& config_json) {
  auto s = find(id);
  ValueConfig config;
  try {
    config = config_from_json(config_json);
  } catch (const Error& e) {
    throw from_error(422, e);
  }
  std::unique_lock lock(s->mutex);
  if (s->status == SessionStatus::Sweeping) {
    throw ServiceError(409, "SweepInProgress", "configuration is locked while a sweep runs", id);
  }
  std::shared_ptr<const Dataset> dataset = s->dataset;
  DatasetSchema schema = s->schema;
  try {
    if (config.group_column != schema.group_column) {
      schema.group_column = config.group_column;
      dataset = std::make_shared<const Dataset>(parse_dataset(s->csv, schema));
    }
    check_config_against(config, *dataset);
  } catch (const Error& e) {
    throw from_error(422, e);
  }
  s->schema = std::move(schema);
  s->dataset = std::move(dataset);
  s->config = std::move(config);
  s->config_digest = config_digest(*s->config);
  persist(*s);
  const bool stale = s->result && s->result->config_digest != s->config_digest;
  return {{"id", id}, {"config_digest", s->config_digest}, {"stale", stale}};
}

json SessionStore::run_sweep(const std::string& id) {
  auto s = find(id);
  std::unique_lock lock(s->mutex);
  if (s->status == SessionStatus::Sweeping) {
    throw ServiceError(409, "SweepInProgress", "a sweep is already running", id);
  }
  if (!s->config) {
    throw ServiceError(422, "NoConfig", "PUT a configuration before sweeping", id);
  }
  const ValidationReport report = validate_inputs(*s->dataset, *s->config);
  if (!report.problem.empty()) {
    throw ServiceError(422, std::string(error_code_name(report.problem_code)), report.problem,
                       "");
  }
  if (!report.empty_positions.empty()) {
    const std::string& group = report.empty_positions.front();
    throw ServiceError(422, "EmptyPosition", "group '" + group + "' has no claim holders", group);
  }
  std::size_t total = 0;
  try {
    total = make_grid(*s->config, *s->dataset).combinations();
  } catch (const Error& e) {
    throw from_error(422, e);
  }
  if (total > options_.sweep_cap) {
    throw ServiceError(422, "SweepTooLarge",
                       "sweep of " + std::to_string(total) + " rules exceeds the cap",
                       std::to_string(total));
  }

  s->status = SessionStatus::Sweeping;
  s->error = nullptr;
  s->progress.store(0);
  s->total = total;
  s->started_at = utc_now();
  s->finished_at.clear();

  auto dataset = s->dataset;
  ValueConfig config = *s->config;
  enqueue([this, s, dataset, config = std::move(config)] {
    std::shared_ptr<const SweepResult> result;
    json error = nullptr;
    try {
      SweepOptions opts;
      opts.threads = options_.sweep_threads;
      opts.cap = options_.sweep_cap;
      opts.progress = &s->progress;
      result = std::make_shared<const SweepResult>(fairfront::run_sweep(*dataset, config, opts));
    } catch (const Error& e) {
      error = error_to_json(e);
    } catch (const std::exception& e) {
      error = {{"code", "Internal"}, {"message", e.what()}, {"detail", ""}};
    }
    {
      std::lock_guard lock(s->mutex);
      if (result) {
        s->result = std::move(result);
        s->status = SessionStatus::Ready;
      } else {
        s->status = SessionStatus::Error;
        s->error = std::move(error);
      }
      s->finished_at = utc_now();
    }
    s->idle_cv.notify_all();
  });
  return {{"id", id}, {"status", "sweeping"}, {"total", total}};
}

json SessionStore::status(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  const std::size_t done = std::min(s->progress.load(), s->total);
  double fraction = 0.0;
  if (s->status == SessionStatus::Ready) {
    fraction = 1.0;
  } else if (s->total > 0) {
    fraction = static_cast<double>(done) / static_cast<double>(s->total);
  }
  json out = {{"id", id},
              {"status", std::string(status_name(s->status))},
              {"progress", fraction},
              {"done", done},
              {"total", s->total},
              {"groups", s->dataset->groups()},
              {"dataset_size", s->dataset->size()},
              {"config_digest", s->config ? json(s->config_digest) : json(nullptr)},
              {"started_at", s->started_at},
              {"finished_at", s->finished_at},
              {"error", s->error}};
  if (s->result) {
    std::size_t front = 0;
    for (auto f : s->result->on_front) front += f;
    out["result_digest"] = s->result->config_digest;
    out["stale"] = s->result->config_digest != s->config_digest;
    out["size"] = s->result->size();
    out["front_size"] = front;
  } else {
    out["result_digest"] = nullptr;
    out["stale"] = false;
  }
  return out;
}

namespace {

void require_fresh(const std::shared_ptr<const SweepResult>& result, SessionStatus status,
                   const std::string& config_digest) {
  if (status == SessionStatus::Sweeping || !result) {
    throw ServiceError(409, "NotReady", "no finished sweep for this session",
                       std::string(status_name(status)));
  }
  if (result->config_digest != config_digest) {
    throw ServiceError(409, "StaleResult", "the configuration changed after the last sweep",
                       {{"result_digest", result->config_digest}, {"config_digest", config_digest}});
  }
}

}  // namespace

json SessionStore::pareto(const std::string& id, bool viable_only) {
  auto s = find(id);
  std::shared_ptr<const SweepResult> result;
  double floor = 0.0;
  {
    std::lock_guard lock(s->mutex);
    require_fresh(s->result, s->status, s->config_digest);
    result = s->result;
    floor = s->config->viability_floor;
  }
  json out = sweep_to_json(*result, viable_only);
  out["viability_floor"] = std::isinf(floor) ? json("-inf") : json(floor);
  out["viable_only"] = viable_only;
  return out;
}

json SessionStore::rule_detail(const std::string& id, const std::string& key) {
  auto s = find(id);
  std::shared_ptr<const SweepResult> result;
  std::shared_ptr<const Dataset> dataset;
  ValueConfig config;
  {
    std::lock_guard lock(s->mutex);
    require_fresh(s->result, s->status, s->config_digest);
    result = s->result;
    dataset = s->dataset;
    config = *s->config;
  }
  const std::size_t index = resolve_rule(*result, key);
  const auto thresholds = result->thresholds_of(index);
  GroupRule rule;
  for (std::size_t g = 0; g < result->groups.size(); ++g) {
    rule.thresholds.emplace(result->groups[g], thresholds[g]);
  }
  json out;
  try {
    out = evaluation_to_json(evaluate_rule(*dataset, config, rule));
  } catch (const Error& e) {
    throw from_error(422, e);
  }
  out["index"] = index;
  out["on_front"] = result->on_front[index] != 0;
  out["viable"] = result->viable[index] != 0;
  return out;
}

json SessionStore::select(const std::string& id, const json& body) {
  std::string key;
  if (body.is_object() && body.contains("index") && body["index"].is_number_unsigned()) {
    key = std::to_string(body["index"].get<std::size_t>());
  } else if (body.is_object() && body.contains("key") && body["key"].is_string()) {
    key = body["key"].get<std::string>();
  } else {
    throw ServiceError(422, "SchemaViolation", "body needs 'index' (integer) or 'key' (string)",
                       "/");
  }
  json detail = rule_detail(id, key);
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  require_fresh(s->result, s->status, s->config_digest);
  json record = {{"session", id},
                 {"dataset_digest", s->dataset_digest},
                 {"dataset_size", s->dataset->size()},
                 {"config", config_to_json(*s->config)},
                 {"config_digest", s->config_digest},
                 {"rule", detail},
                 {"selected_at", utc_now()}};
  s->selection = record;
  persist(*s);
  return record;
}

void SessionStore::wait_idle(const std::string& id) {
  auto s = find(id);
  std::unique_lock lock(s->mutex);
  s->idle_cv.wait(lock, [&] { return s->status != SessionStatus::Sweeping; });
}

}  // namespace fairfront::service
