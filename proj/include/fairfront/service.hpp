#pragma once

// Session-based HTTP service: a stakeholder uploads a dataset once, edits the
// value configuration, runs sweeps in the background and records a chosen
// trade-off.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "fairfront/io.hpp"
#include "fairfront/sweep.hpp"

namespace httplib {
class Server;
}

namespace fairfront::service {

struct ServiceOptions {
  std::size_t max_upload_bytes = 64u << 20;
  std::chrono::seconds session_ttl{3600};
  std::string persist_dir;  // empty: no snapshots
  std::string cors_origin = "*";
  unsigned workers = 2;        // concurrent sweeps across sessions
  unsigned sweep_threads = 1;  // threads inside one sweep
  std::size_t sweep_cap = kDefaultSweepCap;
};

/// Failure with an HTTP status; body is {code, message, detail}.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, std::string message, nlohmann::json detail = "");
  int status() const noexcept { return status_; }
  nlohmann::json body() const;

 private:
  int status_;
  std::string code_;
  nlohmann::json detail_;
};

enum class SessionStatus { Idle, Sweeping, Ready, Error };

std::string_view status_name(SessionStatus status) noexcept;

/// Thread-safe session registry plus the background sweep pool. Every
/// method throws ServiceError.
class SessionStore {
 public:
  explicit SessionStore(ServiceOptions options = {});
  ~SessionStore();
  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  /// Body: {"csv": "...", "schema": {...}, "config": {...}?}. Returns the id.
  std::string create(const nlohmann::json& body);

  /// Replaces the configuration; an existing result is kept but becomes
  /// stale. 409 while sweeping, 422 on schema or dataset mismatch.
  nlohmann::json put_config(const std::string& id, const nlohmann::json& config);

  /// Starts a background sweep. 409 if one is in flight, 422 if the
  /// configuration cannot be swept.
  nlohmann::json run_sweep(const std::string& id);

  nlohmann::json status(const std::string& id);
  nlohmann::json pareto(const std::string& id, bool viable_only);
  /// `key` is a rule index or "group=t,..." thresholds.
  nlohmann::json rule_detail(const std::string& id, const std::string& key);
  /// Body: {"index": n} or {"key": "..."}. Returns the decision record.
  nlohmann::json select(const std::string& id, const nlohmann::json& body);

  /// Blocks until the session is no longer sweeping (tests, shutdown).
  void wait_idle(const std::string& id);

  std::size_t session_count();
  /// Drops sessions idle for longer than the TTL. Returns how many.
  std::size_t evict_expired();

  const ServiceOptions& options() const noexcept { return options_; }

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& id);
  void persist(const Session& session);
  void restore();
  void enqueue(std::function<void()> job);
  void worker_loop();

  ServiceOptions options_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;

  std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::deque<std::function<void()>> queue_;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

/// HTTP routes over a SessionStore.
class Server {
 public:
  Server(SessionStore& store);
  ~Server();

  /// Binds to an ephemeral port and returns it (-1 on failure).
  int bind_any(const std::string& host);
  bool bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready();

 private:
  SessionStore& store_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace fairfront::service
