// fairfront_server: HTTP session service for interactive trade-off
// exploration.

#include <csignal>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "fairfront/service.hpp"

namespace {
fairfront::service::Server* active_server = nullptr;

void on_signal(int) {
  if (active_server) active_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairfront HTTP service"};
  std::string host = "127.0.0.1";
  int port = 8080;
  fairfront::service::ServiceOptions opts;
  long long ttl_seconds = opts.session_ttl.count();
  if (const char* dir = std::getenv("PERSIST_DIR")) opts.persist_dir = dir;

  app.add_option("--host", host, "Listen address")->capture_default_str();
  app.add_option("--port", port, "Listen port")->capture_default_str();
  app.add_option("--persist-dir", opts.persist_dir,
                 "Snapshot sessions here (default: $PERSIST_DIR, none if unset)");
  app.add_option("--session-ttl", ttl_seconds, "Evict sessions idle this many seconds")
      ->capture_default_str();
  app.add_option("--max-upload", opts.max_upload_bytes, "Maximum request body in bytes")
      ->capture_default_str();
  app.add_option("--cors-origin", opts.cors_origin, "Allowed UI origin")->capture_default_str();
  app.add_option("--workers", opts.workers, "Concurrent sweeps")->capture_default_str();
  app.add_option("--sweep-threads", opts.sweep_threads, "Threads per sweep")->capture_default_str();
  app.add_option("--cap", opts.sweep_cap, "Maximum rules per sweep")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  opts.session_ttl = std::chrono::seconds(ttl_seconds);

  fairfront::service::SessionStore store(opts);
  fairfront::service::Server server(store);
  if (!server.bind(host, port)) {
    std::cerr << "cannot bind " << host << ':' << port << '\n';
    return 1;
  }
  active_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "listening on http://" << host << ':' << port << '\n';
  server.listen_after_bind();
  return 0;
}
