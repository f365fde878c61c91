#include "httplib.h"

#include "fairfront/service.hpp"

namespace fairfront::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ServiceError(400, "SchemaViolation", std::string("invalid JSON body: ") + e.what(), "/");
  }
}

template <typename F>
httplib::Server::Handler guarded(F&& f) {
  return [f = std::forward<F>(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      send_json(res, e.status(), e.body());
    } catch (const std::exception& e) {
      send_json(res, 500, {{"code", "Internal"}, {"message", e.what()}, {"detail", ""}});
    }
  };
}

}  // namespace

Server::Server(SessionStore& store) : store_(store), http_(std::make_unique<httplib::Server>()) {
  httplib::Server& http = *http_;
  const ServiceOptions& opts = store_.options();
  http.set_payload_max_length(opts.max_upload_bytes);
  http.set_default_headers({{"Access-Control-Allow-Origin", opts.cors_origin},
                            {"Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS"},
                            {"Access-Control-Allow-Headers", "Content-Type"}});

  http.Options(R"(/sessions.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  http.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
              const std::string id = store_.create(parse_body(req));
              res.set_header("Location", "/sessions/" + id);
              send_json(res, 201, {{"id", id}, {"status", "idle"}});
            }));

  http.Put(R"(/sessions/([0-9a-f]+)/config)",
           guarded([this](const httplib::Request& req, httplib::Response& res) {
             json body;
             try {
               body = json::parse(req.body);
             } catch (const json::parse_error& e) {
               throw ServiceError(422, "SchemaViolation",
                                  std::string("invalid JSON body: ") + e.what(), "/");
             }
             send_json(res, 200, store_.put_config(req.matches[1], body));
           }));

  http.Post(R"(/sessions/([0-9a-f]+)/sweep)",
            guarded([this](const httplib::Request& req, httplib::Response& res) {
              send_json(res, 202, store_.run_sweep(req.matches[1]));
            }));

  http.Get(R"(/sessions/([0-9a-f]+)/status)",
           guarded([this](const httplib::Request& req, httplib::Response& res) {
             send_json(res, 200, store_.status(req.matches[1]));
           }));

  http.Get(R"(/sessions/([0-9a-f]+)/pareto)",
           guarded([this](const httplib::Request& req, httplib::Response& res) {
             const std::string flag = req.get_param_value("viable_only");
             const bool viable_only = flag == "1" || flag == "true";
             send_json(res, 200, store_.pareto(req.matches[1], viable_only));
           }));

  http.Get(R"(/sessions/([0-9a-f]+)/rules/([^/]+))",
           guarded([this](const httplib::Request& req, httplib::Response& res) {
             send_json(res, 200, store_.rule_detail(req.matches[1], req.matches[2]));
           }));

  http.Post(R"(/sessions/([0-9a-f]+)/selection)",
            guarded([this](const httplib::Request& req, httplib::Response& res) {
              json body;
              try {
                body = json::parse(req.body);
              } catch (const json::parse_error& e) {
                throw ServiceError(422, "SchemaViolation",
                                   std::string("invalid JSON body: ") + e.what(), "/");
              }
              send_json(res, 201, store_.select(req.matches[1], body));
            }));

  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const char* code = res.status == 413 ? "PayloadTooLarge"
                       : res.status == 404 ? "NotFound"
                                           : "HttpError";
    send_json(res, res.status, {{"code", code}, {"message", httplib::status_message(res.status)},
                                {"detail", ""}});
  });
}

Server::~Server() { stop(); }

int Server::bind_any(const std::string& host) { return http_->bind_to_any_port(host); }

bool Server::bind(const std::string& host, int port) { return http_->bind_to_port(host, port); }

bool Server::listen_after_bind() { return http_->listen_after_bind(); }

void Server::stop() {
  if (http_) http_->stop();
}

void Server::wait_until_ready() { http_->wait_until_ready(); }

}  // namespace fairfront::service
