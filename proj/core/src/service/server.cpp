#include "bugexplain/service/server.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "bugexplain/service/config.hpp"

namespace bugexplain::service {

struct HttpServer::Impl {
  std::shared_ptr<const ApiHandler> handler;
  ServerOptions options;
  httplib::Server server;
  int port = -1;
};

namespace {

void reply(httplib::Response& res, const Response& out) {
  res.status = out.status;
  res.set_content(out.body, "application/json");
}

}  // namespace

HttpServer::HttpServer(std::shared_ptr<const ApiHandler> handler, ServerOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->handler = std::move(handler);
  impl_->options = std::move(options);
  auto& server = impl_->server;
  const ApiHandler* api = impl_->handler.get();

  // Bigger than the API limit so the handler, not httplib, answers the
  // common oversized case with a JSON body.
  server.set_payload_max_length(kMaxPayloadBytes * 4);

  auto route = [api](const httplib::Request& req, httplib::Response& res) {
    reply(res, api->handle(req.method, req.path, req.body));
  };
  server.Post("/api/explain", route);
  server.Get("/api/models", route);
  server.Get("/api/experiments", route);
  server.Get(R"(/api/experiments/.+)", route);

  if (!impl_->options.static_dir.empty() &&
      !server.set_mount_point("/", impl_->options.static_dir)) {
    spdlog::warn("static directory {} not found", impl_->options.static_dir);
  }

  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    ErrorCode code = ErrorCode::kBadRequest;
    std::string message = fmt::format("HTTP {}", res.status);
    if (res.status == 404) {
      code = ErrorCode::kNotFound;
      message = fmt::format("no route {} {}", req.method, req.path);
    } else if (res.status == 413) {
      code = ErrorCode::kPayloadTooLarge;
      message = "request body too large";
    }
    const int status = res.status;
    reply(res, error_response(code, message));
    res.status = status;
  });

  server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& o = impl_->options;
  impl_->port = o.port == 0 ? impl_->server.bind_to_any_port(o.host)
                            : (impl_->server.bind_to_port(o.host, o.port) ? o.port : -1);
  if (impl_->port < 0) {
    throw Error(ErrorCode::kIoError, fmt::format("cannot bind {}:{}", o.host, o.port));
  }
  return impl_->port;
}

void HttpServer::serve() {
  spdlog::info("listening on http://{}:{}", impl_->options.host, impl_->port);
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

std::shared_ptr<const ApiHandler> make_handler(const ServiceConfig& config) {
  auto explainer = std::make_shared<const explain::Explainer>(
      explain::register_defaults(config.registry), config.explainer);
  return std::make_shared<const ApiHandler>(std::move(explainer),
                                            load_fixtures(config.fixtures_dir));
}

}  // namespace bugexplain::service
