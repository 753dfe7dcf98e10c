#pragma once

#include <memory>
#include <string>

#include "bugexplain/service/api.hpp"
#include "bugexplain/service/config.hpp"

namespace bugexplain::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;          // 0 binds an ephemeral port
  std::string static_dir;   // served at "/" when set
};

/// HTTP transport for ApiHandler.
class HttpServer {
 public:
  HttpServer(std::shared_ptr<const ApiHandler> handler, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket and returns the bound port. Throws IO_ERROR.
  int bind();
  /// Serves until stop() is called. bind() must have succeeded.
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Builds the explainer, fixtures and handler described by `config`.
std::shared_ptr<const ApiHandler> make_handler(const ServiceConfig& config);

}  // namespace bugexplain::service
