#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bugexplain/error.hpp"
#include "bugexplain/explain/explainer.hpp"
#include "bugexplain/service/fixtures.hpp"

namespace bugexplain::service {

inline constexpr std::size_t kMaxPayloadBytes = 1 << 20;

struct Response {
  int status = 200;
  std::string body;  // always JSON
};

/// HTTP status for an error code: 400 for client input problems, 404 for
/// unknown names, 413 for oversized bodies, 503 for unusable backends and
/// 500 for everything else.
int http_status(ErrorCode code) noexcept;

/// Error body {"error": CODE, "message": text} with the matching status.
Response error_response(ErrorCode code, std::string_view message);

/// Transport-free request router. Holds only immutable state, so one
/// instance can serve concurrent requests.
class ApiHandler {
 public:
  ApiHandler(std::shared_ptr<const explain::Explainer> explainer,
             std::vector<ExperimentFixture> fixtures);

  Response handle(std::string_view method, std::string_view path, std::string_view body) const;

  Response explain(std::string_view body) const;
  Response models() const;
  Response experiments() const;
  Response experiment(std::string_view name) const;

 private:
  std::shared_ptr<const explain::Explainer> explainer_;
  std::vector<ExperimentFixture> fixtures_;
};

}  // namespace bugexplain::service
