#include "bugexplain/service/api.hpp"

#include <algorithm>
#include <climits>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace bugexplain::service {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kPrefix = "/api/experiments/";

std::string dump(const Json& body) {
  return body.dump(-1, ' ', false, Json::error_handler_t::replace);
}

Response ok(const Json& body) { return {200, dump(body)}; }

Json range_json(const ast::LineRange& range) {
  return {{"start", range.start}, {"end", range.end}};
}

template <typename T>
T field(const Json& body, const char* key, const char* type_name) {
  auto it = body.find(key);
  if (it == body.end()) {
    throw Error(ErrorCode::kBadRequest, fmt::format("missing field '{}'", key));
  }
  bool right_type = false;
  if constexpr (std::is_same_v<T, std::string>) {
    right_type = it->is_string();
  } else {
    right_type = it->is_number_integer();
  }
  if (!right_type) {
    throw Error(ErrorCode::kBadRequest, fmt::format("field '{}' must be {}", key, type_name));
  }
  return it->get<T>();
}

}  // namespace

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidRange:
    case ErrorCode::kParseError:
    case ErrorCode::kBadRequest:
      return 400;
    case ErrorCode::kUnknownModel:
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kPayloadTooLarge:
      return 413;
    case ErrorCode::kBackendUnavailable:
    case ErrorCode::kEmptyCorpus:
      return 503;
    default:
      return 500;
  }
}

Response error_response(ErrorCode code, std::string_view message) {
  Json body{{"error", to_string(code)}, {"message", message}};
  return {http_status(code), dump(body)};
}

ApiHandler::ApiHandler(std::shared_ptr<const explain::Explainer> explainer,
                       std::vector<ExperimentFixture> fixtures)
    : explainer_(std::move(explainer)), fixtures_(std::move(fixtures)) {}

Response ApiHandler::handle(std::string_view method, std::string_view path,
                            std::string_view body) const {
  try {
    if (path == "/api/explain") {
      if (method != "POST") return error_response(ErrorCode::kNotFound, "use POST /api/explain");
      return explain(body);
    }
    if (method != "GET") {
      return error_response(ErrorCode::kNotFound, fmt::format("no route {} {}", method, path));
    }
    if (path == "/api/models") return models();
    if (path == "/api/experiments") return experiments();
    if (path.starts_with(kPrefix) && path.size() > kPrefix.size()) {
      return experiment(path.substr(kPrefix.size()));
    }
    return error_response(ErrorCode::kNotFound, fmt::format("no route {} {}", method, path));
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  }
}

Response ApiHandler::explain(std::string_view body) const {
  if (body.size() > kMaxPayloadBytes) {
    return error_response(ErrorCode::kPayloadTooLarge,
                          fmt::format("request body exceeds {} bytes", kMaxPayloadBytes));
  }
  Json request = Json::parse(body, nullptr, false);
  if (request.is_discarded() || !request.is_object()) {
    return error_response(ErrorCode::kBadRequest, "request body must be a JSON object");
  }
  try {
    const auto code = field<std::string>(request, "code", "a string");
    const auto start = field<long long>(request, "start", "an integer");
    const auto end = field<long long>(request, "end", "an integer");
    const auto model = field<std::string>(request, "model", "a string");
    auto narrow = [](long long v) {
      return static_cast<int>(std::clamp<long long>(v, INT_MIN, INT_MAX));
    };
    Json list = Json::array();
    for (const auto& e : explainer_->explain(code, narrow(start), narrow(end), model)) {
      list.push_back({{"text", e.text},
                      {"score", e.score},
                      {"model", e.model},
                      {"start", e.range.start},
                      {"end", e.range.end}});
    }
    return {200, dump(Json{{"explanations", list}})};
  } catch (const ParseError& e) {
    Json out{{"error", to_string(e.code())},
             {"message", e.what()},
             {"line", e.line()},
             {"column", e.column()}};
    return {http_status(e.code()), dump(out)};
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  }
}

Response ApiHandler::models() const {
  Json list = Json::array();
  for (const auto& spec : explainer_->registry().specs()) {
    list.push_back({{"name", spec.name},
                    {"backend", explain::to_string(spec.backend)},
                    {"featurizer", explain::to_string(spec.featurizer)}});
  }
  return ok(Json{{"models", list}});
}

Response ApiHandler::experiments() const {
  Json list = Json::array();
  for (const auto& f : fixtures_) {
    list.push_back({{"name", f.name}, {"file_name", f.file_name}, {"bug_range", range_json(f.bug_range)}});
  }
  return ok(Json{{"experiments", list}});
}

Response ApiHandler::experiment(std::string_view name) const {
  for (const auto& f : fixtures_) {
    if (f.name != name) continue;
    Json body{{"name", f.name},
              {"file_name", f.file_name},
              {"content", f.content},
              {"bug_range", range_json(f.bug_range)},
              {"human_explanations", f.human_explanations}};
    return {200, dump(body)};
  }
  return error_response(ErrorCode::kNotFound, fmt::format("no experiment named '{}'", name));
}

}  // namespace bugexplain::service
