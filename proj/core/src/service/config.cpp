#include "bugexplain/service/config.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bugexplain/error.hpp"

namespace bugexplain::service {
namespace {

using nlohmann::json;

std::string resolve(const std::filesystem::path& base, const std::string& path) {
  if (path.empty() || base.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (base / path).lexically_normal().string();
}

template <typename T>
std::optional<T> get(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kConfigError, fmt::format("config key '{}' has the wrong type", key));
  }
}

int checked_port(long value) {
  if (value < 0 || value > 65535) {
    throw Error(ErrorCode::kConfigError, fmt::format("port {} out of range", value));
  }
  return static_cast<int>(value);
}

}  // namespace

ServiceConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfigError, fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw Error(ErrorCode::kConfigError, "config must be a JSON object");

  ServiceConfig config;
  if (auto v = get<std::string>(j, "host")) config.host = *v;
  if (auto v = get<long>(j, "port")) config.port = checked_port(*v);
  if (auto v = get<int>(j, "context_radius")) {
    if (*v < 0) throw Error(ErrorCode::kConfigError, "context_radius must be >= 0");
    config.explainer.radius = *v;
  }
  if (auto v = get<long>(j, "external_timeout_ms")) {
    if (*v <= 0) throw Error(ErrorCode::kConfigError, "external_timeout_ms must be positive");
    config.explainer.external_timeout = std::chrono::milliseconds(*v);
  }
  if (auto v = get<std::string>(j, "corpus_path")) {
    config.registry.structural_corpus = resolve(base_dir, *v);
    config.registry.plaintext_corpus = config.registry.structural_corpus;
  }
  if (auto v = get<std::string>(j, "plaintext_corpus_path")) {
    config.registry.plaintext_corpus = resolve(base_dir, *v);
  }
  if (auto v = get<std::string>(j, "fixtures_dir")) config.fixtures_dir = resolve(base_dir, *v);
  if (auto v = get<std::string>(j, "static_dir")) config.static_dir = resolve(base_dir, *v);

  if (auto models = j.find("models"); models != j.end() && !models->is_null()) {
    if (!models->is_array()) throw Error(ErrorCode::kConfigError, "'models' must be an array");
    for (const auto& m : *models) {
      if (!m.is_object()) throw Error(ErrorCode::kConfigError, "model entries must be objects");
      explain::ModelOverride change;
      auto name = get<std::string>(m, "name");
      if (!name || name->empty()) throw Error(ErrorCode::kConfigError, "model entry without name");
      change.name = *name;
      if (auto v = get<std::string>(m, "backend")) change.backend = explain::parse_backend(*v);
      if (auto v = get<std::string>(m, "featurizer")) {
        change.featurizer = explain::parse_featurizer(*v);
      }
      if (auto v = get<std::string>(m, "corpus_path")) change.corpus_path = resolve(base_dir, *v);
      if (auto v = get<std::string>(m, "endpoint")) change.endpoint = *v;
      config.registry.overrides.push_back(std::move(change));
    }
  }
  return config;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, fmt::format("cannot read config {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

void apply_env_overrides(ServiceConfig& config) {
  if (const char* port = std::getenv("BUGEXPLAIN_PORT"); port && *port) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(port, port + std::strlen(port), value);
    if (ec != std::errc() || *ptr != '\0') {
      throw Error(ErrorCode::kConfigError, fmt::format("BUGEXPLAIN_PORT '{}' is not a number", port));
    }
    config.port = checked_port(value);
  }
  if (const char* corpus = std::getenv("BUGEXPLAIN_CORPUS"); corpus && *corpus) {
    config.registry.structural_corpus = corpus;
    config.registry.plaintext_corpus = corpus;
  }
}

}  // namespace bugexplain::service
