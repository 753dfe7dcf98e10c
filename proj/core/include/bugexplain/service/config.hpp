#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "bugexplain/explain/explainer.hpp"

namespace bugexplain::service {

/// JSON document, every key optional:
///   {
///     "host": "127.0.0.1", "port": 8080, "context_radius": 3,
///     "corpus_path": "corpus.jsonl", "plaintext_corpus_path": "corpus.jsonl",
///     "fixtures_dir": "fixtures/experiments", "static_dir": "",
///     "external_timeout_ms": 30000,
///     "models": [{"name": "Bugsplainer 220M", "backend": "external",
///                 "endpoint": "http://localhost:9000/generate"}]
///   }
/// Relative paths are resolved against the config file's directory.
struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  explain::RegistryConfig registry;
  explain::ExplainerOptions explainer;
  std::string fixtures_dir;
  std::string static_dir;
};

/// Throws IO_ERROR when the file is unreadable and CONFIG_ERROR when a key
/// has the wrong type or value.
ServiceConfig load_config(const std::filesystem::path& path);
ServiceConfig parse_config(std::string_view json_text,
                           const std::filesystem::path& base_dir = {});

/// Applies BUGEXPLAIN_PORT and BUGEXPLAIN_CORPUS (both corpus paths) when set.
void apply_env_overrides(ServiceConfig& config);

}  // namespace bugexplain::service
