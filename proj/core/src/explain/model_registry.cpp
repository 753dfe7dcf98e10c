#include "bugexplain/explain/model_registry.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "bugexplain/error.hpp"

namespace bugexplain::explain {

std::string_view to_string(BackendKind kind) noexcept {
  return kind == BackendKind::kRetrieval ? "retrieval" : "external";
}

BackendKind parse_backend(std::string_view text) {
  if (text == "retrieval") return BackendKind::kRetrieval;
  if (text == "external") return BackendKind::kExternal;
  throw Error(ErrorCode::kConfigError, fmt::format("unknown backend '{}'", text));
}

std::string model_key(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '-', ' ');
  return key;
}

void ModelRegistry::add(ModelSpec spec) {
  if (spec.name.empty()) throw Error(ErrorCode::kConfigError, "model name must not be empty");
  if (contains(spec.name)) {
    throw Error(ErrorCode::kConfigError, fmt::format("duplicate model name '{}'", spec.name));
  }
  if (spec.backend == BackendKind::kRetrieval && (!spec.corpus_path || spec.corpus_path->empty())) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("retrieval model '{}' needs a corpus path", spec.name));
  }
  if (spec.backend == BackendKind::kExternal && (!spec.endpoint || spec.endpoint->empty())) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("external model '{}' needs an endpoint", spec.name));
  }
  specs_.push_back(std::move(spec));
}

const ModelSpec& ModelRegistry::find(std::string_view name) const {
  const std::string key = model_key(name);
  for (const auto& spec : specs_) {
    if (model_key(spec.name) == key) return spec;
  }
  throw Error(ErrorCode::kUnknownModel, fmt::format("unknown model '{}'", name));
}

bool ModelRegistry::contains(std::string_view name) const {
  const std::string key = model_key(name);
  return std::any_of(specs_.begin(), specs_.end(),
                     [&](const ModelSpec& s) { return model_key(s.name) == key; });
}

ModelRegistry register_defaults(const RegistryConfig& config) {
  std::vector<ModelSpec> specs{
      {std::string(kBugsplainer), BackendKind::kRetrieval, Featurizer::kStructural,
       config.structural_corpus, std::nullopt},
      {std::string(kBugsplainer220M), BackendKind::kRetrieval, Featurizer::kStructural,
       config.structural_corpus, std::nullopt},
      {std::string(kFineTunedCodeT5), BackendKind::kRetrieval, Featurizer::kPlaintext,
       config.plaintext_corpus, std::nullopt},
  };

  std::set<std::string> seen;
  for (const auto& change : config.overrides) {
    if (!seen.insert(model_key(change.name)).second) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("model '{}' configured twice", change.name));
    }
    auto it = std::find_if(specs.begin(), specs.end(), [&](const ModelSpec& s) {
      return model_key(s.name) == model_key(change.name);
    });
    if (it == specs.end()) {
      specs.push_back(ModelSpec{change.name, BackendKind::kRetrieval, Featurizer::kStructural,
                                std::nullopt, std::nullopt});
      it = std::prev(specs.end());
    }
    if (change.backend) it->backend = *change.backend;
    if (change.featurizer) it->featurizer = *change.featurizer;
    if (change.corpus_path) it->corpus_path = change.corpus_path;
    if (change.endpoint) it->endpoint = change.endpoint;
  }

  ModelRegistry registry;
  for (auto& spec : specs) registry.add(std::move(spec));
  return registry;
}

}  // namespace bugexplain::explain
