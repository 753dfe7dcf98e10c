#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bugexplain/explain/corpus_index.hpp"
#include "bugexplain/explain/model_registry.hpp"

namespace bugexplain::explain {

inline constexpr std::size_t kTopK = 3;

struct Explanation {
  std::string text;
  double score = 0.0;
  std::string model;
  LineRange range;

  friend bool operator==(const Explanation&, const Explanation&) = default;
};

class Backend {
 public:
  virtual ~Backend() = default;
  /// At most `k` distinct texts, descending score, scores within [0, 1].
  virtual std::vector<ScoredText> generate(std::span<const std::string> tokens,
                                           std::size_t k) const = 0;
};

class RetrievalBackend : public Backend {
 public:
  explicit RetrievalBackend(std::shared_ptr<const CorpusIndex> index);
  /// Throws EMPTY_CORPUS when the index holds no records.
  std::vector<ScoredText> generate(std::span<const std::string> tokens,
                                   std::size_t k) const override;

 private:
  std::shared_ptr<const CorpusIndex> index_;
};

/// Client for a remote generator. Request body {"tokens": [...], "model":
/// name}; response {"explanations": [{"text", "score"}]}. Only plain http
/// endpoints are supported.
class ExternalBackend : public Backend {
 public:
  ExternalBackend(std::string endpoint, std::string model,
                  std::chrono::milliseconds timeout = std::chrono::seconds(30));
  /// Throws BACKEND_UNAVAILABLE on connection failure, a non-2xx status or
  /// an unreadable response.
  std::vector<ScoredText> generate(std::span<const std::string> tokens,
                                   std::size_t k) const override;

 private:
  std::string scheme_host_port_;
  std::string path_;
  std::string model_;
  std::chrono::milliseconds timeout_;
};

struct ExplainerOptions {
  int radius = diffsbt::kDefaultRadius;
  std::chrono::milliseconds external_timeout = std::chrono::seconds(30);
};

/// Routes requests to the backend of the named model. Corpora are loaded
/// once at construction (a missing corpus file gives an empty index) and
/// shared between models that use the same file and featurizer. Immutable
/// afterwards, so concurrent calls are safe.
class Explainer {
 public:
  explicit Explainer(ModelRegistry registry, ExplainerOptions options = {});

  /// Replaces the backend of one model, e.g. with a test double.
  void set_backend(std::string_view model, std::shared_ptr<const Backend> backend);

  const ModelRegistry& registry() const noexcept { return registry_; }
  const ExplainerOptions& options() const noexcept { return options_; }

  /// Throws UNKNOWN_MODEL, INVALID_RANGE, PARSE_ERROR, EMPTY_CORPUS and
  /// BACKEND_UNAVAILABLE.
  std::vector<Explanation> explain(std::string_view code, int start, int end,
                                   std::string_view model) const;

  /// Same, for an already featurized query.
  std::vector<ScoredText> explain_tokens(std::span<const std::string> tokens,
                                         std::string_view model, std::size_t k = kTopK) const;

 private:
  const Backend& backend_for(const ModelSpec& spec) const;

  ModelRegistry registry_;
  ExplainerOptions options_;
  std::map<std::string, std::shared_ptr<const Backend>> backends_;  // by model_key
};

/// Loads `path` into an index for `featurizer`; a missing file logs a
/// warning and yields an empty index.
std::shared_ptr<const CorpusIndex> load_index(const std::string& path, Featurizer featurizer);

}  // namespace bugexplain::explain
