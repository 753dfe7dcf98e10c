#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bugexplain/explain/featurize.hpp"

namespace bugexplain::explain {

enum class BackendKind { kRetrieval, kExternal };

std::string_view to_string(BackendKind kind) noexcept;
/// Throws CONFIG_ERROR for anything but "retrieval" / "external".
BackendKind parse_backend(std::string_view text);

struct ModelSpec {
  std::string name;
  BackendKind backend = BackendKind::kRetrieval;
  Featurizer featurizer = Featurizer::kStructural;
  std::optional<std::string> corpus_path;
  std::optional<std::string> endpoint;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Partial spec from configuration. Unset fields keep the value of the
/// model being overridden.
struct ModelOverride {
  std::string name;
  std::optional<BackendKind> backend;
  std::optional<Featurizer> featurizer;
  std::optional<std::string> corpus_path;
  std::optional<std::string> endpoint;
};

inline constexpr std::string_view kBugsplainer = "Bugsplainer";
inline constexpr std::string_view kBugsplainer220M = "Bugsplainer 220M";
inline constexpr std::string_view kFineTunedCodeT5 = "Fine-tuned CodeT5";

/// Lookup key for model names: case is kept but '-' and ' ' compare equal,
/// so "Fine-tuned-CodeT5" finds "Fine-tuned CodeT5".
std::string model_key(std::string_view name);

class ModelRegistry {
 public:
  /// Throws CONFIG_ERROR on a duplicate name or a spec missing the corpus
  /// path (retrieval) or endpoint (external) its backend needs.
  void add(ModelSpec spec);

  /// Throws UNKNOWN_MODEL.
  const ModelSpec& find(std::string_view name) const;
  bool contains(std::string_view name) const;

  const std::vector<ModelSpec>& specs() const noexcept { return specs_; }
  std::size_t size() const noexcept { return specs_.size(); }

 private:
  std::vector<ModelSpec> specs_;
};

struct RegistryConfig {
  std::string structural_corpus = "corpus.jsonl";
  std::string plaintext_corpus = "corpus.jsonl";
  std::vector<ModelOverride> overrides;
};

/// The three stock models, all retrieval-backed: two structural and one
/// plaintext. Overrides naming a stock model patch it; other names add a
/// model. Throws CONFIG_ERROR when two overrides share a name or a new
/// model is under-specified.
ModelRegistry register_defaults(const RegistryConfig& config = {});

}  // namespace bugexplain::explain
