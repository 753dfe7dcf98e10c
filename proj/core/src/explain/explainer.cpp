#include "bugexplain/explain/explainer.hpp"

#include <algorithm>
#include <filesystem>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "bugexplain/error.hpp"

namespace bugexplain::explain {

RetrievalBackend::RetrievalBackend(std::shared_ptr<const CorpusIndex> index)
    : index_(std::move(index)) {}

std::vector<ScoredText> RetrievalBackend::generate(std::span<const std::string> tokens,
                                                   std::size_t k) const {
  if (!index_ || index_->empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "the model's corpus has no records");
  }
  return index_->search(tokens, k);
}

ExternalBackend::ExternalBackend(std::string endpoint, std::string model,
                                 std::chrono::milliseconds timeout)
    : model_(std::move(model)), timeout_(timeout) {
  // Split "http://host:port/path" into the client base and the request path.
  auto scheme = endpoint.find("://");
  auto path_start = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = endpoint;
    path_ = "/";
  } else {
    scheme_host_port_ = endpoint.substr(0, path_start);
    path_ = endpoint.substr(path_start);
  }
}

std::vector<ScoredText> ExternalBackend::generate(std::span<const std::string> tokens,
                                                  std::size_t k) const {
  nlohmann::json body;
  body["tokens"] = std::vector<std::string>(tokens.begin(), tokens.end());
  body["model"] = model_;

  httplib::Client client(scheme_host_port_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  auto response = client.Post(path_, body.dump(), "application/json");
  if (!response) {
    throw Error(ErrorCode::kBackendUnavailable,
                fmt::format("{}: {}", scheme_host_port_, httplib::to_string(response.error())));
  }
  if (response->status < 200 || response->status >= 300) {
    throw Error(ErrorCode::kBackendUnavailable,
                fmt::format("{} answered HTTP {}", scheme_host_port_, response->status));
  }

  std::vector<ScoredText> candidates;
  try {
    auto reply = nlohmann::json::parse(response->body);
    for (const auto& item : reply.at("explanations")) {
      auto text = item.at("text").get<std::string>();
      if (text.empty()) continue;
      double score = std::clamp(item.at("score").get<double>(), 0.0, 1.0);
      candidates.push_back({std::move(text), score});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBackendUnavailable,
                fmt::format("unreadable reply from {}: {}", scheme_host_port_, e.what()));
  }
  return top_k_distinct(candidates, k);
}

std::shared_ptr<const CorpusIndex> load_index(const std::string& path, Featurizer featurizer) {
  if (!std::filesystem::exists(path)) {
    spdlog::warn("corpus {} not found; its models will report an empty corpus", path);
    return std::make_shared<const CorpusIndex>();
  }
  auto records = ingest::read_corpus(path);
  auto index = std::make_shared<const CorpusIndex>(records, featurizer);
  spdlog::info("loaded {} {} records from {}", index->size(), to_string(featurizer), path);
  return index;
}

Explainer::Explainer(ModelRegistry registry, ExplainerOptions options)
    : registry_(std::move(registry)), options_(options) {
  std::map<std::pair<std::string, Featurizer>, std::shared_ptr<const CorpusIndex>> indexes;
  for (const auto& spec : registry_.specs()) {
    std::shared_ptr<const Backend> backend;
    if (spec.backend == BackendKind::kExternal) {
      backend = std::make_shared<ExternalBackend>(*spec.endpoint, spec.name,
                                                  options_.external_timeout);
    } else {
      auto key = std::make_pair(*spec.corpus_path, spec.featurizer);
      auto& index = indexes[key];
      if (!index) index = load_index(*spec.corpus_path, spec.featurizer);
      backend = std::make_shared<RetrievalBackend>(index);
    }
    backends_[model_key(spec.name)] = std::move(backend);
  }
}

void Explainer::set_backend(std::string_view model, std::shared_ptr<const Backend> backend) {
  backends_[model_key(registry_.find(model).name)] = std::move(backend);
}

const Backend& Explainer::backend_for(const ModelSpec& spec) const {
  return *backends_.at(model_key(spec.name));
}

std::vector<Explanation> Explainer::explain(std::string_view code, int start, int end,
                                            std::string_view model) const {
  const ModelSpec& spec = registry_.find(model);
  const LineRange range = LineRange::checked(start, end);
  const int file_len = ast::count_lines(code);
  if (range.end > file_len) {
    throw Error(ErrorCode::kInvalidRange,
                fmt::format("line range {}..{} exceeds the {} line file", start, end, file_len));
  }
  const Tokens tokens = featurize(code, range, spec.featurizer, options_.radius);
  std::vector<Explanation> out;
  for (auto& scored : backend_for(spec).generate(tokens, kTopK)) {
    out.push_back({std::move(scored.text), scored.score, spec.name, range});
  }
  return out;
}

std::vector<ScoredText> Explainer::explain_tokens(std::span<const std::string> tokens,
                                                  std::string_view model, std::size_t k) const {
  return backend_for(registry_.find(model)).generate(tokens, k);
}

}  // namespace bugexplain::explain
