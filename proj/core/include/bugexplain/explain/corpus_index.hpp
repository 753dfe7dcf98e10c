#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bugexplain/ingest/training_record.hpp"

namespace bugexplain::explain {

/// Sparse vector as (dimension, value) pairs sorted by dimension.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

/// u.v / (|u||v|), or 0 when either vector is all-zero.
double cosine(const SparseVector& u, const SparseVector& v);

struct ScoredText {
  std::string text;
  double score = 0.0;
};

/// Keeps the best score per distinct text, then the k best texts by
/// descending score with ties going to the lower index.
std::vector<ScoredText> top_k_distinct(std::span<const ScoredText> candidates, std::size_t k);

/// Bag-of-tokens nearest-neighbour store over finetune records.
class CorpusIndex {
 public:
  CorpusIndex() = default;
  /// Keeps finetune records, and among those only the ones whose
  /// featurizer meta matches (records without the key are kept).
  CorpusIndex(std::span<const ingest::TrainingRecord> records, Featurizer featurizer);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const ingest::TrainingRecord& record(std::size_t i) const { return records_.at(i); }
  const SparseVector& vector(std::size_t i) const { return vectors_.at(i); }

  /// Count vector over the index vocabulary. Unknown tokens are dropped and
  /// the squared norm of what was dropped goes to `unknown_sq` if given.
  SparseVector vectorize(std::span<const std::string> tokens, double* unknown_sq = nullptr) const;

  /// Cosine similarity of `query` against every record, in record order.
  /// Tokens outside the vocabulary still count towards the query norm.
  std::vector<double> scores(std::span<const std::string> query) const;

  /// Top `k` distinct targets for the query.
  std::vector<ScoredText> search(std::span<const std::string> query, std::size_t k = 3) const;

 private:
  std::vector<ingest::TrainingRecord> records_;
  std::unordered_map<std::string, std::uint32_t> vocabulary_;
  std::vector<SparseVector> vectors_;
  std::vector<double> norms_;
  // postings_[dim] lists (record, count) pairs.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> postings_;
};

}  // namespace bugexplain::explain
