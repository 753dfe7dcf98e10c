#include "bugexplain/explain/corpus_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

namespace bugexplain::explain {
namespace {

double squared_norm(const SparseVector& v) {
  double total = 0.0;
  for (const auto& [dim, value] : v) total += value * value;
  return total;
}

// Dividing by sqrt of the product keeps identical integer count vectors at
// exactly 1.0.
double normalized(double dot, double norm_sq_a, double norm_sq_b) {
  if (norm_sq_a <= 0.0 || norm_sq_b <= 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(norm_sq_a * norm_sq_b), 0.0, 1.0);
}

}  // namespace

double cosine(const SparseVector& u, const SparseVector& v) {
  double dot = 0.0;
  auto a = u.begin();
  auto b = v.begin();
  while (a != u.end() && b != v.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      dot += a->second * b->second;
      ++a;
      ++b;
    }
  }
  double nu = squared_norm(u);
  double nv = squared_norm(v);
  if (nu <= 0.0 || nv <= 0.0) return 0.0;
  return dot / std::sqrt(nu * nv);
}

std::vector<ScoredText> top_k_distinct(std::span<const ScoredText> candidates, std::size_t k) {
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].score > candidates[b].score;
  });
  std::vector<ScoredText> out;
  std::unordered_set<std::string_view> seen;
  for (std::size_t i : order) {
    if (out.size() == k) break;
    if (seen.insert(candidates[i].text).second) out.push_back(candidates[i]);
  }
  return out;
}

CorpusIndex::CorpusIndex(std::span<const ingest::TrainingRecord> records,
                         Featurizer featurizer) {
  const std::string wanted(to_string(featurizer));
  for (const auto& record : records) {
    if (record.kind != ingest::RecordKind::kFinetune) continue;
    auto meta = record.meta.find(std::string(ingest::kMetaFeaturizer));
    if (meta != record.meta.end() && meta->second != wanted) continue;
    records_.push_back(record);
  }
  for (std::uint32_t r = 0; r < records_.size(); ++r) {
    std::map<std::uint32_t, double> counts;
    for (const auto& token : records_[r].input) {
      auto [it, inserted] =
          vocabulary_.try_emplace(token, static_cast<std::uint32_t>(vocabulary_.size()));
      if (inserted) postings_.emplace_back();
      counts[it->second] += 1.0;
    }
    SparseVector v(counts.begin(), counts.end());
    for (const auto& [dim, count] : v) postings_[dim].emplace_back(r, count);
    norms_.push_back(squared_norm(v));
    vectors_.push_back(std::move(v));
  }
}

SparseVector CorpusIndex::vectorize(std::span<const std::string> tokens,
                                    double* unknown_sq) const {
  std::map<std::uint32_t, double> counts;
  std::unordered_map<std::string_view, double> unknown;
  for (const auto& token : tokens) {
    auto it = vocabulary_.find(token);
    if (it != vocabulary_.end()) {
      counts[it->second] += 1.0;
    } else {
      unknown[token] += 1.0;
    }
  }
  if (unknown_sq) {
    *unknown_sq = 0.0;
    for (const auto& [token, count] : unknown) *unknown_sq += count * count;
  }
  return SparseVector(counts.begin(), counts.end());
}

std::vector<double> CorpusIndex::scores(std::span<const std::string> query) const {
  double unknown_sq = 0.0;
  const SparseVector q = vectorize(query, &unknown_sq);
  const double query_sq = squared_norm(q) + unknown_sq;
  std::vector<double> dots(records_.size(), 0.0);
  for (const auto& [dim, count] : q) {
    for (const auto& [record, value] : postings_[dim]) dots[record] += count * value;
  }
  for (std::size_t r = 0; r < dots.size(); ++r) dots[r] = normalized(dots[r], query_sq, norms_[r]);
  return dots;
}

std::vector<ScoredText> CorpusIndex::search(std::span<const std::string> query,
                                            std::size_t k) const {
  const auto s = scores(query);
  std::vector<ScoredText> candidates;
  candidates.reserve(s.size());
  for (std::size_t r = 0; r < s.size(); ++r) candidates.push_back({records_[r].target, s[r]});
  return top_k_distinct(candidates, k);
}

}  // namespace bugexplain::explain
