#include "bugexplain/eval/metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <unordered_map>

#include "bugexplain/error.hpp"

namespace bugexplain::eval {
namespace {

constexpr int kMaxOrder = 4;

struct BleuStats {
  std::array<double, kMaxOrder> matches{};
  std::array<double, kMaxOrder> totals{};
  double hyp_len = 0;
  double ref_len = 0;
};

using NGramCounts = std::map<std::vector<std::string>, int>;

NGramCounts ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NGramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<long>(i),
                                      tokens.begin() + static_cast<long>(i + n))];
  }
  return counts;
}

void add_pair(BleuStats& stats, const EvalPair& pair) {
  const auto ref = bleu_tokens(pair.reference);
  const auto hyp = bleu_tokens(pair.hypothesis);
  stats.ref_len += static_cast<double>(ref.size());
  stats.hyp_len += static_cast<double>(hyp.size());
  for (int n = 1; n <= kMaxOrder; ++n) {
    const auto hyp_counts = ngrams(hyp, static_cast<std::size_t>(n));
    const auto ref_counts = ngrams(ref, static_cast<std::size_t>(n));
    for (const auto& [gram, count] : hyp_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) stats.matches[n - 1] += std::min(count, it->second);
      stats.totals[n - 1] += count;
    }
  }
}

double score(const BleuStats& stats) {
  if (stats.hyp_len == 0 || stats.matches[0] == 0) return 0.0;
  double log_sum = 0.0;
  for (int n = 0; n < kMaxOrder; ++n) {
    double p = stats.matches[n] > 0 ? stats.matches[n] / stats.totals[n]
                                    : 1.0 / (stats.totals[n] + 1.0);
    log_sum += std::log(p);
  }
  double bp = stats.hyp_len < stats.ref_len ? std::exp(1.0 - stats.ref_len / stats.hyp_len) : 1.0;
  return 100.0 * bp * std::exp(log_sum / kMaxOrder);
}

void require(std::span<const EvalPair> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyInput, "no evaluation pairs");
}

std::string normalized(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

std::vector<std::string> bleu_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back(std::move(word));
    word.clear();
  };
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      flush();
    } else if (std::ispunct(u)) {
      flush();
      out.emplace_back(1, c);
    } else {
      word += static_cast<char>(std::tolower(u));
    }
  }
  flush();
  return out;
}

double bleu(std::span<const EvalPair> pairs) {
  require(pairs);
  BleuStats stats;
  for (const auto& pair : pairs) add_pair(stats, pair);
  return score(stats);
}

double sentence_bleu(const EvalPair& pair) {
  BleuStats stats;
  add_pair(stats, pair);
  return score(stats);
}

double exact_match(std::span<const EvalPair> pairs) {
  require(pairs);
  auto hits = std::count_if(pairs.begin(), pairs.end(), [](const EvalPair& p) {
    return normalized(p.reference) == normalized(p.hypothesis);
  });
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

double token_cosine(std::string_view a, std::string_view b) {
  std::unordered_map<std::string, std::pair<double, double>> counts;
  for (auto& t : bleu_tokens(a)) counts[t].first += 1;
  for (auto& t : bleu_tokens(b)) counts[t].second += 1;
  double dot = 0, na = 0, nb = 0;
  for (const auto& [token, c] : counts) {
    dot += c.first * c.second;
    na += c.first * c.first;
    nb += c.second * c.second;
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

double similarity_proxy(std::span<const EvalPair> pairs) {
  require(pairs);
  double total = 0;
  for (const auto& p : pairs) total += token_cosine(p.reference, p.hypothesis);
  return total / static_cast<double>(pairs.size());
}

}  // namespace bugexplain::eval
