#include "bugexplain/eval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bugexplain/error.hpp"

namespace bugexplain::eval {
namespace {

struct SignedRanks {
  std::vector<double> ranks;  // average ranks of |d|
  std::vector<bool> positive;
  double tie_term = 0.0;      // sum of (t^3 - t) over tie groups
};

SignedRanks rank_differences(std::span<const double> x, std::span<const double> y) {
  std::vector<double> diffs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - y[i];
    if (d != 0.0) diffs.push_back(d);
  }
  std::sort(diffs.begin(), diffs.end(),
            [](double a, double b) { return std::fabs(a) < std::fabs(b); });
  SignedRanks out;
  out.ranks.resize(diffs.size());
  for (std::size_t i = 0; i < diffs.size();) {
    std::size_t j = i;
    while (j < diffs.size() && std::fabs(diffs[j]) == std::fabs(diffs[i])) ++j;
    const double average = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    const double t = static_cast<double>(j - i);
    out.tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) out.ranks[k] = average;
    i = j;
  }
  for (double d : diffs) out.positive.push_back(d > 0);
  return out;
}

// P(W+ <= w) and P(W+ >= w) by walking all 2^n sign patterns. Ranks are
// doubled so that half ranks from ties become integers.
double exact_p(const SignedRanks& sr, double w_plus) {
  const std::size_t n = sr.ranks.size();
  std::vector<long> doubled(n);
  for (std::size_t i = 0; i < n; ++i) doubled[i] = std::lround(2.0 * sr.ranks[i]);
  const long observed = std::lround(2.0 * w_plus);
  const std::uint64_t patterns = std::uint64_t{1} << n;
  std::uint64_t at_most = 0;
  std::uint64_t at_least = 0;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    long w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) w += doubled[i];
    }
    if (w <= observed) ++at_most;
    if (w >= observed) ++at_least;
  }
  const double total = static_cast<double>(patterns);
  const double tail = static_cast<double>(std::min(at_most, at_least)) / total;
  return std::min(1.0, 2.0 * tail);
}

double normal_p(const SignedRanks& sr, double w_plus) {
  const double n = static_cast<double>(sr.ranks.size());
  const double mean = n * (n + 1.0) / 4.0;
  const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - sr.tie_term / 48.0;
  if (variance <= 0.0) throw Error(ErrorCode::kDegenerate, "zero variance in signed ranks");
  const double z = (w_plus - mean) / std::sqrt(variance);
  return std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
}

}  // namespace

double wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || x.size() != y.size()) {
    throw Error(ErrorCode::kEmptyInput, "wilcoxon needs two non-empty samples of equal length");
  }
  const SignedRanks sr = rank_differences(x, y);
  if (sr.ranks.empty()) throw Error(ErrorCode::kDegenerate, "all paired differences are zero");
  double w_plus = 0.0;
  for (std::size_t i = 0; i < sr.ranks.size(); ++i) {
    if (sr.positive[i]) w_plus += sr.ranks[i];
  }
  if (static_cast<int>(sr.ranks.size()) <= kWilcoxonExactLimit) return exact_p(sr, w_plus);
  return normal_p(sr, w_plus);
}

std::string_view to_string(Magnitude magnitude) noexcept {
  switch (magnitude) {
    case Magnitude::kNegligible: return "negligible";
    case Magnitude::kSmall: return "small";
    case Magnitude::kMedium: return "medium";
    case Magnitude::kLarge: return "large";
  }
  return "negligible";
}

Magnitude magnitude_of(double d) noexcept {
  const double a = std::fabs(d);
  if (a < 0.147) return Magnitude::kNegligible;
  if (a < 0.33) return Magnitude::kSmall;
  if (a < 0.474) return Magnitude::kMedium;
  return Magnitude::kLarge;
}

CliffsDelta cliffs_delta(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw Error(ErrorCode::kEmptyInput, "cliff's delta needs two samples");
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());
  // Counts are exact integers, so the sum stays exact up to 2^53 pairs.
  double dominance = 0.0;
  for (double v : x) {
    auto below = std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
    auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), v);
    dominance += static_cast<double>(below) - static_cast<double>(above);
  }
  const double d = dominance / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
  return {d, magnitude_of(d)};
}

}  // namespace bugexplain::eval
