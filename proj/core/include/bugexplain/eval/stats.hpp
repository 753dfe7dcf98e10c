#pragma once

#include <span>
#include <string_view>

namespace bugexplain::eval {

/// Two-sided p-value of the Wilcoxon signed-rank test on paired samples.
/// Zero differences are dropped and tied magnitudes share their average
/// rank. Up to 12 remaining pairs the null distribution is enumerated
/// exactly; beyond that a tie-corrected normal approximation without
/// continuity correction is used. Throws EMPTY_INPUT for empty or unequal
/// lengths and DEGENERATE when every difference is zero.
double wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

inline constexpr int kWilcoxonExactLimit = 12;

enum class Magnitude { kNegligible, kSmall, kMedium, kLarge };

std::string_view to_string(Magnitude magnitude) noexcept;
Magnitude magnitude_of(double d) noexcept;

struct CliffsDelta {
  double d = 0.0;
  Magnitude magnitude = Magnitude::kNegligible;
};

/// Dominance of x over y across all |x|*|y| cross pairs. Throws EMPTY_INPUT.
CliffsDelta cliffs_delta(std::span<const double> x, std::span<const double> y);

}  // namespace bugexplain::eval
