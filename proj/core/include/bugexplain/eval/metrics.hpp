#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bugexplain::eval {

struct EvalPair {
  std::string reference;
  std::string hypothesis;
};

/// Lowercased words with every punctuation character split off as its own
/// token.
std::vector<std::string> bleu_tokens(std::string_view text);

/// Corpus-level BLEU-4 on a 0..100 scale. A zero match count for n >= 2 is
/// smoothed to 1 / (candidate n-grams + 1); a zero unigram match gives 0.
/// Throws EMPTY_INPUT.
double bleu(std::span<const EvalPair> pairs);

/// The same formula applied to a single pair.
double sentence_bleu(const EvalPair& pair);

/// Fraction of pairs equal after lowercasing, trimming and collapsing
/// whitespace. Throws EMPTY_INPUT.
double exact_match(std::span<const EvalPair> pairs);

/// Mean token-count cosine between hypothesis and reference. A stand-in
/// for embedding similarity. Throws EMPTY_INPUT.
double similarity_proxy(std::span<const EvalPair> pairs);

double token_cosine(std::string_view a, std::string_view b);

}  // namespace bugexplain::eval
