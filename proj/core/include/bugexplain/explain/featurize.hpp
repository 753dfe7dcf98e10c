#pragma once

#include <string_view>

#include "bugexplain/diffsbt/diff_sbt.hpp"

namespace bugexplain::explain {

using diffsbt::LineRange;
using diffsbt::LineSet;
using diffsbt::Tokens;

enum class Featurizer { kStructural, kPlaintext };

std::string_view to_string(Featurizer featurizer) noexcept;
/// Accepts "structural" or "plaintext"; throws CONFIG_ERROR otherwise.
Featurizer parse_featurizer(std::string_view text);

/// Identifier/number runs plus every other non-blank character on its own.
Tokens lexical_tokens(std::string_view text);

/// Lexical tokens of the given lines after context expansion. Never parses.
Tokens plaintext_tokens(std::string_view code, const LineSet& lines,
                        int radius = diffsbt::kDefaultRadius);

/// Token sequence a model sees for a selection. Structural selections go
/// through the AST and can throw PARSE_ERROR; both throw INVALID_RANGE for a
/// range outside the file.
Tokens featurize(std::string_view code, const LineRange& range, Featurizer featurizer,
                 int radius = diffsbt::kDefaultRadius);

}  // namespace bugexplain::explain
