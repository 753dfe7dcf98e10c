#include "bugexplain/explain/featurize.hpp"

#include <cctype>

#include <fmt/format.h>

#include "bugexplain/error.hpp"

namespace bugexplain::explain {
namespace {

bool is_word_char(char c) noexcept {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || u >= 0x80;
}

// Byte offsets of the first character of each physical line.
std::vector<std::size_t> line_starts(std::string_view code) {
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (code[i] == '\n' && i + 1 < code.size()) starts.push_back(i + 1);
  }
  return starts;
}

}  // namespace

std::string_view to_string(Featurizer featurizer) noexcept {
  return featurizer == Featurizer::kStructural ? "structural" : "plaintext";
}

Featurizer parse_featurizer(std::string_view text) {
  if (text == "structural") return Featurizer::kStructural;
  if (text == "plaintext") return Featurizer::kPlaintext;
  throw Error(ErrorCode::kConfigError, fmt::format("unknown featurizer '{}'", text));
}

Tokens lexical_tokens(std::string_view text) {
  Tokens out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (is_word_char(c)) {
      std::size_t j = i;
      while (j < text.size() && is_word_char(text[j])) ++j;
      out.emplace_back(text.substr(i, j - i));
      i = j;
    } else {
      out.emplace_back(1, c);
      ++i;
    }
  }
  return out;
}

Tokens plaintext_tokens(std::string_view code, const LineSet& lines, int radius) {
  const auto starts = line_starts(code);
  const LineSet expanded =
      diffsbt::expand_context(lines, static_cast<int>(starts.size()), radius);
  Tokens out;
  for (int line : expanded) {
    const std::size_t begin = starts[static_cast<std::size_t>(line - 1)];
    const std::size_t end = static_cast<std::size_t>(line) < starts.size()
                                ? starts[static_cast<std::size_t>(line)]
                                : code.size();
    Tokens part = lexical_tokens(code.substr(begin, end - begin));
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

Tokens featurize(std::string_view code, const LineRange& range, Featurizer featurizer,
                 int radius) {
  if (featurizer == Featurizer::kStructural) {
    return diffsbt::sbt_for_range(code, range, radius);
  }
  const auto checked = LineRange::checked(range.start, range.end);
  return plaintext_tokens(code, diffsbt::lines_of(checked), radius);
}

}  // namespace bugexplain::explain
