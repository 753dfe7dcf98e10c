#include "bugexplain/ingest/message.hpp"

#include <algorithm>
#include <cctype>

#include "bugexplain/error.hpp"

namespace bugexplain::ingest {
namespace {

std::string_view first_line(std::string_view text) {
  auto start = text.find_first_not_of(" \t\r\n");
  if (start == std::string_view::npos) return {};
  text.remove_prefix(start);
  return text.substr(0, text.find_first_of("\r\n"));
}

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// "#42", "(#42)", "#42," and the like.
bool is_issue_ref(std::string_view word) {
  while (!word.empty() && (word.front() == '(' || word.front() == '[')) word.remove_prefix(1);
  while (!word.empty() && std::string_view(")],.;:").find(word.back()) != std::string_view::npos) {
    word.remove_suffix(1);
  }
  if (word.size() < 2 || word.front() != '#') return false;
  return std::all_of(word.begin() + 1, word.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

const std::vector<std::string>& default_bugfix_keywords() {
  static const std::vector<std::string> keywords = {
      "fix", "bug", "crash", "error", "fault", "defect", "issue", "fail"};
  return keywords;
}

bool is_bugfix_message(std::string_view message, std::span<const std::string> keywords) {
  const std::string subject = lower(first_line(message));
  return std::any_of(keywords.begin(), keywords.end(), [&](const std::string& k) {
    return !k.empty() && subject.find(lower(k)) != std::string::npos;
  });
}

std::string normalize_message(std::string_view message) {
  const std::string subject = lower(first_line(message));
  std::string out;
  std::size_t i = 0;
  while (i < subject.size()) {
    while (i < subject.size() && std::isspace(static_cast<unsigned char>(subject[i]))) ++i;
    std::size_t j = i;
    while (j < subject.size() && !std::isspace(static_cast<unsigned char>(subject[j]))) ++j;
    std::string_view word(subject.data() + i, j - i);
    if (!word.empty() && !is_issue_ref(word)) {
      if (!out.empty()) out += ' ';
      out += word;
    }
    i = j;
  }
  if (out.empty()) throw Error(ErrorCode::kEmptyTarget, "commit message has no subject line");
  return out;
}

std::vector<std::string> split_keywords(std::string_view csv) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    auto comma = csv.find(',', pos);
    if (comma == std::string_view::npos) comma = csv.size();
    std::string_view item = csv.substr(pos, comma - pos);
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string_view::npos) out.emplace_back(item.substr(b, e - b + 1));
    pos = comma + 1;
  }
  return out;
}

}  // namespace bugexplain::ingest
