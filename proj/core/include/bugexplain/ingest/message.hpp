#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bugexplain::ingest {

const std::vector<std::string>& default_bugfix_keywords();

/// Substring match of any keyword against the lowercased first line.
bool is_bugfix_message(std::string_view message,
                       std::span<const std::string> keywords = default_bugfix_keywords());

/// First line, lowercased, whitespace collapsed, "#123" references dropped.
/// Throws EMPTY_TARGET when nothing is left.
std::string normalize_message(std::string_view message);

/// "fix,bug , crash" -> {"fix", "bug", "crash"}; empty items are dropped.
std::vector<std::string> split_keywords(std::string_view csv);

}  // namespace bugexplain::ingest
