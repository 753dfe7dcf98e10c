#pragma once

#include <string_view>

namespace bugexplain::ast {

enum class NodeCategory { kStatement, kExpression, kOther };

/// Fixed lookup table over Python grammar production names. Unknown labels
/// map to kOther.
NodeCategory classify(std::string_view kind) noexcept;

inline bool is_expression(std::string_view kind) noexcept {
  return classify(kind) == NodeCategory::kExpression;
}

inline bool is_statement(std::string_view kind) noexcept {
  return classify(kind) == NodeCategory::kStatement;
}

std::string_view to_string(NodeCategory category) noexcept;

}  // namespace bugexplain::ast
