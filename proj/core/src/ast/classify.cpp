#include "bugexplain/ast/classify.hpp"

#include <algorithm>
#include <array>

namespace bugexplain::ast {
namespace {

// Sorted for binary search.
constexpr std::array<std::string_view, 27> kExpressionKinds = {
    "Attribute",  "Await",     "BinOp",     "BoolOp",     "Call",
    "Compare",    "Constant",  "Dict",      "DictComp",   "FormattedValue",
    "GeneratorExp", "IfExp",   "JoinedStr", "Lambda",     "List",
    "ListComp",   "Name",      "NamedExpr", "Set",        "SetComp",
    "Slice",      "Starred",   "Subscript", "Tuple",      "UnaryOp",
    "Yield",      "YieldFrom",
};

constexpr std::array<std::string_view, 27> kStatementKinds = {
    "AnnAssign", "Assert",   "Assign",   "AsyncFor",         "AsyncFunctionDef",
    "AsyncWith", "AugAssign", "Break",   "ClassDef",         "Continue",
    "Delete",    "Expr",     "For",      "FunctionDef",      "Global",
    "If",        "Import",   "ImportFrom", "Match",          "Nonlocal",
    "Pass",      "Raise",    "Return",   "Try",              "TryStar",
    "While",     "With",
};

template <std::size_t N>
constexpr bool is_sorted_table(const std::array<std::string_view, N>& table) {
  for (std::size_t i = 1; i < N; ++i) {
    if (!(table[i - 1] < table[i])) return false;
  }
  return true;
}

static_assert(is_sorted_table(kExpressionKinds));

}  // namespace

NodeCategory classify(std::string_view kind) noexcept {
  if (std::binary_search(kExpressionKinds.begin(), kExpressionKinds.end(), kind)) {
    return NodeCategory::kExpression;
  }
  if (std::find(kStatementKinds.begin(), kStatementKinds.end(), kind) !=
      kStatementKinds.end()) {
    return NodeCategory::kStatement;
  }
  return NodeCategory::kOther;
}

std::string_view to_string(NodeCategory category) noexcept {
  switch (category) {
    case NodeCategory::kStatement: return "Statement";
    case NodeCategory::kExpression: return "Expression";
    case NodeCategory::kOther: return "Other";
  }
  return "Other";
}

}  // namespace bugexplain::ast
