#pragma once

#include <string_view>

#include "bugexplain/ast/simple_node.hpp"

namespace bugexplain::ast {

/// Parses Python 3 source into a simplified tree rooted at a "Module" node.
///
/// Node kinds follow the names of the standard Python grammar productions
/// (FunctionDef, If, Assign, Call, Name, Constant, ...). Operators appear as
/// leaf children (Add, Lt, Not, ...) placed at the operator token's line.
/// Spans are line-granular; decorated definitions start at their first
/// decorator. Children are listed in source order.
///
/// Throws ParseError on invalid syntax.
SimpleNode parse_source(std::string_view text);

}  // namespace bugexplain::ast
