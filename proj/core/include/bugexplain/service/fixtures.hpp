#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bugexplain/ast/simple_node.hpp"

namespace bugexplain::service {

struct ExperimentFixture {
  std::string name;
  std::string file_name;
  std::string content;
  ast::LineRange bug_range;
  std::vector<std::string> human_explanations;
};

/// Reads every `*.json` file in `dir`, sorted by file name. Each holds
///   {"name": ..., "source": "relative/file.py", "bug_range": [start, end],
///    "human_explanations": [...]}
/// A missing directory gives an empty list. Throws FORMAT_ERROR naming the
/// offending file when a fixture is malformed, its range falls outside the
/// source, it has no explanations or its name repeats.
std::vector<ExperimentFixture> load_fixtures(const std::filesystem::path& dir);

}  // namespace bugexplain::service
