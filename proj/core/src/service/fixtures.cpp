#include "bugexplain/service/fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "bugexplain/error.hpp"

namespace bugexplain::service {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFormatError, fmt::format("cannot read {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

ExperimentFixture parse_fixture(const fs::path& meta_path) {
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorCode::kFormatError, fmt::format("{}: {}", meta_path.string(), why));
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp(meta_path));
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  }
  ExperimentFixture fixture;
  try {
    fixture.name = j.at("name").get<std::string>();
    fixture.file_name = j.at("source").get<std::string>();
    auto range = j.at("bug_range").get<std::vector<int>>();
    if (range.size() != 2) throw fail("bug_range must be [start, end]");
    fixture.bug_range = ast::LineRange{range[0], range[1]};
    fixture.human_explanations = j.at("human_explanations").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  }
  if (fixture.name.empty()) throw fail("empty name");
  if (fs::path(fixture.file_name).is_absolute() || fixture.file_name.find("..") != std::string::npos) {
    throw fail("source must be a relative path inside the fixtures directory");
  }
  fixture.content = slurp(meta_path.parent_path() / fixture.file_name);
  const auto& r = fixture.bug_range;
  if (r.start < 1 || r.start > r.end || r.end > ast::count_lines(fixture.content)) {
    throw fail(fmt::format("bug_range {}..{} is outside the source", r.start, r.end));
  }
  if (fixture.human_explanations.empty()) throw fail("no human explanations");
  return fixture;
}

}  // namespace

std::vector<ExperimentFixture> load_fixtures(const std::filesystem::path& dir) {
  std::vector<ExperimentFixture> fixtures;
  if (dir.empty() || !fs::is_directory(dir)) {
    if (!dir.empty()) spdlog::warn("fixtures directory {} not found", dir.string());
    return fixtures;
  }
  std::vector<fs::path> metas;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      metas.push_back(entry.path());
    }
  }
  std::sort(metas.begin(), metas.end());
  std::set<std::string> names;
  for (const auto& meta : metas) {
    auto fixture = parse_fixture(meta);
    if (!names.insert(fixture.name).second) {
      throw Error(ErrorCode::kFormatError,
                  fmt::format("{}: duplicate fixture name '{}'", meta.string(), fixture.name));
    }
    fixtures.push_back(std::move(fixture));
  }
  return fixtures;
}

}  // namespace bugexplain::service
