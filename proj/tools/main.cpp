#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>
#include <spdlog/sinks/stdout_color_sinks.h>

#include "bugexplain/ast/python_parser.hpp"
#include "bugexplain/diffsbt/diff_sbt.hpp"
#include "bugexplain/error.hpp"
#include "bugexplain/eval/evaluate.hpp"
#include "bugexplain/explain/explainer.hpp"
#include "bugexplain/ingest/message.hpp"
#include "bugexplain/ingest/pipeline.hpp"
#include "bugexplain/service/config.hpp"
#include "bugexplain/service/server.hpp"

namespace {

using namespace bugexplain;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, fmt::format("cannot read {}", path));
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

nlohmann::json node_json(const ast::SimpleNode& node) {
  nlohmann::json j;
  j["kind"] = node.kind;
  j["value"] = node.value ? nlohmann::json(*node.value) : nlohmann::json(nullptr);
  j["span"] = {node.span.start, node.span.end};
  j["children"] = nlohmann::json::array();
  for (const auto& child : node.children) j["children"].push_back(node_json(child));
  return j;
}

std::vector<explain::Featurizer> featurizers_from(const std::string& choice) {
  if (choice == "both") return {explain::Featurizer::kStructural, explain::Featurizer::kPlaintext};
  return {explain::parse_featurizer(choice)};
}

service::HttpServer* running_server = nullptr;

void on_signal(int) {
  if (running_server) running_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bug explanation workbench: structural extraction, corpora, retrieval and evaluation"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string file;
  int start = 0;
  int end = 0;
  int radius = diffsbt::kDefaultRadius;

  auto* ast_cmd = app.add_subcommand("ast", "Print the simplified AST of a Python file as JSON");
  ast_cmd->add_option("--file", file, "Python source file")->required();

  auto* sbt_cmd = app.add_subcommand("sbt", "Print the SBT tokens of a line range");
  sbt_cmd->add_option("--file", file, "Python source file")->required();
  sbt_cmd->add_option("--start", start, "First selected line")->required();
  sbt_cmd->add_option("--end", end, "Last selected line")->required();
  sbt_cmd->add_option("--radius", radius, "Context lines around the selection")
      ->check(CLI::NonNegativeNumber);

  std::string diff_dir;
  std::string git_repo;
  std::string out_path;
  std::string keywords;
  std::string featurizer = "structural";
  unsigned threads = 0;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build a JSONL corpus from bug-fix commits");
  auto* dir_opt = ingest_cmd->add_option("--diff-dir", diff_dir, "Directory of exported commits");
  auto* git_opt = ingest_cmd->add_option("--git", git_repo, "Path to a git repository");
  dir_opt->excludes(git_opt);
  ingest_cmd->add_option("--out", out_path, "Corpus file to write")->required();
  ingest_cmd->add_option("--keywords", keywords, "Comma-separated bug-fix keywords");
  ingest_cmd->add_option("--featurizer", featurizer, "Record featurization")
      ->check(CLI::IsMember({"structural", "plaintext", "both"}));
  ingest_cmd->add_option("--radius", radius, "Context lines around changes")
      ->check(CLI::NonNegativeNumber);
  ingest_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::string model = std::string(explain::kBugsplainer);
  std::string corpus;
  std::string config_path;
  auto* explain_cmd = app.add_subcommand("explain", "Explain a line range of a Python file");
  explain_cmd->add_option("--file", file, "Python source file")->required();
  explain_cmd->add_option("--start", start, "First selected line")->required();
  explain_cmd->add_option("--end", end, "Last selected line")->required();
  explain_cmd->add_option("--model", model, "Model name");
  explain_cmd->add_option("--corpus", corpus, "Corpus for retrieval models");
  explain_cmd->add_option("--config", config_path, "Service configuration file");

  std::string train_path;
  std::string models_csv = std::string(explain::kBugsplainer);
  auto* eval_cmd = app.add_subcommand("eval", "Score models on a held-out corpus");
  eval_cmd->add_option("--corpus", corpus, "Test corpus (JSONL)")->required();
  eval_cmd->add_option("--train", train_path, "Retrieval corpus (defaults to the configuration)");
  eval_cmd->add_option("--models", models_csv, "Comma-separated model names");
  eval_cmd->add_option("--config", config_path, "Service configuration file");
  std::string report_path;
  eval_cmd->add_option("--out", report_path, "Report file (stdout when omitted)");

  std::string fixtures_dir;
  std::string static_dir;
  int port = -1;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--port", port, "Port (overrides config and BUGEXPLAIN_PORT)")
      ->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--config", config_path, "Service configuration file");
  serve_cmd->add_option("--fixtures", fixtures_dir, "Experiment fixtures directory");
  serve_cmd->add_option("--static", static_dir, "Web UI build to serve at /");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_default_logger(spdlog::stderr_color_mt("bugexplain"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  spdlog::set_pattern("[%l] %v");

  auto load_service_config = [&] {
    service::ServiceConfig config =
        config_path.empty() ? service::ServiceConfig{} : service::load_config(config_path);
    service::apply_env_overrides(config);
    return config;
  };

  try {
    if (*ast_cmd) {
      std::cout << node_json(ast::parse_source(read_text(file))).dump(1) << '\n';
    } else if (*sbt_cmd) {
      const auto tokens = diffsbt::sbt_for_range(read_text(file), {start, end}, radius);
      std::cout << diffsbt::join_tokens(tokens) << '\n';
    } else if (*ingest_cmd) {
      if (diff_dir.empty() == git_repo.empty()) {
        throw Error(ErrorCode::kBadRequest, "pass exactly one of --diff-dir or --git");
      }
      auto source = diff_dir.empty() ? ingest::open_git_repo(git_repo)
                                     : ingest::open_diff_dir(diff_dir);
      ingest::IngestOptions options;
      if (!keywords.empty()) options.keywords = ingest::split_keywords(keywords);
      options.records.radius = radius;
      options.records.featurizers = featurizers_from(featurizer);
      options.threads = threads;
      auto result = ingest::ingest(*source, options);
      ingest::write_corpus(result.records, out_path);
      const auto& s = result.stats;
      spdlog::info(
          "commits {} (non-bugfix {}, unreadable {}); files {} (non-python {}, unchanged {}, "
          "parse errors {}, invalid {}); wrote {} records to {}",
          s.commits, s.non_bugfix, s.load_errors, s.files, s.non_python, s.unchanged,
          s.parse_errors, s.invalid, s.records, out_path);
    } else if (*explain_cmd) {
      auto config = load_service_config();
      if (!corpus.empty()) {
        config.registry.structural_corpus = corpus;
        config.registry.plaintext_corpus = corpus;
      }
      explain::Explainer explainer(explain::register_defaults(config.registry), config.explainer);
      for (const auto& e : explainer.explain(read_text(file), start, end, model)) {
        std::cout << fmt::format("{:.4f}\t{}\n", e.score, e.text);
      }
    } else if (*eval_cmd) {
      auto config = load_service_config();
      if (!train_path.empty()) {
        config.registry.structural_corpus = train_path;
        config.registry.plaintext_corpus = train_path;
      }
      explain::Explainer explainer(explain::register_defaults(config.registry), config.explainer);
      const auto test = ingest::read_corpus(corpus);
      const auto names = ingest::split_keywords(models_csv);
      const auto report = eval::evaluate(test, explainer, names);
      const std::string json = eval::report_to_json(report);
      if (report_path.empty()) {
        std::cout << json << '\n';
      } else {
        std::ofstream out(report_path, std::ios::binary);
        out << json << '\n';
        if (!out) throw Error(ErrorCode::kIoError, fmt::format("cannot write {}", report_path));
      }
    } else if (*serve_cmd) {
      auto config = load_service_config();
      if (port >= 0) config.port = port;
      if (!fixtures_dir.empty()) config.fixtures_dir = fixtures_dir;
      if (!static_dir.empty()) config.static_dir = static_dir;
      service::HttpServer server(service::make_handler(config),
                                 {config.host, config.port, config.static_dir});
      server.bind();
      running_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.serve();
      running_server = nullptr;
    }
  } catch (const ParseError& e) {
    spdlog::error("{}: {}", to_string(e.code()), e.what());
    return 1;
  } catch (const Error& e) {
    spdlog::error("{}: {}", to_string(e.code()), e.what());
    return 1;
  }
  return 0;
}
