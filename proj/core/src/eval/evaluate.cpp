#include "bugexplain/eval/evaluate.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bugexplain/error.hpp"
#include "bugexplain/eval/metrics.hpp"

namespace bugexplain::eval {
namespace {

using ingest::TrainingRecord;

std::string meta_value(const TrainingRecord& record, std::string_view key) {
  auto it = record.meta.find(std::string(key));
  return it == record.meta.end() ? std::string() : it->second;
}

std::string pairing_key(const TrainingRecord& record) {
  return fmt::format("{}\n{}\n{}", meta_value(record, ingest::kMetaCommit),
                     meta_value(record, ingest::kMetaFile),
                     meta_value(record, ingest::kMetaRange));
}

struct ModelRun {
  std::string name;
  ModelScores scores;
  std::map<std::string, double> sentence_bleu_by_key;
};

ModelRun run_model(std::span<const TrainingRecord> test, const explain::Explainer& explainer,
                   const std::string& name) {
  const auto& spec = explainer.registry().find(name);
  const std::string featurizer(explain::to_string(spec.featurizer));
  ModelRun run{spec.name, {}, {}};
  std::vector<EvalPair> pairs;
  for (const auto& record : test) {
    if (record.kind != ingest::RecordKind::kFinetune) continue;
    const std::string tag = meta_value(record, ingest::kMetaFeaturizer);
    if (!tag.empty() && tag != featurizer) continue;
    auto top = explainer.explain_tokens(record.input, spec.name, 1);
    EvalPair pair{record.target, top.empty() ? std::string() : top.front().text};
    run.sentence_bleu_by_key.emplace(pairing_key(record), sentence_bleu(pair));
    pairs.push_back(std::move(pair));
  }
  if (pairs.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                fmt::format("no {} finetune records to evaluate '{}' on", featurizer, spec.name));
  }
  run.scores = {bleu(pairs), exact_match(pairs), similarity_proxy(pairs), pairs.size()};
  return run;
}

PairwiseStats compare(const ModelRun& a, const ModelRun& b) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [key, score] : a.sentence_bleu_by_key) {
    auto other = b.sentence_bleu_by_key.find(key);
    if (other == b.sentence_bleu_by_key.end()) continue;
    xs.push_back(score);
    ys.push_back(other->second);
  }
  PairwiseStats stats{a.name, b.name, xs.size(), std::nullopt, 0.0, Magnitude::kNegligible};
  if (xs.empty()) return stats;
  try {
    stats.p_value = wilcoxon_signed_rank(xs, ys);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerate) throw;
  }
  const auto delta = cliffs_delta(xs, ys);
  stats.cliffs_d = delta.d;
  stats.magnitude = delta.magnitude;
  return stats;
}

}  // namespace

EvalReport evaluate(std::span<const TrainingRecord> test, const explain::Explainer& explainer,
                    std::span<const std::string> model_names) {
  if (model_names.empty()) throw Error(ErrorCode::kEmptyInput, "no models to evaluate");
  std::vector<ModelRun> runs;
  for (const auto& name : model_names) runs.push_back(run_model(test, explainer, name));
  EvalReport report;
  for (const auto& run : runs) report.models[run.name] = run.scores;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      report.pairwise.push_back(compare(runs[i], runs[j]));
    }
  }
  return report;
}

std::string report_to_json(const EvalReport& report, int indent) {
  nlohmann::ordered_json j;
  j["models"] = nlohmann::ordered_json::object();
  for (const auto& [name, s] : report.models) {
    j["models"][name] = {{"bleu", s.bleu},
                         {"exact_match", s.exact_match},
                         {"similarity_proxy", s.similarity_proxy},
                         {"n", s.n}};
  }
  j["pairwise"] = nlohmann::ordered_json::array();
  for (const auto& p : report.pairwise) {
    j["pairwise"].push_back({{"model_a", p.model_a},
                             {"model_b", p.model_b},
                             {"n", p.n},
                             {"p_value", p.p_value ? nlohmann::ordered_json(*p.p_value)
                                                   : nlohmann::ordered_json(nullptr)},
                             {"cliffs_d", p.cliffs_d},
                             {"magnitude", to_string(p.magnitude)}});
  }
  return j.dump(indent);
}

}  // namespace bugexplain::eval
