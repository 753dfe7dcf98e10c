#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bugexplain/eval/stats.hpp"
#include "bugexplain/explain/explainer.hpp"

namespace bugexplain::eval {

struct ModelScores {
  double bleu = 0.0;
  double exact_match = 0.0;
  double similarity_proxy = 0.0;
  std::size_t n = 0;
};

/// Sentence-BLEU comparison of two models over the records both answered.
/// p_value is empty when every paired difference is zero.
struct PairwiseStats {
  std::string model_a;
  std::string model_b;
  std::size_t n = 0;
  std::optional<double> p_value;
  double cliffs_d = 0.0;
  Magnitude magnitude = Magnitude::kNegligible;
};

struct EvalReport {
  std::map<std::string, ModelScores> models;
  std::vector<PairwiseStats> pairwise;
};

/// Runs every named model over the finetune records of `test` that match
/// its featurizer, scoring the top-1 explanation against each record's
/// target. Records of different models are paired by commit, file and
/// range. Throws EMPTY_INPUT when a model has no matching record, plus
/// anything the explainer throws.
EvalReport evaluate(std::span<const ingest::TrainingRecord> test,
                    const explain::Explainer& explainer,
                    std::span<const std::string> model_names);

std::string report_to_json(const EvalReport& report, int indent = 2);

}  // namespace bugexplain::eval
