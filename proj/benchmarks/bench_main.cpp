#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "bugexplain/ast/python_parser.hpp"
#include "bugexplain/diffsbt/diff_sbt.hpp"
#include "bugexplain/eval/metrics.hpp"
#include "bugexplain/explain/corpus_index.hpp"
#include "bugexplain/explain/featurize.hpp"
#include "bugexplain/ingest/pipeline.hpp"

using namespace bugexplain;

namespace {

// A module of `functions` small functions, about nine lines each.
std::string synthetic_module(int functions) {
  std::string out = "import os\n\n";
  for (int i = 0; i < functions; ++i) {
    const std::string n = std::to_string(i);
    out += "def handler_" + n + "(request, limit=" + n + "):\n";
    out += "    items = [x * 2 for x in request.items if x > limit]\n";
    out += "    if not items:\n";
    out += "        return None\n";
    out += "    total = sum(items) + len(request.name)\n";
    out += "    for key, value in request.headers.items():\n";
    out += "        total += hash((key, value)) % 7\n";
    out += "    return {'total': total, 'path': os.path.join('a', f'{total}')}\n\n";
  }
  return out;
}

const std::vector<ingest::TrainingRecord>& bench_records() {
  static const auto records = [] {
    auto source = ingest::open_diff_dir(BUGEXPLAIN_BENCH_COMMITS);
    ingest::IngestOptions options;
    options.records.featurizers = {explain::Featurizer::kStructural};
    return ingest::ingest(*source, options).records;
  }();
  return records;
}

void BM_Parse(benchmark::State& state) {
  const auto code = synthetic_module(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ast::parse_source(code));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * code.size()));
}
BENCHMARK(BM_Parse)->Arg(10)->Arg(100)->Arg(1000);

void BM_Intersections(benchmark::State& state) {
  const auto code = synthetic_module(static_cast<int>(state.range(0)));
  const auto tree = ast::parse_source(code);
  const auto mid = tree.span.end / 2;
  const auto lines = diffsbt::expand_context({mid, mid + 1}, tree.span.end);
  for (auto _ : state) {
    benchmark::DoNotOptimize(diffsbt::intersections(tree.children, lines));
  }
}
BENCHMARK(BM_Intersections)->Arg(10)->Arg(100)->Arg(1000);

void BM_SbtForRange(benchmark::State& state) {
  const auto code = synthetic_module(100);
  for (auto _ : state) benchmark::DoNotOptimize(diffsbt::sbt_for_range(code, {450, 452}));
}
BENCHMARK(BM_SbtForRange);

void BM_SbtRoundTrip(benchmark::State& state) {
  const auto tree = ast::parse_source(synthetic_module(10));
  for (auto _ : state) {
    const auto tokens = diffsbt::sbt(tree);
    benchmark::DoNotOptimize(diffsbt::parse_sbt(tokens));
  }
}
BENCHMARK(BM_SbtRoundTrip);

void BM_RetrievalSearch(benchmark::State& state) {
  const auto& records = bench_records();
  const explain::CorpusIndex index(records, explain::Featurizer::kStructural);
  std::vector<std::vector<std::string>> queries;
  for (const auto& r : records) {
    if (r.kind == ingest::RecordKind::kFinetune) queries.push_back(r.input);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.search(queries[i++ % queries.size()]));
  }
  state.counters["corpus"] = static_cast<double>(index.size());
}
BENCHMARK(BM_RetrievalSearch);

void BM_Bleu(benchmark::State& state) {
  std::vector<eval::EvalPair> pairs;
  for (const auto& r : bench_records()) {
    pairs.push_back({r.target, "fix the " + r.target.substr(0, r.target.size() / 2)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(eval::bleu(pairs));
  state.counters["pairs"] = static_cast<double>(pairs.size());
}
BENCHMARK(BM_Bleu);

}  // namespace
BENCHMARK_MAIN();
