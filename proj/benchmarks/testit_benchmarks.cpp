#include "testit/codegen.hpp"
#include "testit/results.hpp"
#include "testit/vectorgen.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace testit;

namespace {

TestSpec square_test(DataType type, double lo, double hi) {
  TestSpec t;
  t.appName = "bench";
  t.genFilesName = "test_data";
  t.parameters = {ParameterSpec{"SIZE", IntRange{1, 512}, 1}};
  t.inputDataset = {InputDatasetSpec{"input_matrix", type, lo, hi, {"SIZE", "SIZE"}}};
  t.outputDataset = {{"output_matrix", type}};
  return t;
}

void BM_GenerateInputs(benchmark::State& state) {
  const bool is_float = state.range(1) != 0;
  TestSpec t = is_float ? square_test(DataType::kFloat, -1, 1) : square_test(DataType::kUint8, 0, 255);
  ParameterBinding b{{"SIZE", state.range(0)}};
  std::uint64_t it = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_inputs(t, b, 42, it++));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_GenerateInputs)->ArgsProduct({{8, 64, 256}, {0, 1}});

void BM_RenderPair(benchmark::State& state) {
  const bool is_float = state.range(1) != 0;
  TestSpec t = is_float ? square_test(DataType::kFloat, -1, 1) : square_test(DataType::kUint8, 0, 255);
  ParameterBinding b{{"SIZE", state.range(0)}};
  auto inputs = generate_inputs(t, b, 42, 0);
  auto goldens = inputs;
  goldens[0].name = "output_matrix";
  std::size_t bytes = 0;
  for (auto _ : state) {
    auto pair = render_pair(t, b, inputs, goldens);
    bytes += pair.headerText.size() + pair.sourceText.size() + pair.sidecarText.size();
    benchmark::DoNotOptimize(pair);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_RenderPair)->ArgsProduct({{8, 64, 256}, {0, 1}});

void BM_ParseOutput(benchmark::State& state) {
  std::string raw;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    raw += std::to_string(i % 7) + ":" + std::to_string(i * 131) + ":" + std::to_string(i & 1) + "\n";
    if (i % 4 == 0) raw += "debug: noise line\n";
  }
  const std::regex format("(\\d+):(\\d+):(\\d+)");
  const std::vector<std::string> tags = {"TestID", "Cycles", "Outcome"};
  for (auto _ : state) benchmark::DoNotOptimize(parse_output(raw, format, tags));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ParseOutput)->Arg(10)->Arg(1000);

void BM_SortOrder(benchmark::State& state) {
  CampaignDatabase db;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    db.records.push_back(RunRecord{static_cast<std::uint64_t>(i), "app", {{"SIZE", i % 9}},
                                   {{"Cycles", std::to_string((i * 7919) % 1000)}}, i % 3 != 0, 0.01 * i});
  }
  for (auto _ : state) benchmark::DoNotOptimize(sort_order(db, std::string("Cycles"), true));
}
BENCHMARK(BM_SortOrder)->Arg(300)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
