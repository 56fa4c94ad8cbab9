#include <benchmark/benchmark.h>

#include "iotids/encode.hpp"
#include "iotids/impute.hpp"
#include "iotids/metrics.hpp"
#include "iotids/pipeline.hpp"
#include "iotids/rng.hpp"
#include "iotids/synth.hpp"

using namespace iotids;

namespace {

const SensorStreams& streams() {
  static const SensorStreams s = generate(separable_scenario(1, 1875)).streams;
  return s;
}

const std::vector<CombinedRow>& aggregated() {
  static const auto rows = aggregate_keep_first(group_by_timestamp(streams()).rows);
  return rows;
}

void BM_GroupByTimestamp(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(group_by_timestamp(streams()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(aggregated().size()));
}
BENCHMARK(BM_GroupByTimestamp)->Unit(benchmark::kMillisecond);

void BM_Aggregate(benchmark::State& state) {
  const auto grouped = group_by_timestamp(streams()).rows;
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_keep_first(grouped));
}
BENCHMARK(BM_Aggregate)->Unit(benchmark::kMillisecond);

void BM_Impute(benchmark::State& state) {
  const auto strategy = static_cast<ChannelStrategy>(state.range(0));
  const auto& rows = aggregated();
  const TrainStats stats = compute_train_stats(rows);
  for (auto _ : state) benchmark::DoNotOptimize(impute_channel(rows, strategy, &stats));
  state.SetLabel(std::string(strategy_token(strategy)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows.size()));
}
BENCHMARK(BM_Impute)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_SampleWindows(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto step = static_cast<std::size_t>(state.range(1));
  ChannelBytes bytes;
  for (auto& ch : bytes) ch.assign(rows, ByteRow{});
  const std::vector<EventClass> classes(rows, EventClass::Normal);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_windows(bytes, classes, step, 0, Partition::Train));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(window_count(rows, step)));
}
BENCHMARK(BM_SampleWindows)->Args({300, 20})->Args({1000, 20})->Args({1000, 1})
    ->Unit(benchmark::kMillisecond);

void BM_FprFromApr(benchmark::State& state) {
  Rng rng(9);
  std::vector<std::array<double, 3>> inputs(1024);
  for (auto& in : inputs) {
    const double tp = 1 + rng.below(1000), fn = rng.below(1000);
    const double fp = 1 + rng.below(1000), tn = rng.below(1000);
    in = {(tp + tn) / (tp + tn + fp + fn), tp / (tp + fp), tp / (tp + fn)};
  }
  for (auto _ : state) {
    for (const auto& in : inputs) benchmark::DoNotOptimize(fpr_from_apr(in[0], in[1], in[2]));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(inputs.size()));
}
BENCHMARK(BM_FprFromApr);

void BM_RocAuc(benchmark::State& state) {
  Rng rng(3);
  std::vector<ScoredRecord> records(static_cast<std::size_t>(state.range(0)));
  for (auto& r : records) r = {rng.chance(0.5), rng.unit()};
  for (auto _ : state) benchmark::DoNotOptimize(roc_auc(records));
}
BENCHMARK(BM_RocAuc)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
