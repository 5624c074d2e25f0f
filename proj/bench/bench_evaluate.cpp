#include <benchmark/benchmark.h>

#include <random>

#include "hceval/evaluate.hpp"
#include "support/synthetic.hpp"

namespace {

using namespace hceval;

struct Workload {
  testing::SyntheticDag dag;
  std::vector<InstanceLabels> instances;
};

const Workload& workload() {
  static const Workload w = [] {
    std::mt19937 rng(3);
    Workload out{testing::synthetic_dag(rng, 20000, 10), {}};
    for (int i = 0; i < 4000; ++i) {
      auto y = testing::synthetic_truth(rng, out.dag, 3);
      auto p = testing::synthetic_prediction(rng, out.dag, y, 0.5);
      out.instances.push_back({std::move(y), std::move(p)});
    }
    return out;
  }();
  return w;
}

EvalConfig config() {
  EvalConfig cfg;
  cfg.measures = {Measure::gie, Measure::mgia, Measure::ph,   Measure::rh,   Measure::fh,
                  Measure::sdl, Measure::plca, Measure::rlca, Measure::flca};
  cfg.lca_threshold = 4;
  return cfg;
}

void BM_Serial(benchmark::State& state) {
  const auto& w = workload();
  const auto cfg = config();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_serial(w.dag.h, w.instances, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.instances.size()));
}

void BM_Parallel(benchmark::State& state) {
  const auto& w = workload();
  const auto cfg = config();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_parallel(w.dag.h, w.instances, cfg, workers));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.instances.size()));
}

}  // namespace

BENCHMARK(BM_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
