#include <benchmark/benchmark.h>

#include "semisup/data_io.hpp"
#include "semisup/experiment.hpp"

namespace {

void BM_RunCell(benchmark::State& state) {
  semisup::SyntheticSpec spec;
  spec.mean_separation = semisup::Vector::Ones(8) * 0.5;
  spec.n = 500;
  spec.seed = 11;
  const auto data = semisup::generate_synthetic(spec).data;

  semisup::ExperimentConfig config = semisup::default_config();
  config.repetitions = 50;
  config.workers = static_cast<int>(state.range(0));
  const semisup::MethodId method{semisup::Method::Constrained, semisup::ClassifierKind::Nmc};
  for (auto _ : state) benchmark::DoNotOptimize(semisup::run_cell(data, method, 4, 512, config));
  state.SetItemsProcessed(state.iterations() * config.repetitions);
}
BENCHMARK(BM_RunCell)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace
