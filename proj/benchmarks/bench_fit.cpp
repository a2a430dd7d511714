#include <benchmark/benchmark.h>

#include "semisup/data_io.hpp"
#include "semisup/model.hpp"
#include "semisup/semi_supervised.hpp"

namespace {

semisup::SyntheticDraw make_draw(semisup::Index n, semisup::Index d, std::uint64_t seed) {
  semisup::SyntheticSpec spec;
  spec.mean_separation = semisup::Vector::Zero(d);
  spec.mean_separation[0] = 1.0;
  spec.n = n;
  spec.seed = seed;
  return semisup::generate_synthetic(spec);
}

semisup::ClassifierKind kind_of(const benchmark::State& state) {
  return state.range(0) == 0 ? semisup::ClassifierKind::Nmc : semisup::ClassifierKind::Lda;
}

void BM_FitSupervised(benchmark::State& state) {
  const auto draw = make_draw(state.range(1), 30, 1);
  for (auto _ : state) benchmark::DoNotOptimize(semisup::fit_supervised(kind_of(state), draw.data));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_FitSupervised)->ArgsProduct({{0, 1}, {100, 1000}});

void BM_Evaluate(benchmark::State& state) {
  const auto train = make_draw(200, state.range(1), 2);
  const auto test = make_draw(5000, state.range(1), 3);
  const auto model = semisup::fit_supervised(kind_of(state), train.data);
  for (auto _ : state) benchmark::DoNotOptimize(semisup::evaluate(model, test.data));
  state.SetItemsProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_Evaluate)->ArgsProduct({{0, 1}, {3, 30}});

void BM_FitConstrained(benchmark::State& state) {
  const auto labeled = make_draw(100, 30, 4);
  const auto unlabeled = make_draw(state.range(1), 30, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(semisup::fit_constrained(kind_of(state), labeled.data, unlabeled.data.features));
  }
}
BENCHMARK(BM_FitConstrained)->ArgsProduct({{0, 1}, {32, 2048}});

void BM_SelfLearn(benchmark::State& state) {
  const auto labeled = make_draw(10, 8, 6);
  const auto unlabeled = make_draw(state.range(1), 8, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(semisup::fit_self_learned(kind_of(state), labeled.data, unlabeled.data.features,
                                                       semisup::kDefaultMaxIter));
  }
}
BENCHMARK(BM_SelfLearn)->ArgsProduct({{0, 1}, {128, 2048}});

}  // namespace
BENCHMARK_MAIN();
