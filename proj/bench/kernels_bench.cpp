// Serial reference loops against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "difftree/bootstrap.hpp"
#include "difftree/metrics.hpp"
#include "difftree/synth.hpp"

namespace {

using difftree::Exec;

const difftree::SynthCorpus& corpus_of(std::size_t n) {
  static std::map<std::size_t, difftree::SynthCorpus> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache
             .emplace(n, difftree::generate({difftree::Regime::Mixed, n,
                                             difftree::Date::from_ymd(1950, 1, 1), 1, 0.6, 7}))
             .first;
  }
  return it->second;
}

template <Exec E>
void BM_ExtractAdopters(benchmark::State& state) {
  const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0))).corpus;
  const auto closure = difftree::closure_generations(corpus);
  for (auto _ : state) {
    benchmark::DoNotOptimize(difftree::extract_adopters(corpus, closure, E));
  }
}

template <Exec E>
void BM_SelectParents(benchmark::State& state) {
  const auto profiles =
      difftree::extract_adopters(corpus_of(static_cast<std::size_t>(state.range(0))).corpus);
  for (auto _ : state) {
    benchmark::DoNotOptimize(difftree::select_parents(profiles, E));
  }
}

template <Exec E>
void BM_NodeIntervals(benchmark::State& state) {
  const auto profiles =
      difftree::extract_adopters(corpus_of(static_cast<std::size_t>(state.range(0))).corpus);
  const auto tree = difftree::build_tree(profiles, difftree::kSynthInnovationId);
  for (auto _ : state) {
    benchmark::DoNotOptimize(difftree::node_intervals(tree, profiles, E));
  }
}

template <Exec E>
void BM_Bootstrap(benchmark::State& state) {
  const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0))).corpus;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        difftree::bootstrap_metrics(corpus, {0.1, 16, 42, difftree::SvVariant::Mean}, E));
  }
}

}  // namespace

BENCHMARK(BM_ExtractAdopters<Exec::Serial>)->Arg(2000)->Arg(20000);
BENCHMARK(BM_ExtractAdopters<Exec::Parallel>)->Arg(2000)->Arg(20000);
BENCHMARK(BM_SelectParents<Exec::Serial>)->Arg(2000)->Arg(20000);
BENCHMARK(BM_SelectParents<Exec::Parallel>)->Arg(2000)->Arg(20000);
BENCHMARK(BM_NodeIntervals<Exec::Serial>)->Arg(2000)->Arg(20000);
BENCHMARK(BM_NodeIntervals<Exec::Parallel>)->Arg(2000)->Arg(20000);
BENCHMARK(BM_Bootstrap<Exec::Serial>)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bootstrap<Exec::Parallel>)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
