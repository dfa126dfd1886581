// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "metricat/colimit.hpp"
#include "metricat/corpus.hpp"
#include "metricat/fraisse.hpp"
#include "metricat/hom_search.hpp"
#include "metricat/injectivity.hpp"
#include "metricat/laws.hpp"
#include "metricat/reflect.hpp"
#include "metricat/universal.hpp"

using namespace metricat;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

Semimetric random_semimetric(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Semimetric s(n);
  const auto grid = default_grid();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.below(3) == 0) s.set(i, j, rng.pick(grid));
  return s;
}

void BM_Reflect(benchmark::State& state) {
  auto s = random_semimetric(static_cast<std::size_t>(state.range(1)), 42);
  const Exec exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(reflect(s, exec));
  label(state);
}
BENCHMARK(BM_Reflect)->ArgsProduct({{0, 1}, {32, 96}});

void BM_HomSetAll(benchmark::State& state) {
  Rng rng(7);
  Space a = random_space(rng, 5, {1, 2, 3});
  Space k = random_space(rng, 6, {1, 2, 3});
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    HomSearch search(a, k);
    benchmark::DoNotOptimize(search.all(exec));
  }
  label(state);
}
BENCHMARK(BM_HomSetAll)->Arg(0)->Arg(1);

void BM_VerifyUniversal(benchmark::State& state) {
  SpanCorpusConfig cfg;
  cfg.count = 4;
  cfg.max_points = 3;
  auto corpus = span_corpus(cfg);
  auto targets = enumerate_spaces(DistanceGrid::make({1, 2, ExtRat::inf()}, 3));
  const Exec exec = exec_of(state);
  for (auto _ : state)
    for (const auto& inst : corpus) {
      auto r = eps_pushout(inst.f, inst.g, inst.eps);
      benchmark::DoNotOptimize(verify_universal(r, inst.f, inst.g, targets, {}, exec));
    }
  label(state);
}
BENCHMARK(BM_VerifyUniversal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_InjClass(benchmark::State& state) {
  auto candidates = enumerate_spaces(DistanceGrid::make({1, 2}, 3));
  auto one = share(point_space());
  std::vector<MetMap> maps;
  for (const auto& s : candidates)
    if (!s->empty()) maps.emplace_back(s, one, std::vector<std::size_t>(s->size(), 0));
  const Exec exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(inj_class(maps, 1, candidates, {}, exec));
  label(state);
}
BENCHMARK(BM_InjClass)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LawHarness(benchmark::State& state) {
  LawConfig cfg;
  cfg.instances = 40;
  cfg.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(law_harness(cfg));
  label(state);
}
BENCHMARK(BM_LawHarness)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
