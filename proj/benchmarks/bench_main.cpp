#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "trajlens/corpus.hpp"
#include "trajlens/dp_values.hpp"
#include "trajlens/matrix_game.hpp"
#include "trajlens/stochastic_game.hpp"
#include "trajlens/trajectory.hpp"

namespace {

using namespace trajlens;

void BM_FiniteValuesSpine(benchmark::State& state) {
  CorpusEntry e = ls_nonregular(50);
  const DpModel& m = e.dp();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ValueTable t = finite_values(m, n);
    benchmark::DoNotOptimize(t.total(n, 0));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_FiniteValuesSpine)->Arg(50)->Arg(100)->Arg(200);

void BM_ShapleyPennies(benchmark::State& state) {
  CorpusEntry e = big_match();
  const ZsgModel& g = e.zsg();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ZsgValueTable t = shapley_finite(g, n);
    benchmark::DoNotOptimize(t.total(n, 0));
  }
}
BENCHMARK(BM_ShapleyPennies)->Arg(100)->Arg(200);

void BM_MatrixGame4x4(benchmark::State& state) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::vector<MatrixGame> games;
  for (int i = 0; i < 64; ++i) {
    MatrixGame g;
    g.a.assign(4, std::vector<double>(4));
    for (auto& row : g.a)
      for (double& v : row) v = entry(rng);
    games.push_back(std::move(g));
  }
  size_t i = 0;
  for (auto _ : state) {
    GameSolution s = solve_matrix_game(games[i++ % games.size()]);
    benchmark::DoNotOptimize(s.value);
  }
}
BENCHMARK(BM_MatrixGame4x4);

void BM_EnumerateNearOptimal(benchmark::State& state) {
  CorpusEntry e = ls_nonregular(50);
  const DpModel& m = e.dp();
  for (auto _ : state) {
    EnumerationResult r = enumerate_eps_optimal_plays(m, 0, 100, 0.05, 1000);
    benchmark::DoNotOptimize(r.plays.size());
  }
}
BENCHMARK(BM_EnumerateNearOptimal);

void BM_DiscountedFixedPoint(benchmark::State& state) {
  CorpusEntry e = ls_nonregular(50);
  const DpModel& m = e.dp();
  for (auto _ : state) {
    DiscountedResult r = discounted_value(m, 0.01);
    benchmark::DoNotOptimize(r.values[0]);
  }
}
BENCHMARK(BM_DiscountedFixedPoint);

}  // namespace

BENCHMARK_MAIN();
