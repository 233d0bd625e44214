#include <benchmark/benchmark.h>

#include <random>

#include "j4reg/dataset.hpp"
#include "j4reg/equivalence.hpp"
#include "j4reg/linmap.hpp"
#include "j4reg/regressability.hpp"
#include "j4reg/svc.hpp"

namespace {

j4reg::SvcProblem make_problem(Eigen::Index n_points, Eigen::Index dim) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::bernoulli_distribution coin;
  j4reg::SvcProblem p;
  p.points.resize(n_points, dim);
  p.labels.resize(n_points);
  for (Eigen::Index i = 0; i < n_points; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) p.points(i, j) = g(rng);
    p.labels(i) = coin(rng) ? 1.0 : -1.0;
  }
  p.c = 1.0;
  return p;
}

void bm_solve_dual(benchmark::State& state) {
  const auto p = make_problem(state.range(0), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(j4reg::solve_dual(p, 1e-8, 100000));
  }
}
BENCHMARK(bm_solve_dual)->Arg(50)->Arg(200)->Arg(800);

void bm_transform(benchmark::State& state) {
  auto ds = j4reg::synth_generate(j4reg::SynthFunction::kSin, state.range(0), -3.0, 3.0, 1.0, 3);
  auto [centered, ref] = j4reg::center(ds);
  for (auto _ : state) {
    benchmark::DoNotOptimize(j4reg::to_classification(centered, 1e-9));
  }
}
BENCHMARK(bm_transform)->Arg(1000)->Arg(10000);

void bm_regressability(benchmark::State& state) {
  const auto ds =
      j4reg::synth_generate(j4reg::SynthFunction::kSin, state.range(0), -3.0, 3.0, 1.0, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(j4reg::regressability(ds));
  }
}
BENCHMARK(bm_regressability)->Arg(200)->Arg(500)->Arg(1000);

void bm_j4_epoch(benchmark::State& state) {
  const auto ds =
      j4reg::synth_generate(j4reg::SynthFunction::kSquare, state.range(0), -2.0, 3.0, 1.0, 3);
  auto [centered, ref] = j4reg::center(ds);
  const j4reg::MlpNetwork net = j4reg::MlpNetwork::random_init({1, 5, 10}, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        j4reg::j4_gradient(net, centered.features, centered.targets, 1e-8));
  }
}
BENCHMARK(bm_j4_epoch)->Arg(300)->Arg(1200);

}  // namespace

BENCHMARK_MAIN();
