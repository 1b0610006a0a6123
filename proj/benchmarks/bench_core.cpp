#include <benchmark/benchmark.h>

#include <random>

#include "mtbounds/bounds.hpp"
#include "mtbounds/lambda_search.hpp"
#include "mtbounds/random_family.hpp"
#include "mtbounds/risk.hpp"

namespace {

mtb::FiniteFamily bench_family(std::size_t members, std::size_t atoms) {
  std::mt19937_64 rng(7);
  mtb::RandomFamilyOptions opt;
  opt.min_members = opt.max_members = members;
  opt.min_atoms = opt.max_atoms = atoms;
  opt.zero_probability = 0.0;
  return mtb::random_family(rng, opt);
}

void BM_ExactBayesProduct(benchmark::State& state) {
  const auto base = bench_family(4, 6);
  const auto prod = mtb::product_extend(base, static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mtb::exact_bayes_success(prod));
  state.counters["atoms"] = static_cast<double>(prod.atoms());
}
BENCHMARK(BM_ExactBayesProduct)->DenseRange(1, 5);

void BM_MinimaxBracket(benchmark::State& state) {
  const auto family = bench_family(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) benchmark::DoNotOptimize(mtb::minimax_success_bracket(family, 20000));
}
BENCHMARK(BM_MinimaxBracket)->Arg(2)->Arg(3)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_MonteCarloBayes(benchmark::State& state) {
  const auto family = mtb::make_gaussian_family({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, 1.0);
  const auto samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mtb::mc_bayes_success(family, mtb::UniformMixture{}, samples, 42));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_MonteCarloBayes)->Arg(10000)->Arg(100000)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_OptimizeLambda(benchmark::State& state) {
  const auto family = bench_family(6, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mtb::optimize_lambda(family, mtb::UniformMixture{}, {}));
  }
}
BENCHMARK(BM_OptimizeLambda)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
