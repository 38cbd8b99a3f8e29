#include <benchmark/benchmark.h>

#include <vector>

#include "rolr/baselines.hpp"
#include "rolr/learner.hpp"
#include "rolr/problems.hpp"

namespace {

rolr::SyntheticProblem bench_problem(std::size_t n_terms) {
  rolr::ProblemParams pp;
  pp.n_terms = n_terms;
  pp.noise = {0.5, 0.1, 2.5};
  return rolr::make_problem(pp);
}

// Whole-run cost: quadratic in T for the dual form, linear for the feature form.
void BM_DualRun(benchmark::State& state) {
  const auto p = bench_problem(256);
  const auto stream = p.sample(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    rolr::DualLearner d(p.kernel(), rolr::WindowingFunction::welsch(), 0.01, 1.0);
    for (const auto& s : stream) d.step(s);
    benchmark::DoNotOptimize(d.coeffs().data());
  }
  state.SetComplexityN(state.range(0));
}

void BM_FeatureRun(benchmark::State& state) {
  const auto p = bench_problem(256);
  const auto stream = p.sample(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    rolr::FeatureLearner f(p.kernel(), rolr::WindowingFunction::welsch(), 0.01, 1.0);
    for (const auto& s : stream) f.step(s);
    benchmark::DoNotOptimize(f.coeffs().data());
  }
  state.SetComplexityN(state.range(0));
}

void BM_BasisEval(benchmark::State& state) {
  const auto k = rolr::SpectralKernel::power_law(static_cast<std::size_t>(state.range(0)), 2.0);
  std::vector<double> out(k.n_terms());
  double x = 0.123;
  for (auto _ : state) {
    k.basis(x, out);
    x = x < 0.9 ? x + 0.001 : 0.1;
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_BatchIteration(benchmark::State& state) {
  const auto p = bench_problem(64);
  const auto data = p.sample(static_cast<std::size_t>(state.range(0)), 2);
  rolr::BatchGDOptions opt;
  opt.n_iters = 10;
  opt.eta1 = 0.5;
  for (auto _ : state) {
    auto st = rolr::batch_gd_run(data, rolr::WindowingFunction::cauchy(), p.kernel(), opt);
    benchmark::DoNotOptimize(st.coeffs.data());
  }
}

}  // namespace

BENCHMARK(BM_DualRun)->RangeMultiplier(2)->Range(256, 2048)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_FeatureRun)->RangeMultiplier(2)->Range(256, 2048)->Complexity(benchmark::oN);
BENCHMARK(BM_BasisEval)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_BatchIteration)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
