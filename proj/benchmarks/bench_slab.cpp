#include <benchmark/benchmark.h>

#include "stcut/assembly.hpp"
#include "stcut/solver.hpp"

namespace {

using namespace stcut;

std::shared_ptr<const SpaceTimeDiscretization> make(const ProblemSpec& p, std::size_t n0, int q) {
  OverlapSpec o;
  o.velocity = 0.6;
  Discretization d;
  d.n_background = n0;
  d.n_overlap = n0 / 4;
  d.n_slabs = 16;
  d.time_degree = q;
  return build_discretization(make_layout(p, o, d), d);
}

void AssembleSlab(benchmark::State& state) {
  const ProblemSpec p = manufactured_problem();
  const auto st = make(p, static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1)));
  const FormOptions opt = FormOptions::from(st->params);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_slab(*st, 0, p, nullptr, opt));
}
BENCHMARK(AssembleSlab)->ArgsProduct({{128, 512, 2048}, {0, 1}})->Unit(benchmark::kMicrosecond);

void SolveSlab(benchmark::State& state) {
  const ProblemSpec p = manufactured_problem();
  const auto st = make(p, static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1)));
  const SlabSystem sys = assemble_slab(*st, 0, p, nullptr, FormOptions::from(st->params));
  for (auto _ : state) benchmark::DoNotOptimize(solve_slab(sys));
}
BENCHMARK(SolveSlab)->ArgsProduct({{128, 512, 2048}, {0, 1}})->Unit(benchmark::kMicrosecond);

void March(benchmark::State& state) {
  const ProblemSpec p = manufactured_problem();
  const auto st = make(p, static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1)));
  const FormOptions opt = FormOptions::from(st->params);
  for (auto _ : state) benchmark::DoNotOptimize(march(p, st, opt));
}
BENCHMARK(March)->ArgsProduct({{128, 512}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
