#include <benchmark/benchmark.h>

#include "exmono/curve_forge.hpp"

using namespace exmono;

namespace {

void BM_CountPoints(benchmark::State& state) {
  const i64 p = state.range(0);
  const WeierstrassEquation e(1, 0, 0, 7, 11);
  for (auto _ : state) benchmark::DoNotOptimize(count_points_fp(e, p));
}
BENCHMARK(BM_CountPoints)->Arg(29)->Arg(127)->Arg(1009)->Arg(10007);

void BM_FindTraceCurve(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(find_trace_curve(state.range(0), 2, seed++));
}
BENCHMARK(BM_FindTraceCurve)->Arg(29)->Arg(127);

void BM_ForgeSeed(benchmark::State& state) {
  const RootSystem s = build_root_system(CartanType::E8);
  for (auto _ : state) benchmark::DoNotOptimize(forge_seed(s, 127).accepted());
}
BENCHMARK(BM_ForgeSeed)->Unit(benchmark::kMillisecond);

}  // namespace
