#include <benchmark/benchmark.h>

#include <random>

#include "exmono/selmer_ledger.hpp"

using namespace exmono;

namespace {

void BM_RandomAudit(benchmark::State& state) {
  const i64 p = state.range(0);
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    CampaignReport report;
    audit_instance(random_instance(p, 10, rng), report);
    benchmark::DoNotOptimize(report.instances);
  }
}
BENCHMARK(BM_RandomAudit)->Arg(2)->Arg(3)->Arg(5);

void BM_ForcingReplayVsBruteForce(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::vector<SelmerInstance> pool;
  while (pool.size() < 32) {
    SelmerInstance inst = random_instance(3, 10, rng);
    try {
      simulate_forcing(inst);
      pool.push_back(std::move(inst));
    } catch (const std::invalid_argument&) {
    }
  }
  std::size_t i = 0;
  const bool brute = state.range(0) != 0;
  for (auto _ : state) {
    const SelmerInstance& inst = pool[i++ % pool.size()];
    benchmark::DoNotOptimize(brute ? brute_force_forcing(inst).forced : simulate_forcing(inst).forced);
  }
}
BENCHMARK(BM_ForcingReplayVsBruteForce)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
