#include <benchmark/benchmark.h>

#include "exmono/adjoint_modl.hpp"
#include "exmono/principal_sl2.hpp"

using namespace exmono;

namespace {

CartanType type_arg(const benchmark::State& state) { return static_cast<CartanType>(state.range(0)); }

void BM_StructureConstants(benchmark::State& state) {
  const RootSystem s = build_root_system(type_arg(state));
  for (auto _ : state) {
    ChevalleyAlgebra g(s);
    benchmark::DoNotOptimize(g.dim());
  }
}
BENCHMARK(BM_StructureConstants)->DenseRange(static_cast<int>(CartanType::G2), static_cast<int>(CartanType::E8))
    ->Unit(benchmark::kMillisecond);

void BM_Jacobi(benchmark::State& state) {
  const ChevalleyAlgebra g(build_root_system(type_arg(state)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_jacobi(g).ok());
}
BENCHMARK(BM_Jacobi)->DenseRange(static_cast<int>(CartanType::G2), static_cast<int>(CartanType::E8))
    ->Unit(benchmark::kMillisecond);

void BM_AdjointDecomposition(benchmark::State& state) {
  const ChevalleyAlgebra g(build_root_system(type_arg(state)));
  const PrincipalTriple t = build_principal_triple(g);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_adjoint(g, t).exponents());
}
BENCHMARK(BM_AdjointDecomposition)->Arg(static_cast<int>(CartanType::E8))->Unit(benchmark::kMillisecond);

// exp(ad X_theta) with a random perturbation mod ell^2, raised to the ell-th power.
void BM_LiftPower(benchmark::State& state) {
  const CartanType t = type_arg(state);
  const ChevalleyAlgebra g(build_root_system(t));
  const i64 ell = smallest_admissible_prime(g.system());
  const AdElement x = basis_element(g, g.highest_root_basis());
  std::size_t trial = 0;
  for (auto _ : state) {
    const GroupElementModLn u = random_lift(g, x, ell, 1, 0, trial++);
    benchmark::DoNotOptimize(power_mod(u.matrix, static_cast<u64>(ell), u.modulus()));
  }
}
BENCHMARK(BM_LiftPower)->Arg(static_cast<int>(CartanType::G2))->Arg(static_cast<int>(CartanType::F4))
    ->Unit(benchmark::kMillisecond);

void BM_Reg(benchmark::State& state) {
  const ChevalleyAlgebra g(build_root_system(type_arg(state)));
  const i64 ell = smallest_admissible_prime(g.system());
  for (auto _ : state) benchmark::DoNotOptimize(verify_reg_surjectivity(g, ell).ok());
}
BENCHMARK(BM_Reg)->Arg(static_cast<int>(CartanType::E8))->Unit(benchmark::kMillisecond);

}  // namespace
