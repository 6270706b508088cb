#include <benchmark/benchmark.h>

#include "cleanreg/builders.hpp"
#include "cleanreg/matpow.hpp"

using namespace cleanreg;

namespace {

void BM_mulmod_small(benchmark::State& state) {
  PrimeField f(2147483647);  // 2^31 - 1
  u128 a = 1234567, b = 7654321;
  for (auto _ : state) {
    a = f.mul(a, b);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_mulmod_small);

void BM_mulmod_wide(benchmark::State& state) {
  PrimeField f(next_prime((u128(1) << 70) + 1));
  u128 a = (u128(1) << 69) + 12345, b = (u128(1) << 68) + 99;
  for (auto _ : state) {
    a = f.mul(a, b);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_mulmod_wide);

void BM_execute_univariate(benchmark::State& state) {
  PrimeField f13(13);
  std::vector<SparsePoly::Term> ts;
  for (uint32_t i = 0; i <= 16; ++i) ts.push_back({(i % 12) + 1, Monomial::var(0, i)});
  BuiltProgram built = build_univariate(SparsePoly(f13, 1, ts));
  RegisterState init = RegisterState::zeros(built.program);
  std::vector<u128> x{5};
  for (auto _ : state) {
    auto res = execute_prevalidated(built.program, init, x);
    benchmark::DoNotOptimize(res.state);
  }
}
BENCHMARK(BM_execute_univariate);

void BM_build_waring(benchmark::State& state) {
  PrimeField f11(11);
  SparsePoly p = parse_poly("x1*x2*x3 + 2*x2*x3*x4 + x1^3 + 5*x4^3", f11, 4);
  for (auto _ : state) {
    BuiltProgram built = build_waring(p);
    benchmark::DoNotOptimize(built.program.instructions.size());
  }
}
BENCHMARK(BM_build_waring);

void BM_execute_matpow_lifted(benchmark::State& state) {
  LiftedMatpow lifted = build_matpow_lifted(2, 5, 8);
  RegisterState init = RegisterState::zeros(lifted.built.program);
  std::vector<u128> m{1, 2, 3, 4};
  for (auto _ : state) {
    auto res = execute_prevalidated(lifted.built.program, init, m);
    benchmark::DoNotOptimize(res.state);
  }
}
BENCHMARK(BM_execute_matpow_lifted);

void BM_serialize_parse(benchmark::State& state) {
  LiftedMatpow lifted = build_matpow_lifted(2, 5, 6);
  for (auto _ : state) {
    Program p = parse_program(serialize(lifted.built.program));
    benchmark::DoNotOptimize(p.instructions.size());
  }
}
BENCHMARK(BM_serialize_parse);

}  // namespace

BENCHMARK_MAIN();
