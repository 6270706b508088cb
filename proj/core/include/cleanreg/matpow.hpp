#pragma once

#include "cleanreg/builders.hpp"

namespace cleanreg {

// n x n matrices over F_p, row-major entry vectors.
std::vector<u128> mat_mul_mod(std::span<const u128> a, std::span<const u128> b,
                              uint32_t n, PrimeField field);
// Repeated-squaring oracle for M^d.
std::vector<u128> mat_pow_mod(std::span<const u128> m, uint32_t n, uint32_t d,
                              PrimeField field);

inline constexpr u128 kMatpowTermBudget = 4096;  // paths per entry polynomial

// Entry polynomials of M^d: entry (i,j) is homogeneous of degree d with
// n^{d-1} path terms over the n^2 entry variables m_{r,c} -> var r*n+c.
std::vector<IntPoly> matpow_poly(uint32_t n, uint32_t d,
                                 u128 term_budget = kMatpowTermBudget);

// Parallel Waring gadgets for all n^2 entry polynomials, sharing the four
// broadcast phases: exactly 4 recursive calls to every entry. indirect=true
// routes forms through mirror registers so every access is unit-coefficient
// (required when the program is chained under composition).
Program build_matpow_core(uint32_t n, PrimeField field, uint32_t d, bool indirect,
                          const std::string& name,
                          u128 term_budget = kMatpowTermBudget);

BuiltProgram build_matpow_small(uint32_t n, u128 p, uint32_t d);

struct LiftedMatpow {
  BuiltProgram built;
  u128 q = 0;
};
LiftedMatpow build_matpow_lifted(uint32_t n, u128 p, uint32_t d);

struct BoostPlan {
  uint32_t delta = 2;
  std::vector<uint32_t> digits;  // d = sum digits[i] * delta^i, digits[i] < delta
  uint32_t floor_log() const { return uint32_t(digits.size()) - 1; }
};
BoostPlan make_boost_plan(uint32_t d, uint32_t delta);

struct BoostedMatpow {
  BuiltProgram built;
  BoostPlan plan;
  u128 q = 0;
  uint64_t measured_calls = 0;   // max recursive calls per matrix entry
  double lemma_bound = 0;        // (ceil(log_delta d)+2) * t/(t-1) * t^ceil(log_delta d)
};
BoostedMatpow build_matpow_boosted(uint32_t n, u128 p, uint32_t d, uint32_t delta);

}  // namespace cleanreg
