#pragma once

#include "cleanreg/compose.hpp"
#include "cleanreg/verify.hpp"

namespace cleanreg {

struct BuiltBound {
  std::string name;
  enum Kind { Exact, Upper } kind = Exact;
  uint64_t expected = 0;
  uint64_t measured = 0;
  bool pass() const { return kind == Exact ? measured == expected : measured <= expected; }
};

struct BuiltProgram {
  Program program;
  OracleFn oracle;
  InputDomain domain;
  std::optional<u128> readout_mod;
  std::vector<BuiltBound> bounds;
  std::vector<std::string> notes;

  bool bounds_pass() const {
    for (auto& b : bounds)
      if (!b.pass()) return false;
    return true;
  }
};

// One shared-input power gadget: delivers sum_i coeff_i * x_i into its input
// register across the four broadcast phases, loads powers 1..max_degree, and
// feeds each univariate output polynomial into an output slot.
struct PowerBlock {
  std::vector<std::pair<uint32_t, u128>> form;  // (input index, coefficient)
  uint32_t max_degree = 0;
  struct Out {
    SparsePoly poly;  // univariate (variable 0), degree <= max_degree
    uint32_t slot = 0;
  };
  std::vector<Out> outs;
};

// The Fig.-1 shape generalized to many gadgets run in parallel: exactly four
// broadcast accesses per used input. With indirect=true every input is
// mirrored into a dedicated register by unit-coefficient accesses and the
// form sums become basic updates, which keeps all accesses +-1 (what chained
// compositions need to stay on the fast path).
Program build_power_blocks(PrimeField field, uint32_t num_inputs,
                           const std::vector<PowerBlock>& blocks, uint32_t num_slots,
                           std::vector<u128> slot_constants, bool indirect,
                           const std::string& name);

// Sum-of-inputs program: one register, n unit accesses, one output.
Program build_sum_program(PrimeField field, uint32_t num_inputs,
                          const std::string& name);

// Cook-Mertz style evaluation shared by the single-polynomial builder and
// the matrix-product step: d+1 shift/accumulate rounds with lambda_k = k+1
// plus one restoring shift; non-homogeneous inputs get an always-1 auxiliary
// register updated by constant payloads.
Program build_interp_core(const std::vector<SparsePoly>& output_polys,
                          const std::string& name);

BuiltProgram build_univariate(const SparsePoly& p);
BuiltProgram build_univariate_set(const std::vector<SparsePoly>& ps);
BuiltProgram build_waring(const SparsePoly& p);
BuiltProgram build_general(const SparsePoly& p, bool lift);
// truth holds g(0..n); requires a prime > n.
BuiltProgram build_symmetric_bool(const std::vector<int>& truth, PrimeField field);
// p must exceed max(degree, unit term count); the representation is checked
// exhaustively on {0,1}^n for n <= 12.
BuiltProgram build_bool_rep(const IntPoly& p, PrimeField field);
BuiltProgram build_interpolation_eval(const SparsePoly& p);

}  // namespace cleanreg
