#pragma once

#include <cstdint>
#include <vector>

#include "cleanreg/circuits.hpp"
#include "cleanreg/poly.hpp"
#include "cleanreg/verify.hpp"

namespace testutil {

using cleanreg::u128;

// Independent oracles, kept deliberately dumb.

inline u128 pow_mod_loop(u128 base, uint64_t exp, u128 mod) {
  u128 r = 1 % mod;
  for (uint64_t i = 0; i < exp; ++i) r = (r * (base % mod)) % mod;  // mod < 2^60 here
  return r;
}

inline bool trial_division_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<bool> sieve(uint64_t limit) {
  std::vector<bool> is(limit + 1, true);
  is[0] = false;
  if (limit >= 1) is[1] = false;
  for (uint64_t i = 2; i * i <= limit; ++i)
    if (is[i])
      for (uint64_t j = i * i; j <= limit; j += i) is[j] = false;
  return is;
}

// Random sparse polynomial with num_vars variables, each term of total
// degree <= max_deg (homogeneous of exactly degree deg when homogeneous).
inline cleanreg::SparsePoly random_poly(cleanreg::Rng& rng, cleanreg::PrimeField field,
                                        uint32_t num_vars, uint32_t deg, uint32_t terms,
                                        bool homogeneous) {
  std::vector<cleanreg::SparsePoly::Term> ts;
  for (uint32_t t = 0; t < terms; ++t) {
    cleanreg::Monomial m;
    uint32_t total = homogeneous ? deg : uint32_t(rng.below(deg + 1));
    for (uint32_t i = 0; i < total; ++i)
      m = m * cleanreg::Monomial::var(uint32_t(rng.below(num_vars)));
    u128 c = rng.below(field.modulus());
    ts.push_back({c, m});
  }
  return cleanreg::SparsePoly(field, num_vars, std::move(ts));
}

// Random SAC circuit: AND fan-in 2, OR fan-in 1..max_or_fanin, gate depths
// capped at max_depth; the output is a deepest gate.
inline cleanreg::Circuit random_circuit(cleanreg::Rng& rng, uint32_t n, uint32_t size,
                                        uint32_t max_depth, uint32_t max_or_fanin = 4) {
  using cleanreg::Circuit;
  using cleanreg::Gate;
  Circuit c;
  c.num_inputs = n;
  std::vector<uint32_t> depth;
  auto literal = [&] {
    Gate::Operand op;
    op.is_gate = false;
    op.lit = {uint32_t(rng.below(n)), rng.below(2) == 1};
    return op;
  };
  for (uint32_t g = 0; g < size; ++g) {
    Gate gate;
    gate.kind = rng.below(2) ? Gate::OR : Gate::AND;
    uint32_t fanin = gate.kind == Gate::AND ? 2 : 1 + uint32_t(rng.below(max_or_fanin));
    uint32_t d = 0;
    for (uint32_t k = 0; k < fanin; ++k) {
      Gate::Operand op = literal();
      if (g > 0 && rng.below(10) < 6) {
        // bias toward recent gates so depth actually grows
        uint32_t cand = g - 1 - uint32_t(rng.below(std::min<uint32_t>(g, 5)));
        if (depth[cand] < max_depth) {
          op.is_gate = true;
          op.gate = cand;
        }
      }
      if (op.is_gate) d = std::max(d, depth[op.gate]);
      gate.operands.push_back(op);
    }
    depth.push_back(d + 1);
    c.gates.push_back(std::move(gate));
    c.gate_names.push_back("g" + std::to_string(g + 1));
  }
  uint32_t best = 0;
  for (uint32_t g = 0; g < c.gates.size(); ++g)
    if (depth[g] > depth[best]) best = g;
  c.output_gate = best;
  c.validate();
  return c;
}

}  // namespace testutil
