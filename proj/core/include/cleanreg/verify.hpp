#pragma once

#include <functional>
#include <optional>
#include <random>

#include "cleanreg/execute.hpp"

namespace cleanreg {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic across platforms: mt19937_64 plus explicit rejection
// sampling (uniform_int_distribution is not portable).
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(uint64_t seed) : eng(seed) {}

  u128 below(u128 bound) {
    if (bound <= 1) return 0;
    if (bound <= u128(UINT64_MAX)) {
      uint64_t b = uint64_t(bound);
      uint64_t limit = UINT64_MAX - UINT64_MAX % b;
      for (;;) {
        uint64_t v = eng();
        if (v < limit) return v % b;
      }
    }
    int bits = bit_length(bound - 1);
    for (;;) {
      u128 v = (u128(eng()) << 64) | eng();
      v &= (u128(1) << bits) - 1;
      if (v < bound) return v;
    }
  }
};

// How verification samples program inputs. bound == 0 means the whole input
// field; pair_complement treats inputs as literal pairs (x, 1-x) and keeps
// the second half consistent with the first.
struct InputDomain {
  u128 bound = 0;
  bool pair_complement = false;
};

using OracleFn = std::function<std::vector<u128>(std::span<const u128>)>;

struct VerifyOptions {
  uint64_t trials = 200;
  uint64_t seed = 0;
  InputDomain domain;
  std::optional<u128> readout_mod;
  // When the full (init, input) space has at most this many points the
  // trial sampling is replaced by exhaustive enumeration.
  u128 exhaustive_limit = u128(1) << 16;
  int jobs = 1;
  // Optional explicit input sweep: every listed input vector is run with
  // taus_per_input random initial states (plus the sampled trials).
  const std::vector<std::vector<u128>>* input_sweep = nullptr;
  uint64_t taus_per_input = 1;
};

struct Counterexample {
  RegisterState init;
  std::vector<u128> input;
  std::string what;
};

struct CleanReport {
  bool pass = true;
  uint64_t trials_run = 0;
  bool exhaustive = false;
  std::optional<Counterexample> counterexample;
};

// Samples (init, x), runs the program, and checks that every non-output
// register is restored and each output delta equals the oracle value.
CleanReport verify_clean(const Program& p, const OracleFn& oracle,
                         const VerifyOptions& opts = {});

RegisterState random_state(const Program& p, Rng& rng);
std::vector<u128> random_input(const Program& p, const InputDomain& domain, Rng& rng);

}  // namespace cleanreg
