#pragma once

#include <span>

#include "cleanreg/program.hpp"

namespace cleanreg {

struct RegisterState {
  std::vector<std::vector<u128>> banks;

  static RegisterState zeros(const Program& p);
  bool operator==(const RegisterState&) const = default;
};

struct ExecResult {
  RegisterState state;
  ResourceProfile profile;
};

// Applies the instructions in order: a basic update adds its payload's value
// at the current register values, an input access adds coeff * x_j to each
// delivery target. Inputs are reduced into the input bank's field.
ExecResult execute(const Program& p, RegisterState init, std::span<const u128> x);

// Same semantics, but skips the structural validation pass. For hot loops
// that run one already-validated program many times.
ExecResult execute_prevalidated(const Program& p, RegisterState init,
                                std::span<const u128> x);

// Per-output delta (final - init) in the output's bank field, optionally
// reduced by the harness readout modulus (field lifting boundary).
std::vector<u128> output_deltas(const Program& p, const RegisterState& init,
                                const RegisterState& final_state,
                                std::optional<u128> readout_mod = std::nullopt);

}  // namespace cleanreg
