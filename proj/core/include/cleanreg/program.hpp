#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cleanreg/poly.hpp"

namespace cleanreg {

struct RegisterBank {
  std::string name;
  PrimeField field;
  uint32_t size = 0;
  bool operator==(const RegisterBank& o) const {
    return name == o.name && field == o.field && size == o.size;
  }
};

struct RegRef {
  uint16_t bank = 0;
  uint32_t index = 0;
  auto operator<=>(const RegRef&) const = default;
};

struct Delivery {
  RegRef reg;
  u128 coeff = 1;
  bool operator==(const Delivery&) const = default;
};

// R_i <- R_i + lambda * x_j, possibly delivered to several registers of one
// bank at once. One access counts as one recursive call regardless of
// fan-out (broadcast accounting).
struct InputAccess {
  uint32_t input = 0;
  std::vector<Delivery> deliveries;
  bool operator==(const InputAccess&) const = default;
};

// R_i <- R_i + p(other registers of the same bank). Payload variables are
// register indices within the target's bank; the target itself must not
// appear.
struct BasicUpdate {
  RegRef target;
  SparsePoly payload;
  bool operator==(const BasicUpdate&) const = default;
};

using Instruction = std::variant<BasicUpdate, InputAccess>;

struct OutputDecl {
  RegRef reg;
  uint32_t index = 0;
  bool operator==(const OutputDecl&) const = default;
};

struct ResourceProfile {
  std::vector<uint64_t> recursive_calls;  // per input index
  uint64_t basic_instructions = 0;
  std::vector<std::pair<std::string, uint64_t>> registers;  // per bank
  uint64_t payload_monomials = 0;

  uint64_t total_registers() const {
    uint64_t n = 0;
    for (auto& [name, k] : registers) n += k;
    return n;
  }
  uint64_t total_calls() const {
    uint64_t n = 0;
    for (auto c : recursive_calls) n += c;
    return n;
  }
  uint64_t max_calls_per_input() const {
    uint64_t n = 0;
    for (auto c : recursive_calls) n = std::max(n, c);
    return n;
  }
  uint64_t total_instructions() const { return basic_instructions + total_calls(); }
  bool operator==(const ResourceProfile&) const = default;
};

struct Program {
  std::string name = "program";
  std::vector<RegisterBank> banks;
  uint32_t num_inputs = 0;
  uint16_t input_bank = 0;
  std::vector<Instruction> instructions;
  std::vector<OutputDecl> outputs;
  // Builder's claim; always derived from the instruction list, never authored.
  std::optional<ResourceProfile> claimed_profile;

  const RegisterBank& bank_of(RegRef r) const { return banks[r.bank]; }
  const PrimeField& input_field() const { return banks[input_bank].field; }

  // Throws std::invalid_argument describing the first structural violation.
  void validate() const;

  bool operator==(const Program& o) const {
    return name == o.name && banks == o.banks && num_inputs == o.num_inputs &&
           input_bank == o.input_bank && instructions == o.instructions &&
           outputs == o.outputs;
  }
};

// Profile recomputed from the instruction list.
ResourceProfile resources(const Program& p);

// Reverse instruction order, negate payloads and delivery coefficients.
// For all init, x: running p then invert(p) restores the full state.
Program invert(const Program& p);

// True when no payload reads any declared output register. Programs with
// this property can have their outputs retargeted during composition.
bool outputs_write_only(const Program& p);

struct ProgramParseError : std::runtime_error {
  ProgramParseError(size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  size_t line;
};

std::string serialize(const Program& p);
Program parse_program(const std::string& text);

// `# meta <key> <value...>` comment lines carry harness metadata (oracle
// registration, domains, readout moduli) through program files.
std::vector<std::pair<std::string, std::string>> parse_meta(const std::string& text);
std::string render_meta(const std::vector<std::pair<std::string, std::string>>& meta);

}  // namespace cleanreg
