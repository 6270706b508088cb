#pragma once

#include <map>
#include <memory>

#include "cleanreg/program.hpp"

namespace cleanreg {

// Wires one outer input to one output of one inner instance. Every outer
// input must be bound; all instances read the composed program's inputs.
struct BoundInput {
  uint32_t instance = 0;
  uint32_t output = 0;
};

struct OutputWriteStats {
  uint64_t instructions = 0;  // basic updates targeting the output register
  uint64_t monomials = 0;
};

// Everything the composition planner needs to know about an inner program.
// Derivable either from a concrete Program or from a previous composition's
// counts, which lets deep stacks be accounted without materializing them.
struct InstanceMeta {
  uint32_t num_inputs = 0;
  u128 input_modulus = 2;
  std::vector<RegisterBank> banks;
  std::vector<RegRef> outputs;  // by output index
  std::vector<OutputWriteStats> output_writes;
  bool write_only = true;
  ResourceProfile profile;
};

InstanceMeta make_meta(const Program& p);

struct ComposeCounts {
  uint32_t num_inputs = 0;
  u128 input_modulus = 2;
  std::vector<RegisterBank> banks;  // composed register layout
  std::vector<RegRef> outputs;      // composed outputs (the outer's)
  std::vector<OutputWriteStats> output_writes;
  bool write_only = true;
  ResourceProfile profile;  // exact profile of the composed flat program
  uint64_t fast_inlinings = 0;
  uint64_t sandwich_inlinings = 0;  // counted per inner copy (2 per sandwich)
};

InstanceMeta meta_from_counts(const ComposeCounts& c);

// Exact resource accounting of compose() without emitting instructions.
ComposeCounts compose_counts(const Program& outer,
                             const std::vector<InstanceMeta>& metas,
                             const std::vector<BoundInput>& binding);

// Replaces the outer program's input accesses by inlined copies of the
// bound instances, per the composition construction:
//   - a run of consecutive accesses to one instance with all-(+1)
//     coefficients inlines the instance once, retargeting its outputs onto
//     the delivery registers (all -1: the inverted instance);
//   - any other coefficient pattern uses the sandwich: inline into fresh
//     registers, add scaled copies, inline the inverse, subtract the
//     restored base.
// Inner non-output registers borrow the outer's registers (restored by
// cleanness), so register usage follows the max-sharing rule.
Program compose(const Program& outer,
                const std::vector<std::shared_ptr<const Program>>& instances,
                const std::vector<BoundInput>& binding, const std::string& name);

}  // namespace cleanreg
