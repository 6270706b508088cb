#pragma once

#include "cleanreg/builders.hpp"

namespace cleanreg {

struct Literal {
  uint32_t var = 0;
  bool negated = false;
  bool operator==(const Literal&) const = default;
};

// SAC orientation: fan-in-2 AND gates and unbounded fan-in OR gates over
// input literals and earlier gates.
struct Gate {
  enum Kind { AND, OR } kind = AND;
  struct Operand {
    bool is_gate = false;
    uint32_t gate = 0;
    Literal lit;
    bool operator==(const Operand&) const = default;
  };
  std::vector<Operand> operands;
  bool operator==(const Gate&) const = default;
};

struct Circuit {
  uint32_t num_inputs = 0;
  std::vector<Gate> gates;  // topologically ordered, refs point backwards
  std::vector<std::string> gate_names;
  uint32_t output_gate = 0;

  void validate() const;
  uint32_t size() const { return uint32_t(gates.size()); }
  uint32_t depth() const;
  std::vector<uint32_t> gate_depths() const;
  uint32_t max_or_fanin() const;

  int eval(std::span<const int> x) const;
  std::vector<int> eval_gates(std::span<const int> x) const;
  // Evaluation from an explicit literal vector (x_1..x_n, !x_1..!x_n).
  int eval_literals(std::span<const u128> lits) const;
};

Circuit parse_netlist(const std::string& text);
std::string render_netlist(const Circuit& c);

// A value crossing a super-layer boundary: a gate's output or a literal.
struct LeafValue {
  bool is_gate = false;
  uint32_t gate = 0;
  Literal lit;
  std::pair<uint64_t, uint64_t> key() const {
    return is_gate ? std::make_pair(uint64_t(1), uint64_t(gate))
                   : std::make_pair(uint64_t(0), uint64_t(lit.var) * 2 + lit.negated);
  }
  bool operator==(const LeafValue&) const = default;
};

// Depth <= d circuit fragment with deduplicated leaves.
struct Fragment {
  struct Node {
    enum Kind { LEAF, AND, OR } kind = LEAF;
    uint32_t leaf = 0;
    std::vector<Node> children;
  };
  Node root;
  std::vector<LeafValue> leaves;

  uint32_t depth() const;
  uint32_t max_or_fanin() const;
  int eval(std::span<const int> leaf_bits) const;
};

struct SuperGate {
  bool repeater = false;
  LeafValue value;  // what the block computes
  Fragment frag;
};

// The circuit rewritten as ceil(depth/d) super-layers where every block
// reads only the previous boundary (repeater blocks carry skipped values).
struct BlockCircuit {
  uint32_t num_inputs = 0;
  uint32_t block_depth = 0;
  std::vector<std::vector<SuperGate>> layers;

  uint32_t num_layers() const { return uint32_t(layers.size()); }
  // boundary bit vectors for one input, layer by layer
  std::vector<std::vector<int>> boundary_values(std::span<const int> x) const;
  int eval_flat(std::span<const int> x) const;
};

BlockCircuit merge_layers(const Circuit& c, uint32_t block_depth);

// Integer polynomial over the fragment's leaf slots that represents the
// fragment on {0,1} leaf values (OR -> sum, AND -> product).
IntPoly block_to_poly(const Fragment& frag);

struct LayerBuild {
  Program program;              // fused parallel block programs
  std::vector<IntPoly> polys;   // per block, over the layer input space
  uint32_t input_width = 0;     // 2n literals for layer 1, previous boundary after
};

struct CompiledCircuit {
  BlockCircuit plan;
  u128 prime = 0;
  std::vector<LayerBuild> layers;
  // Exact profile of the full composed program (composition algebra; the
  // flat program is only materialized when it fits the budget).
  ResourceProfile stack_profile;
  std::optional<Program> flat;
  uint64_t call_bound = 0;  // 64^{num layers}
  std::vector<BuiltBound> bounds;
};

CompiledCircuit compile_circuit(const Circuit& c, uint32_t block_depth,
                                std::optional<u128> prime_override = std::nullopt,
                                uint64_t materialize_budget = 200000);

struct CircuitCheckOptions {
  uint64_t seed = 0;
  uint64_t taus_per_point = 1;   // random initial states per swept input
  uint64_t extra_trials = 8;     // extra random boolean inputs per layer
};

struct CircuitCheckReport {
  bool pass = true;
  uint64_t executions = 0;
  std::string detail;
};

// Layer-by-layer verification: each layer program is run on every boundary
// vector reachable from {0,1}^n (cleanness plus oracle equality), which
// pins the composed program's value on all 2^n inputs. When the flat
// program was materialized it is verified directly as well.
CircuitCheckReport verify_compiled(const Circuit& c, const CompiledCircuit& cc,
                                   const CircuitCheckOptions& opts = {});

}  // namespace cleanreg
