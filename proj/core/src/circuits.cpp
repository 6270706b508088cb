#include "cleanreg/circuits.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cleanreg {

void Circuit::validate() const {
  if (num_inputs == 0) throw std::invalid_argument("circuit has no inputs");
  if (gates.empty()) throw std::invalid_argument("circuit has no gates");
  if (output_gate >= gates.size()) throw std::invalid_argument("output gate undefined");
  for (size_t g = 0; g < gates.size(); ++g) {
    const Gate& gate = gates[g];
    if (gate.kind == Gate::AND && gate.operands.size() != 2)
      throw std::invalid_argument("AND gate must have fan-in exactly 2");
    if (gate.kind == Gate::OR && gate.operands.empty())
      throw std::invalid_argument("OR gate must have fan-in >= 1");
    for (auto& op : gate.operands) {
      if (op.is_gate) {
        if (op.gate >= g) throw std::invalid_argument("gate operand not topologically earlier");
      } else if (op.lit.var >= num_inputs) {
        throw std::invalid_argument("literal out of range");
      }
    }
  }
}

std::vector<uint32_t> Circuit::gate_depths() const {
  std::vector<uint32_t> d(gates.size(), 0);
  for (size_t g = 0; g < gates.size(); ++g) {
    uint32_t m = 0;
    for (auto& op : gates[g].operands)
      if (op.is_gate) m = std::max(m, d[op.gate]);
    d[g] = m + 1;
  }
  return d;
}

uint32_t Circuit::depth() const { return gate_depths()[output_gate]; }

uint32_t Circuit::max_or_fanin() const {
  uint32_t f = 0;
  for (auto& g : gates)
    if (g.kind == Gate::OR) f = std::max<uint32_t>(f, uint32_t(g.operands.size()));
  return f;
}

std::vector<int> Circuit::eval_gates(std::span<const int> x) const {
  if (x.size() != num_inputs) throw std::invalid_argument("circuit arity mismatch");
  std::vector<int> v(gates.size(), 0);
  for (size_t g = 0; g < gates.size(); ++g) {
    auto bit = [&](const Gate::Operand& op) -> int {
      if (op.is_gate) return v[op.gate];
      int b = x[op.lit.var];
      return op.lit.negated ? 1 - b : b;
    };
    if (gates[g].kind == Gate::AND) {
      v[g] = bit(gates[g].operands[0]) & bit(gates[g].operands[1]);
    } else {
      int r = 0;
      for (auto& op : gates[g].operands) r |= bit(op);
      v[g] = r;
    }
  }
  return v;
}

int Circuit::eval(std::span<const int> x) const { return eval_gates(x)[output_gate]; }

int Circuit::eval_literals(std::span<const u128> lits) const {
  if (lits.size() != size_t(num_inputs) * 2)
    throw std::invalid_argument("literal vector arity mismatch");
  std::vector<int> v(gates.size(), 0);
  for (size_t g = 0; g < gates.size(); ++g) {
    auto bit = [&](const Gate::Operand& op) -> int {
      if (op.is_gate) return v[op.gate];
      u128 b = lits[(op.lit.negated ? num_inputs : 0) + op.lit.var];
      return b != 0 ? 1 : 0;
    };
    if (gates[g].kind == Gate::AND) {
      v[g] = bit(gates[g].operands[0]) & bit(gates[g].operands[1]);
    } else {
      int r = 0;
      for (auto& op : gates[g].operands) r |= bit(op);
      v[g] = r;
    }
  }
  return v[output_gate];
}

// ---------------------------------------------------------------- netlist

namespace {

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

}  // namespace

Circuit parse_netlist(const std::string& text) {
  Circuit c;
  std::map<std::string, uint32_t> ids;
  bool saw_out = false;
  std::istringstream is(text);
  std::string raw;
  size_t no = 0;
  uint32_t max_var = 0;

  auto parse_operand = [&](const std::string& tok, size_t line) -> Gate::Operand {
    Gate::Operand op;
    std::string t = tok;
    bool neg = false;
    if (!t.empty() && t[0] == '!') {
      neg = true;
      t = t.substr(1);
    }
    if (t.size() >= 2 && t[0] == 'x' &&
        t.find_first_not_of("0123456789", 1) == std::string::npos) {
      unsigned long v = std::stoul(t.substr(1));
      if (v == 0) throw ProgramParseError(line, "literal indices are 1-based");
      op.is_gate = false;
      op.lit = {uint32_t(v - 1), neg};
      max_var = std::max(max_var, uint32_t(v));
      return op;
    }
    if (neg) throw ProgramParseError(line, "'!' applies to input literals only");
    auto it = ids.find(t);
    if (it == ids.end())
      throw ProgramParseError(line, "undefined operand '" + t + "' (cycles and forward references are not allowed)");
    op.is_gate = true;
    op.gate = it->second;
    return op;
  };

  while (std::getline(is, raw)) {
    ++no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    // allow ';' as a line separator so netlists can travel on one line
    std::vector<std::string> stmts;
    {
      std::string cur;
      std::istringstream ss(raw);
      while (std::getline(ss, cur, ';')) stmts.push_back(cur);
    }
    for (auto& stmt : stmts) {
      auto w = split_tokens(stmt);
      if (w.empty()) continue;
      if (w[0] == "out") {
        if (w.size() != 2) throw ProgramParseError(no, "expected 'out <gate>'");
        auto it = ids.find(w[1]);
        if (it == ids.end()) throw ProgramParseError(no, "undefined output gate '" + w[1] + "'");
        c.output_gate = it->second;
        saw_out = true;
        continue;
      }
      if (w.size() < 3 || w[1] != "=")
        throw ProgramParseError(no, "expected '<gate> = AND|OR <operands...>' or 'out <gate>'");
      if (ids.count(w[0])) throw ProgramParseError(no, "gate '" + w[0] + "' redefined");
      Gate g;
      if (w[2] == "AND")
        g.kind = Gate::AND;
      else if (w[2] == "OR")
        g.kind = Gate::OR;
      else
        throw ProgramParseError(no, "unknown gate kind '" + w[2] + "'");
      for (size_t i = 3; i < w.size(); ++i) g.operands.push_back(parse_operand(w[i], no));
      if (g.kind == Gate::AND && g.operands.size() != 2)
        throw ProgramParseError(no, "AND gate must have fan-in exactly 2");
      if (g.kind == Gate::OR && g.operands.empty())
        throw ProgramParseError(no, "OR gate must have fan-in >= 1");
      ids[w[0]] = uint32_t(c.gates.size());
      c.gates.push_back(std::move(g));
      c.gate_names.push_back(w[0]);
    }
  }
  if (!saw_out) throw ProgramParseError(no, "missing 'out <gate>' line");
  c.num_inputs = max_var;
  c.validate();
  return c;
}

std::string render_netlist(const Circuit& c) {
  std::ostringstream os;
  for (size_t g = 0; g < c.gates.size(); ++g) {
    os << c.gate_names[g] << " = " << (c.gates[g].kind == Gate::AND ? "AND" : "OR");
    for (auto& op : c.gates[g].operands) {
      os << " ";
      if (op.is_gate)
        os << c.gate_names[op.gate];
      else
        os << (op.lit.negated ? "!x" : "x") << op.lit.var + 1;
    }
    os << "\n";
  }
  os << "out " << c.gate_names[c.output_gate] << "\n";
  return os.str();
}

// ----------------------------------------------------------- layer merging

uint32_t Fragment::depth() const {
  struct {
    uint32_t operator()(const Node& n) const {
      if (n.kind == Node::LEAF) return 0;
      uint32_t m = 0;
      for (auto& k : n.children) m = std::max(m, (*this)(k));
      return m + 1;
    }
  } rec;
  return rec(root);
}

uint32_t Fragment::max_or_fanin() const {
  struct {
    uint32_t operator()(const Node& n) const {
      uint32_t f = n.kind == Node::OR ? uint32_t(n.children.size()) : 0;
      for (auto& k : n.children) f = std::max(f, (*this)(k));
      return f;
    }
  } rec;
  return rec(root);
}

int Fragment::eval(std::span<const int> leaf_bits) const {
  struct Rec {
    std::span<const int> bits;
    int operator()(const Node& n) const {
      if (n.kind == Node::LEAF) return bits[n.leaf];
      if (n.kind == Node::AND) {
        int r = 1;
        for (auto& k : n.children) r &= (*this)(k);
        return r;
      }
      int r = 0;
      for (auto& k : n.children) r |= (*this)(k);
      return r;
    }
  } rec{leaf_bits};
  return rec(root);
}

namespace {

uint32_t leaf_slot(Fragment& frag, std::map<std::pair<uint64_t, uint64_t>, uint32_t>& dedupe,
                   const LeafValue& v) {
  auto [it, inserted] = dedupe.try_emplace(v.key(), uint32_t(frag.leaves.size()));
  if (inserted) frag.leaves.push_back(v);
  return it->second;
}

}  // namespace

BlockCircuit merge_layers(const Circuit& c, uint32_t block_depth) {
  if (block_depth < 1) throw std::invalid_argument("block depth must be >= 1");
  c.validate();
  std::vector<uint32_t> depth = c.gate_depths();
  auto layer_of = [&](uint32_t g) { return (depth[g] + block_depth - 1) / block_depth; };
  uint32_t num_layers = layer_of(c.output_gate);

  // needed gates: cone of the output
  std::vector<bool> needed(c.gates.size(), false);
  {
    std::vector<uint32_t> stack{c.output_gate};
    while (!stack.empty()) {
      uint32_t g = stack.back();
      stack.pop_back();
      if (needed[g]) continue;
      needed[g] = true;
      for (auto& op : c.gates[g].operands)
        if (op.is_gate) stack.push_back(op.gate);
    }
  }

  // boundary gates: needed and read from a strictly later super-layer
  std::vector<bool> boundary(c.gates.size(), false);
  boundary[c.output_gate] = true;
  for (size_t g = 0; g < c.gates.size(); ++g) {
    if (!needed[g]) continue;
    for (auto& op : c.gates[g].operands)
      if (op.is_gate && layer_of(op.gate) < layer_of(uint32_t(g)))
        boundary[op.gate] = true;
  }

  // cone expansion: recurse through same-layer gates, cut at earlier layers
  auto build_fragment = [&](uint32_t root_gate) {
    Fragment frag;
    std::map<std::pair<uint64_t, uint64_t>, uint32_t> dedupe;
    uint32_t root_layer = layer_of(root_gate);
    struct Rec {
      const Circuit& c;
      const std::vector<uint32_t>& depth;
      uint32_t block_depth, root_layer;
      Fragment& frag;
      std::map<std::pair<uint64_t, uint64_t>, uint32_t>& dedupe;
      Fragment::Node operator()(uint32_t g) const {
        Fragment::Node n;
        n.kind = c.gates[g].kind == Gate::AND ? Fragment::Node::AND : Fragment::Node::OR;
        for (auto& op : c.gates[g].operands) {
          if (!op.is_gate) {
            Fragment::Node leaf;
            leaf.kind = Fragment::Node::LEAF;
            leaf.leaf = leaf_slot(frag, dedupe, LeafValue{false, 0, op.lit});
            n.children.push_back(std::move(leaf));
          } else if ((depth[op.gate] + block_depth - 1) / block_depth == root_layer) {
            n.children.push_back((*this)(op.gate));
          } else {
            Fragment::Node leaf;
            leaf.kind = Fragment::Node::LEAF;
            leaf.leaf = leaf_slot(frag, dedupe, LeafValue{true, op.gate, {}});
            n.children.push_back(std::move(leaf));
          }
        }
        return n;
      }
    } rec{c, depth, block_depth, root_layer, frag, dedupe};
    frag.root = rec(root_gate);
    return frag;
  };

  BlockCircuit plan;
  plan.num_inputs = c.num_inputs;
  plan.block_depth = block_depth;
  plan.layers.resize(num_layers);

  std::vector<std::vector<uint32_t>> real_blocks(num_layers + 1);
  for (uint32_t g = 0; g < c.gates.size(); ++g)
    if (needed[g] && boundary[g]) real_blocks[layer_of(g)].push_back(g);

  auto source_layer = [&](const LeafValue& v) -> uint32_t {
    return v.is_gate ? layer_of(v.gate) : 0;
  };

  // repeated values, top-down: R[l] carries everything layer l+1 reads from
  // below layer l
  std::vector<std::set<std::pair<uint64_t, uint64_t>>> repeat_keys(num_layers + 2);
  std::map<std::pair<uint64_t, uint64_t>, LeafValue> key_values;
  std::vector<std::vector<Fragment>> frags(num_layers + 1);
  for (uint32_t l = 1; l <= num_layers; ++l) {
    frags[l].reserve(real_blocks[l].size());
    for (uint32_t g : real_blocks[l]) {
      frags[l].push_back(build_fragment(g));
      for (auto& v : frags[l].back().leaves) key_values[v.key()] = v;
    }
  }
  for (uint32_t l = num_layers >= 1 ? num_layers - 1 : 0; l >= 1; --l) {
    std::set<std::pair<uint64_t, uint64_t>> consumers;
    for (auto& frag : frags[l + 1])
      for (auto& v : frag.leaves) consumers.insert(v.key());
    for (auto& k : repeat_keys[l + 1]) consumers.insert(k);
    for (auto& k : consumers) {
      const LeafValue& v = key_values[k];
      if (source_layer(v) < l) repeat_keys[l].insert(k);
    }
  }

  for (uint32_t l = 1; l <= num_layers; ++l) {
    for (size_t i = 0; i < real_blocks[l].size(); ++i) {
      SuperGate sg;
      sg.repeater = false;
      sg.value = LeafValue{true, real_blocks[l][i], {}};
      sg.frag = std::move(frags[l][i]);
      plan.layers[l - 1].push_back(std::move(sg));
    }
    for (auto& k : repeat_keys[l]) {
      SuperGate sg;
      sg.repeater = true;
      sg.value = key_values[k];
      Fragment f;
      f.root.kind = Fragment::Node::LEAF;
      f.root.leaf = 0;
      f.leaves.push_back(sg.value);
      sg.frag = std::move(f);
      plan.layers[l - 1].push_back(std::move(sg));
    }
  }
  return plan;
}

std::vector<std::vector<int>> BlockCircuit::boundary_values(std::span<const int> x) const {
  std::vector<std::vector<int>> bounds;
  std::map<std::pair<uint64_t, uint64_t>, int> known;
  for (uint32_t v = 0; v < num_inputs; ++v) {
    known[LeafValue{false, 0, {v, false}}.key()] = x[v];
    known[LeafValue{false, 0, {v, true}}.key()] = 1 - x[v];
  }
  for (auto& layer : layers) {
    std::vector<int> row;
    for (auto& sg : layer) {
      std::vector<int> leaf_bits;
      for (auto& v : sg.frag.leaves) leaf_bits.push_back(known.at(v.key()));
      row.push_back(sg.frag.eval(leaf_bits));
    }
    for (size_t i = 0; i < layer.size(); ++i) known[layer[i].value.key()] = row[i];
    bounds.push_back(std::move(row));
  }
  return bounds;
}

int BlockCircuit::eval_flat(std::span<const int> x) const {
  return boundary_values(x).back().back();
}

IntPoly block_to_poly(const Fragment& frag) {
  uint32_t nv = uint32_t(frag.leaves.size());
  struct Rec {
    uint32_t nv;
    IntPoly operator()(const Fragment::Node& n) const {
      if (n.kind == Fragment::Node::LEAF) return IntPoly::variable(nv, n.leaf);
      if (n.kind == Fragment::Node::AND) {
        IntPoly p = IntPoly::constant(nv, 1);
        for (auto& k : n.children) p = p.mul((*this)(k));
        return p;
      }
      IntPoly p(nv);
      for (auto& k : n.children) p = p.add((*this)(k));
      return p;
    }
  } rec{nv};
  return rec(frag.root);
}

// ------------------------------------------------------------ compilation

namespace {

// A program split into access runs and the basic segments between them.
struct ProgramScan {
  std::vector<std::vector<const InputAccess*>> runs;
  std::vector<std::vector<const Instruction*>> segments;  // size runs+1
  std::vector<int> run_signs;
};

ProgramScan scan_program(const Program& p) {
  ProgramScan s;
  s.segments.emplace_back();
  const PrimeField& f = p.input_field();
  for (auto& ins : p.instructions) {
    if (auto* acc = std::get_if<InputAccess>(&ins)) {
      if (s.segments.size() == s.runs.size() + 1) {
        s.runs.emplace_back();
        int sign = acc->deliveries[0].coeff == f.reduce(1) ? 1 : -1;
        s.run_signs.push_back(sign);
      }
      s.runs.back().push_back(acc);
    } else {
      if (s.segments.size() == s.runs.size()) s.segments.emplace_back();
      s.segments.back().push_back(&ins);
    }
  }
  if (s.segments.size() == s.runs.size()) s.segments.emplace_back();
  return s;
}

// Interleaves per-block programs run by run so parallel blocks share the
// four broadcast phases at every nesting level. All programs must have the
// same single-bank field, input width, and run signature.
Program fuse_parallel(const std::vector<Program>& blocks, uint32_t num_inputs,
                      const std::string& name) {
  if (blocks.empty()) throw std::invalid_argument("fuse: no block programs");
  PrimeField field = blocks[0].banks[0].field;
  std::vector<ProgramScan> scans;
  for (auto& b : blocks) {
    if (b.banks.size() != 1 || b.banks[0].field != field || b.num_inputs != num_inputs)
      throw std::invalid_argument("fuse: incompatible block program");
    scans.push_back(scan_program(b));
  }
  size_t num_runs = scans[0].runs.size();
  for (auto& s : scans)
    if (s.runs.size() != num_runs || s.run_signs != scans[0].run_signs)
      throw std::logic_error("fuse: block programs have mismatched phase structure");

  std::vector<uint32_t> offset(blocks.size(), 0);
  uint32_t total = 0;
  for (size_t b = 0; b < blocks.size(); ++b) {
    offset[b] = total;
    total += blocks[b].banks[0].size;
  }

  Program out;
  out.name = name;
  out.banks = {{"main", field, total}};
  out.num_inputs = num_inputs;
  out.input_bank = 0;
  for (size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].outputs.size() != 1)
      throw std::logic_error("fuse: expected one output per block");
    out.outputs.push_back(
        {RegRef{0, blocks[b].outputs[0].reg.index + offset[b]}, uint32_t(b)});
  }

  auto remap_instr = [&](const Instruction& ins, uint32_t off) -> Instruction {
    if (auto* upd = std::get_if<BasicUpdate>(&ins)) {
      std::vector<uint32_t> map(upd->payload.num_vars());
      for (uint32_t v = 0; v < map.size(); ++v) map[v] = v + off;
      return BasicUpdate{RegRef{0, upd->target.index + off},
                         upd->payload.remap_vars(map, total)};
    }
    auto acc = std::get<InputAccess>(ins);
    for (auto& d : acc.deliveries) d.reg.index += off;
    return acc;
  };

  auto emit_segment = [&](size_t seg) {
    for (size_t b = 0; b < blocks.size(); ++b)
      for (auto* ins : scans[b].segments[seg])
        out.instructions.push_back(remap_instr(*ins, offset[b]));
  };

  for (size_t r = 0; r <= num_runs; ++r) {
    emit_segment(r);
    if (r == num_runs) break;
    // merge the blocks' accesses input by input
    std::map<uint32_t, InputAccess> merged;
    for (size_t b = 0; b < blocks.size(); ++b)
      for (auto* acc : scans[b].runs[r]) {
        auto [it, inserted] = merged.try_emplace(acc->input, InputAccess{acc->input, {}});
        for (auto& d : acc->deliveries)
          it->second.deliveries.push_back({RegRef{0, d.reg.index + offset[b]}, d.coeff});
      }
    for (auto& [input, acc] : merged) out.instructions.push_back(acc);
  }

  out.validate();
  out.claimed_profile = resources(out);
  return out;
}

}  // namespace

CompiledCircuit compile_circuit(const Circuit& c, uint32_t block_depth,
                                std::optional<u128> prime_override,
                                uint64_t materialize_budget) {
  CompiledCircuit cc;
  cc.plan = merge_layers(c, block_depth);
  uint32_t L = cc.plan.num_layers();
  uint32_t n = c.num_inputs;

  uint32_t ell = std::max<uint32_t>(2, c.max_or_fanin());
  u128 term_bound = 1;
  {
    uint64_t e = uint64_t(1) << block_depth;  // ell^(2^d), saturating
    for (uint64_t i = 0; i < e; ++i) {
      if (term_bound > (u128(1) << 90)) break;
      term_bound *= ell;
    }
  }
  uint64_t deg_bound = uint64_t(1) << block_depth;

  // block polynomials over each layer's input space
  struct LayerPolys {
    std::vector<IntPoly> polys;
    uint32_t width;
  };
  std::vector<LayerPolys> layer_polys(L);
  u128 max_need = 1;
  uint64_t measured_deg = 0;
  u128 measured_terms = 0;
  bool bounds_ok = true;

  for (uint32_t l = 0; l < L; ++l) {
    uint32_t width = l == 0 ? 2 * n : uint32_t(cc.plan.layers[l - 1].size());
    layer_polys[l].width = width;
    // slot of a value in the previous boundary (or the literal space)
    std::map<std::pair<uint64_t, uint64_t>, uint32_t> slot;
    if (l == 0) {
      for (uint32_t v = 0; v < n; ++v) {
        slot[LeafValue{false, 0, {v, false}}.key()] = v;
        slot[LeafValue{false, 0, {v, true}}.key()] = n + v;
      }
    } else {
      for (uint32_t s = 0; s < width; ++s)
        slot[cc.plan.layers[l - 1][s].value.key()] = s;
    }
    for (auto& sg : cc.plan.layers[l]) {
      IntPoly frag_poly = block_to_poly(sg.frag);
      measured_deg = std::max<uint64_t>(measured_deg, frag_poly.degree());
      measured_terms = std::max<u128>(measured_terms, frag_poly.unit_term_count());
      if (frag_poly.degree() > deg_bound || frag_poly.unit_term_count() > term_bound)
        bounds_ok = false;
      max_need = std::max<u128>(max_need,
                                std::max<u128>(frag_poly.degree(), frag_poly.unit_term_count()));
      std::vector<uint32_t> map(sg.frag.leaves.size());
      for (size_t i = 0; i < sg.frag.leaves.size(); ++i)
        map[i] = slot.at(sg.frag.leaves[i].key());
      layer_polys[l].polys.push_back(frag_poly.remap_vars(map, width));
    }
  }

  cc.prime = prime_override ? *prime_override : next_prime(max_need + 1);
  PrimeField field(cc.prime);
  for (uint32_t l = 0; l < L; ++l)
    for (auto& poly : layer_polys[l].polys)
      if (field.modulus() <= std::max<u128>(poly.degree(), poly.unit_term_count()))
        throw std::domain_error("block prime too small for layer " + std::to_string(l + 1));

  // per-layer fused programs
  for (uint32_t l = 0; l < L; ++l) {
    std::vector<Program> block_programs;
    for (size_t b = 0; b < layer_polys[l].polys.size(); ++b)
      block_programs.push_back(
          build_bool_rep(layer_polys[l].polys[b], field).program);
    LayerBuild lb;
    lb.input_width = layer_polys[l].width;
    lb.polys = layer_polys[l].polys;
    lb.program = fuse_parallel(block_programs, layer_polys[l].width,
                               "circuit_layer" + std::to_string(l + 1));
    cc.layers.push_back(std::move(lb));
  }

  // stack accounting by the composition algebra, materializing while small
  InstanceMeta meta = make_meta(cc.layers[0].program);
  cc.stack_profile = meta.profile;
  std::shared_ptr<Program> flat = std::make_shared<Program>(cc.layers[0].program);
  for (uint32_t l = 1; l < L; ++l) {
    std::vector<BoundInput> binding(cc.layers[l].program.num_inputs);
    for (uint32_t j = 0; j < binding.size(); ++j) binding[j] = {0, j};
    ComposeCounts counts = compose_counts(cc.layers[l].program, {meta}, binding);
    cc.stack_profile = counts.profile;
    if (flat && counts.profile.total_instructions() <= materialize_budget) {
      flat = std::make_shared<Program>(compose(cc.layers[l].program, {flat}, binding,
                                               "circuit_stack" + std::to_string(l + 1)));
    } else {
      flat.reset();
    }
    meta = meta_from_counts(counts);
  }
  if (flat) cc.flat = *flat;

  uint64_t call_bound = 1;
  for (uint32_t l = 0; l < L; ++l) call_bound *= 64;
  cc.call_bound = call_bound;

  cc.bounds.push_back({"block polynomial degree <= 2^d", BuiltBound::Upper, deg_bound,
                       measured_deg});
  cc.bounds.push_back({"block polynomial terms <= ell^(2^d)", BuiltBound::Upper,
                       uint64_t(std::min<u128>(term_bound, UINT64_MAX)),
                       uint64_t(std::min<u128>(measured_terms, UINT64_MAX))});
  cc.bounds.push_back({"recursive calls per input <= 64^layers", BuiltBound::Upper,
                       call_bound, cc.stack_profile.max_calls_per_input()});
  if (!bounds_ok)
    throw std::logic_error("block polynomial violates the degree/term bound");
  return cc;
}

CircuitCheckReport verify_compiled(const Circuit& c, const CompiledCircuit& cc,
                                   const CircuitCheckOptions& opts) {
  CircuitCheckReport report;
  uint32_t n = c.num_inputs;
  uint32_t L = cc.plan.num_layers();
  std::vector<std::set<RegRef>> out_regs(L);
  for (uint32_t l = 0; l < L; ++l)
    for (auto& o : cc.layers[l].program.outputs) out_regs[l].insert(o.reg);
  for (uint32_t l = 0; l < L; ++l) cc.layers[l].program.validate();

  uint64_t trial = 0;
  auto check_layer = [&](uint32_t l, const std::vector<u128>& input,
                         const std::vector<int>& want) -> bool {
    const Program& prog = cc.layers[l].program;
    Rng rng(splitmix64(opts.seed ^ splitmix64(0x1000 + trial++)));
    for (uint64_t tau = 0; tau < std::max<uint64_t>(1, opts.taus_per_point); ++tau) {
      RegisterState init = random_state(prog, rng);
      ExecResult res = execute_prevalidated(prog, init, input);
      ++report.executions;
      for (uint32_t r = 0; r < prog.banks[0].size; ++r) {
        if (out_regs[l].count(RegRef{0, r})) continue;
        if (res.state.banks[0][r] != init.banks[0][r]) {
          report.pass = false;
          report.detail = "layer " + std::to_string(l + 1) + ": register " +
                          std::to_string(r) + " not restored";
          return false;
        }
      }
      std::vector<u128> deltas = output_deltas(prog, init, res.state);
      for (size_t k = 0; k < deltas.size(); ++k)
        if (deltas[k] != u128(want[k])) {
          report.pass = false;
          report.detail = "layer " + std::to_string(l + 1) + ": block " +
                          std::to_string(k) + " delta mismatch";
          return false;
        }
    }
    return true;
  };

  // sweep every boundary vector reachable from {0,1}^n
  for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
    std::vector<int> x(n);
    for (uint32_t v = 0; v < n; ++v) x[v] = int((mask >> v) & 1);
    auto bounds = cc.plan.boundary_values(x);
    for (uint32_t l = 0; l < L; ++l) {
      std::vector<u128> input;
      if (l == 0) {
        for (uint32_t v = 0; v < n; ++v) input.push_back(u128(x[v]));
        for (uint32_t v = 0; v < n; ++v) input.push_back(u128(1 - x[v]));
      } else {
        for (int b : bounds[l - 1]) input.push_back(u128(b));
      }
      if (!check_layer(l, input, bounds[l])) return report;
    }
    if (bounds.back().back() != c.eval(x)) {
      report.pass = false;
      report.detail = "merged plan disagrees with the circuit";
      return report;
    }
  }

  // extra random boolean inputs per layer (not necessarily reachable)
  Rng rng(splitmix64(opts.seed ^ 0xabcdef));
  for (uint32_t l = 0; l < L; ++l) {
    for (uint64_t t = 0; t < opts.extra_trials; ++t) {
      std::vector<u128> input(cc.layers[l].input_width);
      std::vector<int> leaf_bits_all;
      for (auto& v : input) v = rng.below(2);
      if (l == 0) {
        // keep literal pairs consistent
        for (uint32_t v = 0; v < n; ++v) input[n + v] = 1 - input[v];
      }
      std::vector<int> want;
      for (size_t b = 0; b < cc.plan.layers[l].size(); ++b) {
        auto& sg = cc.plan.layers[l][b];
        std::vector<int> leaf_bits;
        for (auto& lv : sg.frag.leaves) {
          uint32_t s;
          if (l == 0)
            s = (lv.lit.negated ? n : 0) + lv.lit.var;
          else {
            s = UINT32_MAX;
            for (uint32_t k = 0; k < cc.plan.layers[l - 1].size(); ++k)
              if (cc.plan.layers[l - 1][k].value.key() == lv.key()) s = k;
          }
          leaf_bits.push_back(int(input[s]));
        }
        want.push_back(sg.frag.eval(leaf_bits));
      }
      (void)leaf_bits_all;
      if (!check_layer(l, input, want)) return report;
    }
  }

  // materialized flat program, when present
  if (cc.flat) {
    Circuit circuit = c;
    VerifyOptions vo;
    vo.trials = 24;
    vo.seed = opts.seed;
    vo.domain.bound = 2;
    vo.domain.pair_complement = true;
    auto oracle = [circuit](std::span<const u128> lits) {
      return std::vector<u128>{u128(circuit.eval_literals(lits))};
    };
    CleanReport cr = verify_clean(*cc.flat, oracle, vo);
    report.executions += cr.trials_run;
    if (!cr.pass) {
      report.pass = false;
      report.detail = "materialized stack failed: " +
                      (cr.counterexample ? cr.counterexample->what : "");
    }
  }
  return report;
}

}  // namespace cleanreg
