#include "cleanreg/compose.hpp"

#include <algorithm>
#include <set>

namespace cleanreg {

InstanceMeta make_meta(const Program& p) {
  InstanceMeta m;
  m.num_inputs = p.num_inputs;
  m.input_modulus = p.input_field().modulus();
  m.banks = p.banks;
  m.outputs.resize(p.outputs.size());
  for (auto& o : p.outputs) m.outputs[o.index] = o.reg;
  m.output_writes.assign(p.outputs.size(), {});
  std::map<RegRef, uint32_t> out_idx;
  for (auto& o : p.outputs) out_idx[o.reg] = o.index;
  for (auto& ins : p.instructions) {
    auto* upd = std::get_if<BasicUpdate>(&ins);
    if (!upd) continue;
    auto it = out_idx.find(upd->target);
    if (it == out_idx.end()) continue;
    m.output_writes[it->second].instructions += 1;
    m.output_writes[it->second].monomials += upd->payload.terms().size();
  }
  m.write_only = outputs_write_only(p);
  m.profile = resources(p);
  return m;
}

InstanceMeta meta_from_counts(const ComposeCounts& c) {
  InstanceMeta m;
  m.num_inputs = c.num_inputs;
  m.input_modulus = c.input_modulus;
  m.banks = c.banks;
  m.outputs = c.outputs;
  m.output_writes = c.output_writes;
  m.write_only = c.write_only;
  m.profile = c.profile;
  return m;
}

namespace {

struct Group {
  uint32_t instance = 0;
  bool sandwich = false;
  bool minus = false;
  std::vector<const InputAccess*> accs;
  // Per instance output: composed registers receiving that output
  // (multiset; empty -> routed to the instance sink).
  std::vector<std::vector<RegRef>> targets;
  uint64_t delivery_count = 0;
};

struct Run {
  std::vector<Group> groups;
};

struct Item {
  bool is_run;
  size_t index;  // run index or outer instruction index
};

struct Plan {
  std::vector<Item> items;
  std::vector<Run> runs;

  std::vector<RegisterBank> banks;  // composed layout (final sizes)
  size_t outer_bank_count = 0;
  std::vector<uint32_t> outer_size;  // per composed bank: registers owned by outer
  std::vector<std::vector<uint16_t>> inst_bank_map;  // instance bank -> composed bank
  std::map<std::pair<uint32_t, uint32_t>, RegRef> sinks;  // (inst, output) -> reg
  std::vector<uint32_t> f_base;     // per composed bank
  std::vector<uint32_t> pool_base;  // per composed bank
  // Per instance, per output index: F slot register (sandwich staging).
  std::vector<std::vector<RegRef>> f_slots;

  std::set<RegRef> outer_output_regs;
  ComposeCounts counts;
};

// Number of outer registers in composed bank cb that an inlined instance may
// borrow for a given group (everything except the group's own retarget
// registers and the outer's outputs, which must stay write-only).
uint32_t lendable(const Plan& plan, uint16_t cb, const std::set<RegRef>& excluded) {
  uint32_t n = 0;
  for (uint32_t r = 0; r < plan.outer_size[cb]; ++r)
    if (!excluded.count(RegRef{cb, r}) && !plan.outer_output_regs.count(RegRef{cb, r}))
      ++n;
  return n;
}

Plan plan_compose(const Program& outer, const std::vector<InstanceMeta>& metas,
                  const std::vector<BoundInput>& binding) {
  outer.validate();
  if (metas.empty()) throw std::invalid_argument("compose: no instances");
  if (binding.size() != outer.num_inputs)
    throw std::invalid_argument("compose: binding must cover every outer input");
  for (auto& b : binding) {
    if (b.instance >= metas.size())
      throw std::invalid_argument("compose: binding references unknown instance");
    if (b.output >= metas[b.instance].outputs.size())
      throw std::invalid_argument("compose: binding references unknown output");
  }
  for (auto& m : metas) {
    if (m.num_inputs != metas[0].num_inputs || m.input_modulus != metas[0].input_modulus)
      throw std::invalid_argument("compose: instances disagree on the input space");
  }
  u128 outer_in_mod = outer.input_field().modulus();
  for (auto& b : binding) {
    const InstanceMeta& m = metas[b.instance];
    if (m.banks[m.outputs[b.output].bank].field.modulus() != outer_in_mod)
      throw std::invalid_argument(
          "compose: inner output field differs from outer input field");
  }

  Plan plan;
  for (auto& o : outer.outputs) plan.outer_output_regs.insert(o.reg);

  // --- scan the outer into items and runs, grouping accesses by instance
  for (size_t i = 0; i < outer.instructions.size(); ++i) {
    if (std::holds_alternative<BasicUpdate>(outer.instructions[i])) {
      plan.items.push_back({false, i});
      continue;
    }
    if (plan.items.empty() || !plan.items.back().is_run) {
      plan.items.push_back({true, plan.runs.size()});
      plan.runs.push_back({});
    }
    Run& run = plan.runs.back();
    auto& acc = std::get<InputAccess>(outer.instructions[i]);
    uint32_t inst = binding[acc.input].instance;
    Group* group = nullptr;
    for (auto& g : run.groups)
      if (g.instance == inst) group = &g;
    if (!group) {
      run.groups.push_back({});
      group = &run.groups.back();
      group->instance = inst;
      group->targets.assign(metas[inst].outputs.size(), {});
    }
    group->accs.push_back(&acc);
    for (auto& d : acc.deliveries) {
      group->targets[binding[acc.input].output].push_back(d.reg);
      ++group->delivery_count;
    }
  }

  // --- classify groups
  for (auto& run : plan.runs) {
    for (auto& g : run.groups) {
      const InstanceMeta& m = metas[g.instance];
      const PrimeField& f = outer.input_field();
      bool all_plus = true, all_minus = true;
      for (auto* acc : g.accs)
        for (auto& d : acc->deliveries) {
          if (d.coeff != f.reduce(1)) all_plus = false;
          if (d.coeff != f.neg(1)) all_minus = false;
        }
      if (m.write_only && (all_plus || all_minus)) {
        g.sandwich = false;
        g.minus = !all_plus && all_minus;
      } else {
        g.sandwich = true;
      }
    }
  }

  // --- register layout: outer banks first, instance banks merged by modulus
  plan.banks = outer.banks;
  plan.outer_bank_count = plan.banks.size();
  plan.outer_size.clear();
  for (auto& b : plan.banks) plan.outer_size.push_back(b.size);

  auto composed_bank_for = [&](const PrimeField& f) -> int {
    for (size_t cb = 0; cb < plan.banks.size(); ++cb)
      if (plan.banks[cb].field == f) return int(cb);
    return -1;
  };
  plan.inst_bank_map.resize(metas.size());
  for (size_t i = 0; i < metas.size(); ++i) {
    for (auto& ib : metas[i].banks) {
      int cb = composed_bank_for(ib.field);
      if (cb < 0) {
        cb = int(plan.banks.size());
        plan.banks.push_back({"aux" + std::to_string(plan.banks.size()), ib.field, 0});
        plan.outer_size.push_back(0);
      }
      plan.inst_bank_map[i].push_back(uint16_t(cb));
    }
  }

  // Retargeted registers must land in the composed bank the instance output
  // lives in; otherwise a basic update would cross banks.
  for (auto& run : plan.runs)
    for (auto& g : run.groups) {
      const InstanceMeta& m = metas[g.instance];
      for (size_t o = 0; o < g.targets.size(); ++o)
        for (auto& t : g.targets[o])
          if (t.bank != plan.inst_bank_map[g.instance][m.outputs[o].bank])
            throw std::invalid_argument(
                "compose: delivery register bank does not merge with the inner "
                "output bank");
    }

  std::vector<uint32_t> next(plan.banks.size());
  for (size_t cb = 0; cb < plan.banks.size(); ++cb) next[cb] = plan.outer_size[cb];

  // sinks for outputs some fast group leaves unconsumed
  std::set<std::pair<uint32_t, uint32_t>> sink_keys;
  for (auto& run : plan.runs)
    for (auto& g : run.groups) {
      if (g.sandwich) continue;
      for (size_t o = 0; o < g.targets.size(); ++o)
        if (g.targets[o].empty()) sink_keys.insert({g.instance, uint32_t(o)});
    }
  for (auto& key : sink_keys) {
    const InstanceMeta& m = metas[key.first];
    uint16_t cb = plan.inst_bank_map[key.first][m.outputs[key.second].bank];
    plan.sinks[key] = RegRef{cb, next[cb]++};
  }

  // F slots: sandwich staging, shared across groups (one sandwich at a time)
  plan.f_base.assign(plan.banks.size(), 0);
  std::vector<uint32_t> f_cap(plan.banks.size(), 0);
  std::set<uint32_t> sandwich_instances;
  for (auto& run : plan.runs)
    for (auto& g : run.groups)
      if (g.sandwich) sandwich_instances.insert(g.instance);
  for (uint32_t i : sandwich_instances) {
    std::vector<uint32_t> need(plan.banks.size(), 0);
    for (auto& out : metas[i].outputs) ++need[plan.inst_bank_map[i][out.bank]];
    for (size_t cb = 0; cb < plan.banks.size(); ++cb)
      f_cap[cb] = std::max(f_cap[cb], need[cb]);
  }
  for (size_t cb = 0; cb < plan.banks.size(); ++cb) {
    plan.f_base[cb] = next[cb];
    next[cb] += f_cap[cb];
  }
  plan.f_slots.resize(metas.size());
  for (uint32_t i : sandwich_instances) {
    std::vector<uint32_t> used(plan.banks.size(), 0);
    plan.f_slots[i].resize(metas[i].outputs.size());
    for (size_t o = 0; o < metas[i].outputs.size(); ++o) {
      uint16_t cb = plan.inst_bank_map[i][metas[i].outputs[o].bank];
      plan.f_slots[i][o] = RegRef{cb, plan.f_base[cb] + used[cb]++};
    }
  }

  // pool overflow: per bank, worst shortfall of borrowed registers
  std::vector<uint32_t> pool_cap(plan.banks.size(), 0);
  for (auto& run : plan.runs)
    for (auto& g : run.groups) {
      const InstanceMeta& m = metas[g.instance];
      std::vector<uint32_t> nonoutput(plan.banks.size(), 0);
      for (size_t ib = 0; ib < m.banks.size(); ++ib)
        nonoutput[plan.inst_bank_map[g.instance][ib]] += m.banks[ib].size;
      for (auto& out : m.outputs) --nonoutput[plan.inst_bank_map[g.instance][out.bank]];
      std::set<RegRef> excluded;
      if (!g.sandwich)
        for (auto& ts : g.targets)
          for (auto& t : ts) excluded.insert(t);
      for (size_t cb = 0; cb < plan.banks.size(); ++cb) {
        uint32_t avail = lendable(plan, uint16_t(cb), excluded);
        if (nonoutput[cb] > avail)
          pool_cap[cb] = std::max(pool_cap[cb], nonoutput[cb] - avail);
      }
    }
  plan.pool_base.assign(plan.banks.size(), 0);
  for (size_t cb = 0; cb < plan.banks.size(); ++cb) {
    plan.pool_base[cb] = next[cb];
    next[cb] += pool_cap[cb];
  }
  for (size_t cb = 0; cb < plan.banks.size(); ++cb)
    plan.banks[cb].size = std::max<uint32_t>(next[cb], 1);

  // --- exact counts of the composed flat program
  ComposeCounts& c = plan.counts;
  c.num_inputs = metas[0].num_inputs;
  c.input_modulus = metas[0].input_modulus;
  c.banks = plan.banks;
  c.write_only = outputs_write_only(outer);
  c.profile.recursive_calls.assign(c.num_inputs, 0);
  c.outputs.resize(outer.outputs.size());
  for (auto& o : outer.outputs) c.outputs[o.index] = o.reg;
  for (auto& b : plan.banks) c.profile.registers.push_back({b.name, b.size});

  std::map<RegRef, uint32_t> outer_out_idx;
  for (auto& o : outer.outputs) outer_out_idx[o.reg] = o.index;
  c.output_writes.assign(outer.outputs.size(), {});

  auto add_write = [&](RegRef r, uint64_t instrs, uint64_t monos) {
    auto it = outer_out_idx.find(r);
    if (it == outer_out_idx.end()) return;
    c.output_writes[it->second].instructions += instrs;
    c.output_writes[it->second].monomials += monos;
  };

  for (auto& item : plan.items) {
    if (!item.is_run) {
      auto& upd = std::get<BasicUpdate>(outer.instructions[item.index]);
      c.profile.basic_instructions += 1;
      c.profile.payload_monomials += upd.payload.terms().size();
      add_write(upd.target, 1, upd.payload.terms().size());
      continue;
    }
    for (auto& g : plan.runs[item.index].groups) {
      const InstanceMeta& m = metas[g.instance];
      uint64_t copies = g.sandwich ? 2 : 1;
      for (uint32_t j = 0; j < c.num_inputs; ++j)
        c.profile.recursive_calls[j] += copies * m.profile.recursive_calls[j];
      c.profile.basic_instructions += copies * m.profile.basic_instructions;
      c.profile.payload_monomials += copies * m.profile.payload_monomials;
      if (g.sandwich) {
        c.sandwich_inlinings += 2;
        c.profile.basic_instructions += 2 * g.delivery_count;
        c.profile.payload_monomials += 2 * g.delivery_count;
        for (auto* acc : g.accs)
          for (auto& d : acc->deliveries) add_write(d.reg, 2, 2);
      } else {
        c.fast_inlinings += 1;
        for (size_t o = 0; o < g.targets.size(); ++o) {
          size_t k = g.targets[o].size();
          if (k > 1) {
            c.profile.basic_instructions += (k - 1) * m.output_writes[o].instructions;
            c.profile.payload_monomials += (k - 1) * m.output_writes[o].monomials;
          }
          for (auto& t : g.targets[o])
            add_write(t, m.output_writes[o].instructions, m.output_writes[o].monomials);
        }
      }
    }
  }
  return plan;
}

}  // namespace

ComposeCounts compose_counts(const Program& outer,
                             const std::vector<InstanceMeta>& metas,
                             const std::vector<BoundInput>& binding) {
  return plan_compose(outer, metas, binding).counts;
}

namespace {

// Register map for one inlining of one instance.
struct InlineMap {
  // per instance bank: composed indices for non-output registers
  // (output slots hold UINT32_MAX and must never be read)
  std::vector<std::vector<uint32_t>> regs;
  // per output index: composed registers receiving the output's writes
  std::vector<std::vector<RegRef>> out_targets;
  std::vector<uint16_t> bank_map;

  RegRef map_plain(RegRef r) const {
    return RegRef{bank_map[r.bank], regs[r.bank][r.index]};
  }
};

void emit_inlined(Program& out, const Program& src, const InlineMap& im,
                  const std::map<RegRef, uint32_t>& src_out_idx) {
  for (auto& ins : src.instructions) {
    if (auto* upd = std::get_if<BasicUpdate>(&ins)) {
      uint16_t cb = im.bank_map[upd->target.bank];
      SparsePoly payload = upd->payload.remap_vars(im.regs[upd->target.bank],
                                                   out.banks[cb].size);
      auto it = src_out_idx.find(upd->target);
      if (it != src_out_idx.end()) {
        for (auto& t : im.out_targets[it->second])
          out.instructions.push_back(BasicUpdate{t, payload});
      } else {
        out.instructions.push_back(
            BasicUpdate{im.map_plain(upd->target), std::move(payload)});
      }
    } else {
      auto& acc = std::get<InputAccess>(ins);
      InputAccess mapped;
      mapped.input = acc.input;
      for (auto& d : acc.deliveries) {
        auto it = src_out_idx.find(d.reg);
        if (it != src_out_idx.end()) {
          for (auto& t : im.out_targets[it->second])
            mapped.deliveries.push_back({t, d.coeff});
        } else {
          mapped.deliveries.push_back({im.map_plain(d.reg), d.coeff});
        }
      }
      out.instructions.push_back(std::move(mapped));
    }
  }
}

}  // namespace

Program compose(const Program& outer,
                const std::vector<std::shared_ptr<const Program>>& instances,
                const std::vector<BoundInput>& binding, const std::string& name) {
  std::vector<InstanceMeta> metas;
  for (auto& inst : instances) {
    inst->validate();
    metas.push_back(make_meta(*inst));
  }
  Plan plan = plan_compose(outer, metas, binding);

  Program out;
  out.name = name;
  out.banks = plan.banks;
  out.num_inputs = metas.empty() ? 0 : metas[0].num_inputs;
  {
    // composed inputs live in the instances' input field
    uint16_t ib = plan.inst_bank_map[0][instances[0]->input_bank];
    out.input_bank = ib;
  }
  out.outputs = outer.outputs;

  // lazily inverted instances
  std::vector<std::shared_ptr<const Program>> inverted(instances.size());
  auto inverse_of = [&](uint32_t i) -> const Program& {
    if (!inverted[i]) inverted[i] = std::make_shared<Program>(invert(*instances[i]));
    return *inverted[i];
  };

  std::vector<std::map<RegRef, uint32_t>> src_out_idx(instances.size());
  for (size_t i = 0; i < instances.size(); ++i)
    for (auto& o : instances[i]->outputs) src_out_idx[i][o.reg] = o.index;

  auto build_inline_map = [&](const Group& g, bool to_f_slots) -> InlineMap {
    const InstanceMeta& m = metas[g.instance];
    InlineMap im;
    im.bank_map.assign(plan.inst_bank_map[g.instance].begin(),
                       plan.inst_bank_map[g.instance].end());
    im.out_targets.resize(m.outputs.size());
    for (size_t o = 0; o < m.outputs.size(); ++o) {
      if (to_f_slots) {
        im.out_targets[o] = {plan.f_slots[g.instance][o]};
      } else if (g.targets[o].empty()) {
        im.out_targets[o] = {plan.sinks.at({g.instance, uint32_t(o)})};
      } else {
        im.out_targets[o] = g.targets[o];
      }
    }
    // borrowed registers: outer regs minus exclusions, then the overflow pool
    std::set<RegRef> excluded;
    if (!g.sandwich)
      for (auto& ts : g.targets)
        for (auto& t : ts) excluded.insert(t);
    std::vector<std::vector<uint32_t>> free_slots(plan.banks.size());
    for (size_t cb = 0; cb < plan.banks.size(); ++cb) {
      for (uint32_t r = 0; r < plan.outer_size[cb]; ++r) {
        RegRef ref{uint16_t(cb), r};
        if (!excluded.count(ref) && !plan.outer_output_regs.count(ref))
          free_slots[cb].push_back(r);
      }
    }
    std::vector<uint32_t> pool_next(plan.banks.size());
    for (size_t cb = 0; cb < plan.banks.size(); ++cb)
      pool_next[cb] = plan.pool_base[cb];
    std::vector<std::vector<bool>> is_output(m.banks.size());
    for (size_t ib = 0; ib < m.banks.size(); ++ib)
      is_output[ib].assign(m.banks[ib].size, false);
    for (auto& o : m.outputs) is_output[o.bank][o.index] = true;
    std::vector<uint32_t> used(plan.banks.size(), 0);
    im.regs.resize(m.banks.size());
    for (size_t ib = 0; ib < m.banks.size(); ++ib) {
      uint16_t cb = im.bank_map[ib];
      im.regs[ib].assign(m.banks[ib].size, UINT32_MAX);
      for (uint32_t r = 0; r < m.banks[ib].size; ++r) {
        if (is_output[ib][r]) continue;
        if (used[cb] < free_slots[cb].size())
          im.regs[ib][r] = free_slots[cb][used[cb]++];
        else
          im.regs[ib][r] = pool_next[cb]++;
      }
    }
    // In sandwich mode every output maps to one F slot, so payload reads of
    // output registers stay meaningful; the fast path requires write-only
    // outputs and leaves the sentinel in place.
    if (to_f_slots)
      for (size_t o = 0; o < m.outputs.size(); ++o)
        im.regs[m.outputs[o].bank][m.outputs[o].index] =
            plan.f_slots[g.instance][o].index;
    return im;
  };

  for (auto& item : plan.items) {
    if (!item.is_run) {
      auto& upd = std::get<BasicUpdate>(outer.instructions[item.index]);
      uint16_t cb = upd.target.bank;  // outer banks keep their indices
      out.instructions.push_back(BasicUpdate{
          upd.target, upd.payload.with_num_vars(out.banks[cb].size)});
      continue;
    }
    for (auto& g : plan.runs[item.index].groups) {
      if (!g.sandwich) {
        InlineMap im = build_inline_map(g, /*to_f_slots=*/false);
        const Program& src = g.minus ? inverse_of(g.instance) : *instances[g.instance];
        emit_inlined(out, src, im, src_out_idx[g.instance]);
        continue;
      }
      InlineMap im = build_inline_map(g, /*to_f_slots=*/true);
      emit_inlined(out, *instances[g.instance], im, src_out_idx[g.instance]);
      auto emit_scaled = [&](bool negate) {
        const PrimeField& f = outer.input_field();
        for (auto* acc : g.accs) {
          uint32_t o = binding[acc->input].output;
          RegRef fslot = plan.f_slots[g.instance][o];
          for (auto& d : acc->deliveries) {
            u128 coeff = negate ? f.neg(d.coeff) : d.coeff;
            SparsePoly payload(f, out.banks[d.reg.bank].size,
                               {{coeff, Monomial::var(fslot.index)}});
            out.instructions.push_back(BasicUpdate{d.reg, std::move(payload)});
          }
        }
      };
      emit_scaled(false);
      emit_inlined(out, inverse_of(g.instance), im, src_out_idx[g.instance]);
      emit_scaled(true);
    }
  }

  out.validate();
  out.claimed_profile = plan.counts.profile;
  if (resources(out) != plan.counts.profile)
    throw std::logic_error("compose: emitted program disagrees with planned counts");
  return out;
}

}  // namespace cleanreg
