#include "cleanreg/execute.hpp"

namespace cleanreg {

RegisterState RegisterState::zeros(const Program& p) {
  RegisterState s;
  for (auto& b : p.banks) s.banks.emplace_back(b.size, 0);
  return s;
}

ExecResult execute_prevalidated(const Program& p, RegisterState init,
                                std::span<const u128> x) {
  if (x.size() != p.num_inputs)
    throw std::invalid_argument("execute: input arity mismatch");
  if (init.banks.size() != p.banks.size())
    throw std::invalid_argument("execute: state does not match banks");
  for (size_t b = 0; b < p.banks.size(); ++b)
    if (init.banks[b].size() != p.banks[b].size)
      throw std::invalid_argument("execute: state does not match bank sizes");

  const PrimeField& in_field = p.input_field();
  std::vector<u128> xs(x.begin(), x.end());
  for (auto& v : xs) v = in_field.reduce(v);

  RegisterState st = std::move(init);
  for (auto& ins : p.instructions) {
    if (auto* upd = std::get_if<BasicUpdate>(&ins)) {
      auto& regs = st.banks[upd->target.bank];
      const PrimeField& f = p.banks[upd->target.bank].field;
      u128 v = upd->payload.eval(regs);
      regs[upd->target.index] = f.add(regs[upd->target.index], v);
    } else {
      auto& acc = std::get<InputAccess>(ins);
      u128 xv = xs[acc.input];
      for (auto& d : acc.deliveries) {
        const PrimeField& f = p.banks[d.reg.bank].field;
        auto& cell = st.banks[d.reg.bank][d.reg.index];
        cell = f.add(cell, f.mul(d.coeff, xv));
      }
    }
  }
  return {std::move(st), resources(p)};
}

ExecResult execute(const Program& p, RegisterState init, std::span<const u128> x) {
  p.validate();  // structural errors surface before execution begins
  return execute_prevalidated(p, std::move(init), x);
}

std::vector<u128> output_deltas(const Program& p, const RegisterState& init,
                                const RegisterState& final_state,
                                std::optional<u128> readout_mod) {
  std::vector<u128> deltas(p.outputs.size(), 0);
  for (auto& o : p.outputs) {
    const PrimeField& f = p.banks[o.reg.bank].field;
    u128 d = f.sub(final_state.banks[o.reg.bank][o.reg.index],
                   init.banks[o.reg.bank][o.reg.index]);
    if (readout_mod) d %= *readout_mod;
    deltas[o.index] = d;
  }
  return deltas;
}

}  // namespace cleanreg
