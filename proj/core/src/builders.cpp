#include "cleanreg/builders.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace cleanreg {

namespace {

u128 checked_mul(u128 a, u128 b) {
  if (a != 0 && b > ~u128(0) / a)
    throw std::overflow_error("field size bound exceeds supported range");
  return a * b;
}

u128 checked_pow(u128 base, uint32_t exp) {
  u128 r = 1;
  for (uint32_t i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

struct BlockLayout {
  uint32_t in_reg;
};

}  // namespace

Program build_power_blocks(PrimeField field, uint32_t num_inputs,
                           const std::vector<PowerBlock>& blocks, uint32_t num_slots,
                           std::vector<u128> slot_constants, bool indirect,
                           const std::string& name) {
  slot_constants.resize(num_slots, 0);
  uint32_t max_deg_all = 0;
  for (auto& b : blocks) {
    if (b.form.empty())
      throw std::invalid_argument("power block needs a nonempty input form");
    for (auto& [i, c] : b.form) {
      if (i >= num_inputs) throw std::invalid_argument("power block input out of range");
      if (field.reduce(c) == 0) throw std::invalid_argument("power block zero form coefficient");
    }
    for (auto& o : b.outs) {
      if (o.slot >= num_slots) throw std::invalid_argument("power block slot out of range");
      if (o.poly.num_vars() > 1 || o.poly.field() != field)
        throw std::invalid_argument("power block output polynomial must be univariate");
      if (o.poly.degree() > b.max_degree)
        throw std::invalid_argument("power block output degree exceeds the block");
    }
    max_deg_all = std::max(max_deg_all, b.max_degree);
  }

  uint32_t v_base = 0;
  uint32_t next = indirect ? num_inputs : 0;
  std::vector<BlockLayout> layout;
  for (auto& b : blocks) {
    layout.push_back({next});
    next += 1 + b.max_degree;
  }
  uint32_t slot_base = next;
  uint32_t size = next + num_slots;

  Program prog;
  prog.name = name;
  prog.banks = {{"main", field, std::max<uint32_t>(size, 1)}};
  prog.num_inputs = num_inputs;
  prog.input_bank = 0;
  for (uint32_t s = 0; s < num_slots; ++s)
    prog.outputs.push_back({RegRef{0, slot_base + s}, s});

  auto binom = binomial_table(max_deg_all, field);
  u128 minus_one = field.neg(1);
  auto var = [&](uint32_t reg, uint32_t e = 1) { return Monomial::var(reg, e); };

  // Slot-update payloads for one nonzero coefficient a of degree i >= 1:
  //   plus:  a*((-1)^i R_in^i + sum_k C(i,k)(-1)^{i-k} R_k R_in^{i-k})
  //   minus:      -a*sum_k C(i,k)(-1)^{i-k} R_k R_in^{i-k}
  auto out_payload = [&](const BlockLayout& bl, u128 a, uint32_t i, bool plus) {
    std::vector<SparsePoly::Term> ts;
    if (plus)
      ts.push_back({field.mul(a, field.pow(minus_one, i)), var(bl.in_reg, i)});
    u128 sign = plus ? field.reduce(1) : minus_one;
    for (uint32_t k = 1; k <= i; ++k) {
      u128 c = field.mul(field.mul(a, binom[i][k]), field.pow(minus_one, i - k));
      c = field.mul(c, sign);
      Monomial m = var(bl.in_reg + k);
      if (i > k) m = m * var(bl.in_reg, i - k);
      ts.push_back({c, m});
    }
    return SparsePoly(field, size, std::move(ts));
  };

  auto emit_accesses = [&](bool positive) {
    if (indirect) {
      u128 c = positive ? field.reduce(1) : minus_one;
      for (uint32_t j = 0; j < num_inputs; ++j)
        prog.instructions.push_back(InputAccess{j, {{RegRef{0, v_base + j}, c}}});
      return;
    }
    for (uint32_t j = 0; j < num_inputs; ++j) {
      InputAccess acc{j, {}};
      for (size_t b = 0; b < blocks.size(); ++b)
        for (auto& [i, c] : blocks[b].form)
          if (i == j) {
            u128 coeff = field.reduce(c);
            acc.deliveries.push_back(
                {RegRef{0, layout[b].in_reg}, positive ? coeff : field.neg(coeff)});
          }
      if (!acc.deliveries.empty()) prog.instructions.push_back(std::move(acc));
    }
  };

  // indirect mode: R_in(b) +-= sum_i c_i V_i as one linear update per block
  auto emit_form_updates = [&](bool positive) {
    if (!indirect) return;
    for (size_t b = 0; b < blocks.size(); ++b) {
      std::vector<SparsePoly::Term> ts;
      for (auto& [i, c] : blocks[b].form) {
        u128 coeff = field.reduce(c);
        ts.push_back({positive ? coeff : field.neg(coeff), var(v_base + i)});
      }
      prog.instructions.push_back(
          BasicUpdate{RegRef{0, layout[b].in_reg}, SparsePoly(field, size, std::move(ts))});
    }
  };

  auto emit_powers = [&](bool load) {
    for (size_t b = 0; b < blocks.size(); ++b)
      for (uint32_t k = 1; k <= blocks[b].max_degree; ++k) {
        SparsePoly payload(field, size, {{load ? field.reduce(1) : minus_one,
                                          var(layout[b].in_reg, k)}});
        prog.instructions.push_back(
            BasicUpdate{RegRef{0, layout[b].in_reg + k}, std::move(payload)});
      }
  };

  auto emit_outputs = [&](bool plus) {
    for (size_t b = 0; b < blocks.size(); ++b)
      for (auto& o : blocks[b].outs)
        for (auto& t : o.poly.terms()) {
          uint32_t i = t.mono.total_degree();
          if (i == 0) continue;  // constants handled at the end
          prog.instructions.push_back(BasicUpdate{
              RegRef{0, slot_base + o.slot}, out_payload(layout[b], t.coeff, i, plus)});
        }
  };

  // fold output-polynomial constant terms into the slot constants
  for (auto& b : blocks)
    for (auto& o : b.outs) {
      u128 c = o.poly.coeff_of(Monomial::one());
      slot_constants[o.slot] = field.add(slot_constants[o.slot], c);
    }

  emit_accesses(true);          // phase A
  emit_form_updates(true);
  emit_powers(true);
  emit_form_updates(false);
  emit_accesses(false);         // phase B
  emit_form_updates(true);
  emit_outputs(true);
  emit_form_updates(false);
  emit_accesses(true);          // phase C
  emit_form_updates(true);
  emit_powers(false);
  emit_form_updates(false);
  emit_accesses(false);         // phase D
  emit_form_updates(true);
  emit_outputs(false);
  emit_form_updates(false);
  for (uint32_t s = 0; s < num_slots; ++s)
    if (slot_constants[s] != 0)
      prog.instructions.push_back(BasicUpdate{
          RegRef{0, slot_base + s},
          SparsePoly::constant(field, size, slot_constants[s])});

  prog.validate();
  prog.claimed_profile = resources(prog);
  return prog;
}

Program build_sum_program(PrimeField field, uint32_t num_inputs,
                          const std::string& name) {
  Program prog;
  prog.name = name;
  prog.banks = {{"main", field, 1}};
  prog.num_inputs = num_inputs;
  prog.input_bank = 0;
  for (uint32_t j = 0; j < num_inputs; ++j)
    prog.instructions.push_back(InputAccess{j, {{RegRef{0, 0}, 1}}});
  prog.outputs.push_back({RegRef{0, 0}, 0});
  prog.validate();
  prog.claimed_profile = resources(prog);
  return prog;
}

Program build_interp_core(const std::vector<SparsePoly>& output_polys,
                          const std::string& name) {
  if (output_polys.empty())
    throw std::invalid_argument("interpolation program needs at least one output");
  PrimeField field = output_polys[0].field();
  uint32_t n = 0;
  uint32_t d = 0;
  for (auto& p : output_polys) {
    if (p.field() != field) throw std::invalid_argument("output polynomial fields differ");
    n = std::max(n, p.num_vars());
    d = std::max(d, p.degree());
  }
  if (u128(d) + 2 > field.modulus())
    throw std::domain_error("interpolation needs degree + 2 <= p");

  bool need_aux = false;
  for (auto& p : output_polys)
    for (auto& t : p.terms())
      if (t.mono.total_degree() < d) need_aux = true;

  uint32_t aux_reg = n;
  uint32_t slot_base = n + (need_aux ? 1 : 0);
  uint32_t num_slots = uint32_t(output_polys.size());
  uint32_t size = slot_base + num_slots;

  // homogenize to degree d with the auxiliary always-1 variable
  std::vector<SparsePoly> hom;
  for (auto& p : output_polys) {
    std::vector<SparsePoly::Term> ts = p.with_num_vars(n).terms();
    for (auto& t : ts) {
      uint32_t missing = d - t.mono.total_degree();
      if (missing > 0) t.mono = t.mono * Monomial::var(aux_reg, missing);
    }
    hom.push_back(SparsePoly(field, size, std::move(ts)));
  }

  std::vector<u128> lambdas(d + 1);
  for (uint32_t k = 0; k <= d; ++k) lambdas[k] = field.reduce(k + 1);
  std::vector<u128> weights = extraction_weights(lambdas, d, field);

  Program prog;
  prog.name = name;
  prog.banks = {{"main", field, std::max<uint32_t>(size, 1)}};
  prog.num_inputs = n;
  prog.input_bank = 0;
  for (uint32_t s = 0; s < num_slots; ++s)
    prog.outputs.push_back({RegRef{0, slot_base + s}, s});

  auto shift_all = [&](u128 coeff) {
    for (uint32_t j = 0; j < n; ++j)
      prog.instructions.push_back(InputAccess{j, {{RegRef{0, j}, coeff}}});
    if (need_aux)
      prog.instructions.push_back(BasicUpdate{
          RegRef{0, aux_reg}, SparsePoly::constant(field, size, coeff)});
  };

  for (uint32_t k = 0; k <= d; ++k) {
    shift_all(field.reduce(1));  // lambda_k = k+1, so every delta is one
    for (uint32_t s = 0; s < num_slots; ++s) {
      SparsePoly payload = hom[s].scale(weights[k]);
      if (!payload.is_zero())
        prog.instructions.push_back(BasicUpdate{RegRef{0, slot_base + s}, payload});
    }
  }
  shift_all(field.neg(field.reduce(d + 1)));  // restore

  prog.validate();
  prog.claimed_profile = resources(prog);
  return prog;
}

// ------------------------------------------------------------- builders

namespace {

void require_univariate(const SparsePoly& p) {
  if (p.num_vars() > 1 || !p.is_univariate_in(0))
    throw std::invalid_argument("expected a univariate polynomial");
}

std::vector<BuiltBound> call_bounds_exact(const Program& prog, uint64_t expected,
                                          bool used_only) {
  ResourceProfile prof = resources(prog);
  std::vector<BuiltBound> bounds;
  uint64_t worst = 0;
  bool all_exact = true;
  for (uint32_t j = 0; j < prog.num_inputs; ++j) {
    uint64_t c = prof.recursive_calls[j];
    worst = std::max(worst, c);
    if (c != expected && !(used_only && c == 0)) all_exact = false;
  }
  BuiltBound b{"recursive calls per input", BuiltBound::Exact, expected,
               all_exact ? expected : worst};
  bounds.push_back(b);
  return bounds;
}

}  // namespace

BuiltProgram build_univariate(const SparsePoly& p) {
  require_univariate(p);
  PrimeField field = p.field();
  uint32_t n = p.degree();

  PowerBlock block;
  block.form = {{0, 1}};
  block.max_degree = n;
  block.outs.push_back({p.with_num_vars(1), 0});

  BuiltProgram built;
  built.program = build_power_blocks(
      field, 1, {block}, 1, {}, false,
      "univ_p" + to_string(field.modulus()) + "_d" + std::to_string(n));
  SparsePoly poly = p.with_num_vars(1);
  built.oracle = [poly](std::span<const u128> x) {
    return std::vector<u128>{poly.eval(x)};
  };
  built.bounds = call_bounds_exact(built.program, 4, false);
  built.bounds.push_back({"registers", BuiltBound::Exact, uint64_t(n) + 2,
                          resources(built.program).total_registers()});
  return built;
}

BuiltProgram build_univariate_set(const std::vector<SparsePoly>& ps) {
  if (ps.empty()) throw std::invalid_argument("empty polynomial set");
  PrimeField field = ps[0].field();
  uint32_t n = 0;
  for (auto& p : ps) {
    require_univariate(p);
    if (p.field() != field) throw std::invalid_argument("polynomial fields differ");
    n = std::max(n, p.degree());
  }
  PowerBlock block;
  block.form = {{0, 1}};
  block.max_degree = n;
  for (uint32_t j = 0; j < ps.size(); ++j)
    block.outs.push_back({ps[j].with_num_vars(1), j});

  BuiltProgram built;
  built.program = build_power_blocks(
      field, 1, {block}, uint32_t(ps.size()), {}, false,
      "univset_p" + to_string(field.modulus()) + "_l" + std::to_string(ps.size()));
  std::vector<SparsePoly> polys;
  for (auto& p : ps) polys.push_back(p.with_num_vars(1));
  built.oracle = [polys](std::span<const u128> x) {
    std::vector<u128> out;
    for (auto& p : polys) out.push_back(p.eval(x));
    return out;
  };
  built.bounds = call_bounds_exact(built.program, 4, false);
  built.bounds.push_back({"registers", BuiltBound::Exact,
                          uint64_t(n) + 1 + ps.size(),
                          resources(built.program).total_registers()});
  return built;
}

namespace {

std::vector<PowerBlock> blocks_from_decomposition(const LinearFormDecomposition& dec,
                                                  uint32_t slot) {
  std::vector<PowerBlock> blocks;
  for (auto& f : dec.forms) {
    PowerBlock b;
    for (uint32_t j = 0; j < dec.num_vars; ++j)
      if (f.betas[j] != 0) b.form.push_back({j, f.betas[j]});
    b.max_degree = dec.degree;
    b.outs.push_back({SparsePoly(dec.field, 1, {{f.alpha, Monomial::var(0, dec.degree)}}),
                      slot});
    blocks.push_back(std::move(b));
  }
  return blocks;
}

}  // namespace

BuiltProgram build_waring(const SparsePoly& p) {
  PrimeField field = p.field();
  uint32_t d = p.degree();
  if (!p.is_homogeneous())
    throw std::invalid_argument("build_waring expects a homogeneous polynomial");
  LinearFormDecomposition dec = waring_decompose(p, d);

  std::vector<PowerBlock> blocks;
  u128 constant = 0;
  if (d == 0) {
    constant = p.coeff_of(Monomial::one());
  } else {
    blocks = blocks_from_decomposition(dec, 0);
  }
  BuiltProgram built;
  built.program = build_power_blocks(
      field, p.num_vars(), blocks, 1, {constant}, false,
      "waring_p" + to_string(field.modulus()) + "_d" + std::to_string(d));
  SparsePoly poly = p;
  built.oracle = [poly](std::span<const u128> x) {
    return std::vector<u128>{poly.eval(x)};
  };
  built.bounds = call_bounds_exact(built.program, 4, true);
  u128 polarization_cap = checked_mul(p.terms().size(), (u128(1) << d) - 1);
  built.bounds.push_back({"decomposition forms <= t(2^d-1)", BuiltBound::Upper,
                          uint64_t(std::min<u128>(polarization_cap, UINT64_MAX)),
                          dec.forms.size()});
  return built;
}

BuiltProgram build_general(const SparsePoly& p, bool lift) {
  PrimeField base = p.field();
  uint32_t d = p.degree();
  PrimeField field = base;
  if (!lift) {
    if (u128(d) >= base.modulus())
      throw std::domain_error("degree must be below p (use lift)");
  } else {
    u128 bound = checked_mul(checked_pow(2, p.num_vars()),
                             checked_pow(base.modulus(), d + 1));
    bound = std::max<u128>({bound, u128(d) + 1, base.modulus() + 1});
    field = PrimeField(next_prime(bound));
  }

  // rebuild the polynomial over the working field (residues are < p <= q)
  std::vector<SparsePoly::Term> ts;
  for (auto& t : p.terms()) ts.push_back({t.coeff, t.mono});
  SparsePoly work(field, p.num_vars(), std::move(ts));

  std::vector<PowerBlock> blocks;
  u128 constant = 0;
  for (auto& part : work.homogeneous_parts()) {
    if (part.is_zero()) continue;
    uint32_t e = part.degree();
    if (e == 0) {
      constant = field.add(constant, part.coeff_of(Monomial::one()));
      continue;
    }
    auto dec = waring_decompose(part, e);
    auto bs = blocks_from_decomposition(dec, 0);
    blocks.insert(blocks.end(), bs.begin(), bs.end());
  }

  BuiltProgram built;
  built.program = build_power_blocks(
      field, p.num_vars(), blocks, 1, {constant}, false,
      std::string(lift ? "lifted" : "general") + "_p" + to_string(base.modulus()) +
          "_d" + std::to_string(d));
  SparsePoly poly = p;
  if (lift) {
    built.readout_mod = base.modulus();
    built.domain.bound = base.modulus();
    built.oracle = [poly, base](std::span<const u128> x) {
      return std::vector<u128>{poly.eval(x)};  // inputs already below p
    };
  } else {
    built.oracle = [poly](std::span<const u128> x) {
      return std::vector<u128>{poly.eval(x)};
    };
  }
  built.bounds = call_bounds_exact(built.program, 4, true);
  return built;
}

BuiltProgram build_symmetric_bool(const std::vector<int>& truth, PrimeField field) {
  if (truth.empty()) throw std::invalid_argument("empty truth vector");
  uint32_t n = uint32_t(truth.size()) - 1;
  if (field.modulus() <= n)
    throw std::domain_error("symmetric builder needs a prime > n");
  for (int b : truth)
    if (b != 0 && b != 1) throw std::invalid_argument("truth vector entries must be bits");

  std::vector<std::pair<u128, u128>> points;
  for (uint32_t k = 0; k <= n; ++k) points.push_back({k, u128(truth[k])});
  SparsePoly g = interpolate_univariate(points, field);

  BuiltProgram univ = build_univariate(g);
  auto sum = std::make_shared<Program>(
      build_sum_program(field, n, "sum_n" + std::to_string(n)));
  BuiltProgram built;
  built.program =
      compose(univ.program, {sum}, {{0, 0}},
              "symmetric_p" + to_string(field.modulus()) + "_n" + std::to_string(n));
  std::vector<int> tv = truth;
  built.oracle = [tv](std::span<const u128> x) {
    size_t s = 0;
    for (auto v : x) s += size_t(v);
    return std::vector<u128>{u128(tv[s])};
  };
  built.domain.bound = 2;
  built.bounds = call_bounds_exact(built.program, 4, false);
  return built;
}

namespace {

// bit-indicator interpolations are reused heavily by the circuit pipeline
const std::vector<SparsePoly>& digit_polys(PrimeField field) {
  static std::mutex mu;
  static std::map<u128, std::vector<SparsePoly>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(field.modulus());
  if (it != cache.end()) return it->second;
  u128 p = field.modulus();
  uint32_t w = uint32_t(bit_length(p - 1));
  if (w == 0) w = 1;
  std::vector<SparsePoly> bits;
  for (uint32_t m = 0; m < w; ++m) {
    std::vector<std::pair<u128, u128>> pts;
    for (u128 v = 0; v < p; ++v) pts.push_back({v, (v >> m) & 1});
    bits.push_back(interpolate_univariate(pts, field));
  }
  return cache.emplace(p, std::move(bits)).first->second;
}

}  // namespace

BuiltProgram build_bool_rep(const IntPoly& p, PrimeField field) {
  uint32_t n = p.num_vars();
  uint32_t d = p.degree();
  u128 t = p.terms().size();
  if (field.modulus() <= std::max<u128>(d, t))
    throw std::domain_error("build_bool_rep needs p > max(degree, term count)");

  // Check that reducing mod p preserves the zero set on {0,1}^n.
  SparsePoly pf = p.to_field(field);
  {
    uint64_t limit = n <= 12 ? (uint64_t(1) << n) : 4096;
    Rng rng(12345);
    for (uint64_t it = 0; it < limit; ++it) {
      std::vector<i128> xi(n);
      std::vector<u128> xu(n);
      for (uint32_t j = 0; j < n; ++j) {
        int bit = n <= 12 ? int((it >> j) & 1) : int(rng.below(2));
        xi[j] = bit;
        xu[j] = u128(bit);
      }
      bool zero_int = p.eval(xi) == 0;
      bool zero_mod = pf.eval(xu) == 0;
      if (zero_int != zero_mod)
        throw std::invalid_argument(
            "polynomial does not represent the same function mod p");
    }
  }

  // Stage 1: one gadget per monomial, computing c_k * [sum of support = d_k].
  // Coefficients are absorbed here so later stages see unit accesses.
  std::vector<PowerBlock> term_blocks;
  std::vector<u128> term_consts(p.terms().size(), 0);
  uint32_t t_count = uint32_t(p.terms().size());
  for (uint32_t k = 0; k < t_count; ++k) {
    auto& term = p.terms()[k];
    u128 ck = field.reduce_int(term.coeff);
    if (term.mono.factors.empty()) {
      term_consts[k] = ck;
      continue;
    }
    uint32_t dk = uint32_t(term.mono.factors.size());
    std::vector<std::pair<u128, u128>> pts;
    for (uint32_t s = 0; s <= dk; ++s) pts.push_back({s, s == dk ? ck : 0});
    PowerBlock b;
    for (auto& [v, e] : term.mono.factors) b.form.push_back({v, 1});
    b.max_degree = dk;
    b.outs.push_back({interpolate_univariate(pts, field), k});
    term_blocks.push_back(std::move(b));
  }
  Program terms = build_power_blocks(field, n, term_blocks, t_count, term_consts,
                                     false, "boolrep_terms");

  // Stage 2: binary digits of the accumulated value.
  const std::vector<SparsePoly>& bits = digit_polys(field);
  uint32_t w = uint32_t(bits.size());
  PowerBlock digit_block;
  for (uint32_t k = 0; k < t_count; ++k) digit_block.form.push_back({k, 1});
  digit_block.max_degree = uint32_t(field.modulus() - 1);
  for (uint32_t m = 0; m < w; ++m) digit_block.outs.push_back({bits[m], m});
  Program digits =
      build_power_blocks(field, t_count, {digit_block}, w, {}, false, "boolrep_digits");

  // Stage 3: OR over the digits.
  std::vector<std::pair<u128, u128>> or_pts;
  for (uint32_t s = 0; s <= w; ++s) or_pts.push_back({s, s > 0 ? 1 : 0});
  PowerBlock or_block;
  for (uint32_t m = 0; m < w; ++m) or_block.form.push_back({m, 1});
  or_block.max_degree = w;
  or_block.outs.push_back({interpolate_univariate(or_pts, field), 0});
  Program orp = build_power_blocks(field, w, {or_block}, 1, {}, false, "boolrep_or");

  std::vector<BoundInput> bind_t(t_count);
  for (uint32_t k = 0; k < t_count; ++k) bind_t[k] = {0, k};
  Program dt = compose(digits, {std::make_shared<Program>(std::move(terms))}, bind_t,
                       "boolrep_value");
  std::vector<BoundInput> bind_w(w);
  for (uint32_t m = 0; m < w; ++m) bind_w[m] = {0, m};
  BuiltProgram built;
  built.program =
      compose(orp, {std::make_shared<Program>(std::move(dt))}, bind_w,
              "boolrep_p" + to_string(field.modulus()) + "_t" + std::to_string(t_count));

  IntPoly poly = p;
  built.oracle = [poly](std::span<const u128> x) {
    std::vector<i128> xi(x.begin(), x.end());
    return std::vector<u128>{poly.eval(xi) != 0 ? u128(1) : u128(0)};
  };
  built.domain.bound = 2;
  ResourceProfile prof = resources(built.program);
  built.bounds.push_back({"recursive calls per input", BuiltBound::Upper, 64,
                          prof.max_calls_per_input()});
  return built;
}

BuiltProgram build_interpolation_eval(const SparsePoly& p) {
  PrimeField field = p.field();
  uint32_t d = p.degree();
  if (u128(d) + 2 > field.modulus())
    throw std::domain_error("interpolation evaluation needs degree + 2 <= p");

  BuiltProgram built;
  built.program = build_interp_core(
      {p}, "interp_p" + to_string(field.modulus()) + "_d" + std::to_string(d));
  SparsePoly poly = p;
  built.oracle = [poly](std::span<const u128> x) {
    return std::vector<u128>{poly.eval(x)};
  };
  built.bounds = call_bounds_exact(built.program, uint64_t(d) + 2, false);
  return built;
}

}  // namespace cleanreg
