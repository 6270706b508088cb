#include "cleanreg/matpow.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cleanreg {

std::vector<u128> mat_mul_mod(std::span<const u128> a, std::span<const u128> b,
                              uint32_t n, PrimeField field) {
  std::vector<u128> r(size_t(n) * n, 0);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t k = 0; k < n; ++k) {
      u128 aik = field.reduce(a[size_t(i) * n + k]);
      if (aik == 0) continue;
      for (uint32_t j = 0; j < n; ++j)
        r[size_t(i) * n + j] = field.add(
            r[size_t(i) * n + j], field.mul(aik, field.reduce(b[size_t(k) * n + j])));
    }
  return r;
}

std::vector<u128> mat_pow_mod(std::span<const u128> m, uint32_t n, uint32_t d,
                              PrimeField field) {
  std::vector<u128> result(size_t(n) * n, 0);
  for (uint32_t i = 0; i < n; ++i) result[size_t(i) * n + i] = field.reduce(1);
  std::vector<u128> base(m.begin(), m.end());
  for (auto& v : base) v = field.reduce(v);
  uint32_t e = d;
  while (e > 0) {
    if (e & 1) result = mat_mul_mod(result, base, n, field);
    base = mat_mul_mod(base, base, n, field);
    e >>= 1;
  }
  return result;
}

std::vector<IntPoly> matpow_poly(uint32_t n, uint32_t d, u128 term_budget) {
  if (n < 1 || d < 1) throw std::invalid_argument("matpow_poly needs n >= 1, d >= 1");
  u128 paths = 1;
  for (uint32_t i = 0; i + 1 < d; ++i) {
    paths *= n;
    if (paths > term_budget)
      throw std::overflow_error("matpow term budget exceeded: n^(d-1) too large");
  }
  uint32_t nv = n * n;
  std::vector<IntPoly> entries;
  entries.reserve(nv);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j) {
      std::vector<IntPoly::Term> ts;
      std::vector<uint32_t> k(d >= 2 ? d - 1 : 0, 0);  // intermediate indices
      while (true) {
        Monomial mono;
        uint32_t prev = i;
        for (uint32_t step = 0; step + 1 < d; ++step) {
          mono = mono * Monomial::var(prev * n + k[step]);
          prev = k[step];
        }
        mono = mono * Monomial::var(prev * n + j);
        ts.push_back({1, mono});
        size_t pos = 0;
        while (pos < k.size() && k[pos] == n - 1) k[pos++] = 0;
        if (pos == k.size()) break;
        ++k[pos];
      }
      entries.push_back(IntPoly(nv, std::move(ts)));
    }
  return entries;
}

Program build_matpow_core(uint32_t n, PrimeField field, uint32_t d, bool indirect,
                          const std::string& name, u128 term_budget) {
  std::vector<IntPoly> entries = matpow_poly(n, d, term_budget);
  uint32_t nv = n * n;

  // Group forms with identical linear parts across entries so they share one
  // power gadget with per-entry output weights.
  std::map<std::vector<u128>, std::vector<std::pair<uint32_t, u128>>> grouped;
  for (uint32_t e = 0; e < nv; ++e) {
    LinearFormDecomposition dec = waring_decompose(entries[e].to_field(field), d);
    for (auto& f : dec.forms) {
      grouped[f.betas].push_back({e, f.alpha});
    }
  }
  std::vector<PowerBlock> blocks;
  for (auto& [betas, outs] : grouped) {
    PowerBlock b;
    for (uint32_t j = 0; j < nv; ++j)
      if (betas[j] != 0) b.form.push_back({j, betas[j]});
    b.max_degree = d;
    for (auto& [slot, alpha] : outs)
      b.outs.push_back({SparsePoly(field, 1, {{alpha, Monomial::var(0, d)}}), slot});
    blocks.push_back(std::move(b));
  }
  return build_power_blocks(field, nv, blocks, nv, {}, indirect, name);
}

BuiltProgram build_matpow_small(uint32_t n, u128 p, uint32_t d) {
  PrimeField field(p);
  if (u128(d) >= p) throw std::domain_error("matpow small requires d < p (use lifting)");
  BuiltProgram built;
  built.program = build_matpow_core(n, field, d, false,
                                    "matpow_n" + std::to_string(n) + "_p" +
                                        to_string(p) + "_d" + std::to_string(d));
  built.oracle = [n, d, field](std::span<const u128> m) {
    return mat_pow_mod(m, n, d, field);
  };
  ResourceProfile prof = resources(built.program);
  built.bounds.push_back({"recursive calls to M (per entry)", BuiltBound::Exact, 4,
                          prof.max_calls_per_input()});
  return built;
}

namespace {

u128 lifted_modulus_bound(uint32_t n, u128 p, uint32_t d) {
  u128 bound = 1;
  for (uint32_t i = 0; i < d; ++i) {
    if (bound > (u128(1) << 100) / p) throw std::overflow_error("lifted modulus out of range");
    bound *= p;
  }
  for (uint32_t i = 0; i + 1 < d; ++i) {
    if (bound > (u128(1) << 100) / n) throw std::overflow_error("lifted modulus out of range");
    bound *= n;
  }
  return bound;  // p^d * n^(d-1)
}

}  // namespace

LiftedMatpow build_matpow_lifted(uint32_t n, u128 p, uint32_t d) {
  PrimeField base(p);
  u128 bound = std::max<u128>(lifted_modulus_bound(n, p, d) + 1, u128(d) + 1);
  LiftedMatpow lifted;
  lifted.q = next_prime(bound);
  PrimeField field(lifted.q);
  lifted.built.program = build_matpow_core(
      n, field, d, false,
      "matpow_lifted_n" + std::to_string(n) + "_p" + to_string(p) + "_d" +
          std::to_string(d));
  lifted.built.readout_mod = p;
  lifted.built.domain.bound = p;  // matrix entries live in [0, p)
  lifted.built.oracle = [n, d, base](std::span<const u128> m) {
    return mat_pow_mod(m, n, d, base);
  };
  ResourceProfile prof = resources(lifted.built.program);
  lifted.built.bounds.push_back({"recursive calls to M (per entry)", BuiltBound::Exact,
                                 4, prof.max_calls_per_input()});
  return lifted;
}

BoostPlan make_boost_plan(uint32_t d, uint32_t delta) {
  if (delta < 2) throw std::invalid_argument("boosting base must be >= 2");
  if (d < 1) throw std::invalid_argument("boosting exponent must be >= 1");
  BoostPlan plan;
  plan.delta = delta;
  uint32_t r = d;
  while (r > 0) {
    plan.digits.push_back(r % delta);
    r /= delta;
  }
  return plan;
}

namespace {

uint32_t ceil_log(uint32_t d, uint32_t delta) {
  uint32_t e = 0;
  u128 pw = 1;
  while (pw < d) {
    pw *= delta;
    ++e;
  }
  return e;
}

// Product of k matrices, entry (a, b): variables of factor f at f*n^2 + r*n + c.
std::vector<IntPoly> product_polys(uint32_t n, uint32_t k) {
  uint32_t nv = k * n * n;
  std::vector<IntPoly> entries;
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = 0; b < n; ++b) {
      std::vector<IntPoly::Term> ts;
      std::vector<uint32_t> mid(k >= 1 ? k - 1 : 0, 0);
      while (true) {
        Monomial mono;
        uint32_t prev = a;
        for (uint32_t f = 0; f + 1 < k; ++f) {
          mono = mono * Monomial::var(f * n * n + prev * n + mid[f]);
          prev = mid[f];
        }
        mono = mono * Monomial::var((k - 1) * n * n + prev * n + b);
        ts.push_back({1, mono});
        size_t pos = 0;
        while (pos < mid.size() && mid[pos] == n - 1) mid[pos++] = 0;
        if (pos == mid.size()) break;
        ++mid[pos];
      }
      entries.push_back(IntPoly(nv, std::move(ts)));
    }
  return entries;
}

}  // namespace

BoostedMatpow build_matpow_boosted(uint32_t n, u128 p, uint32_t d, uint32_t delta) {
  PrimeField base(p);
  BoostedMatpow out;
  out.plan = make_boost_plan(d, delta);
  uint32_t L = out.plan.floor_log();

  double t = 4.0;
  uint32_t cl = ceil_log(d, delta);
  out.lemma_bound = (double(cl) + 2.0) * (t / (t - 1.0)) * std::pow(t, double(cl));

  if (d <= delta) {
    // single digit: the base program is already the whole computation
    LiftedMatpow lifted = build_matpow_lifted(n, p, d);
    out.built = std::move(lifted.built);
    out.q = lifted.q;
    out.built.notes.push_back("single base-" + std::to_string(delta) + " digit");
  } else {
    uint32_t factors_count = 0;
    for (uint32_t a : out.plan.digits)
      if (a != 0) ++factors_count;
    u128 qbound = std::max<u128>({lifted_modulus_bound(n, p, d) + 1,
                                  u128(factors_count) + 2, p + 1, u128(delta) + 1});
    out.q = next_prime(qbound);
    PrimeField field(out.q);
    uint32_t nv = n * n;

    auto identity_binding = [&](uint32_t count, uint32_t instance) {
      std::vector<BoundInput> b(count);
      for (uint32_t j = 0; j < count; ++j) b[j] = {instance, j};
      return b;
    };
    std::vector<BoundInput> chain_bind(nv);
    for (uint32_t j = 0; j < nv; ++j) chain_bind[j] = {0, j};

    auto f_delta = std::make_shared<Program>(build_matpow_core(
        n, field, delta, true, "pow" + std::to_string(delta)));

    // chain[i] computes M^(delta^i)
    std::vector<std::shared_ptr<Program>> chain(L + 1);
    chain[1] = f_delta;
    for (uint32_t i = 2; i <= L; ++i)
      chain[i] = std::make_shared<Program>(
          compose(*f_delta, {chain[i - 1]}, chain_bind,
                  "pow" + std::to_string(delta) + "_chain" + std::to_string(i)));

    std::vector<std::shared_ptr<const Program>> factor_programs;
    for (uint32_t i = 0; i <= L; ++i) {
      uint32_t alpha = out.plan.digits[i];
      if (alpha == 0) continue;
      std::shared_ptr<Program> factor;
      if (i == 0) {
        factor = std::make_shared<Program>(build_matpow_core(
            n, field, alpha, false, "pow_digit" + std::to_string(alpha)));
      } else if (alpha == 1) {
        factor = chain[i];
      } else {
        Program f_alpha = build_matpow_core(n, field, alpha, true,
                                            "pow" + std::to_string(alpha));
        factor = std::make_shared<Program>(
            compose(f_alpha, {chain[i]}, chain_bind,
                    "pow_factor_i" + std::to_string(i)));
      }
      factor_programs.push_back(factor);
    }

    // multiply the factors with the interpolation evaluator
    std::vector<IntPoly> prod = product_polys(n, factors_count);
    std::vector<SparsePoly> prod_f;
    for (auto& e : prod) prod_f.push_back(e.to_field(field));
    Program wrapper = build_interp_core(prod_f, "matpow_product");
    std::vector<BoundInput> binding(factors_count * nv);
    for (uint32_t f = 0; f < factors_count; ++f)
      for (uint32_t e = 0; e < nv; ++e) binding[f * nv + e] = {f, e};
    (void)identity_binding;
    out.built.program = compose(wrapper, factor_programs, binding,
                                "matpow_boosted_n" + std::to_string(n) + "_p" +
                                    to_string(p) + "_d" + std::to_string(d) + "_b" +
                                    std::to_string(delta));

    uint64_t r_max = 0;
    for (auto& f : factor_programs)
      r_max = std::max(r_max, resources(*f).total_registers());
    uint64_t reg_bound = 1 + r_max * (uint64_t(L) + 1);
    out.built.bounds.push_back({"registers <= 1 + r(floor(log_delta d)+1)",
                                BuiltBound::Upper, reg_bound,
                                resources(out.built.program).total_registers()});
  }

  out.built.readout_mod = p;
  out.built.domain.bound = p;
  PrimeField pf = base;
  uint32_t nn = n, dd = d;
  out.built.oracle = [nn, dd, pf](std::span<const u128> m) {
    return mat_pow_mod(m, nn, dd, pf);
  };
  out.measured_calls = resources(out.built.program).max_calls_per_input();
  uint64_t relaxed = uint64_t(2.0 * out.lemma_bound);
  out.built.bounds.push_back({"recursive calls to M <= 2x boosting bound",
                              BuiltBound::Upper, relaxed, out.measured_calls});
  return out;
}

}  // namespace cleanreg
