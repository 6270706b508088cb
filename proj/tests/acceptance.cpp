// Acceptance suite: one check per shipping criterion, each printed as a
// single PASS/FAIL line with its runtime.

#include <chrono>
#include <set>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cleanreg/circuits.hpp"
#include "cleanreg/matpow.hpp"
#include "cleanreg/space.hpp"
#include "cli.hpp"
#include "test_util.hpp"

using namespace cleanreg;

namespace {

struct Collected {
  std::string name;
  Program program;
};
std::vector<Collected> g_corpus;  // fed into the round-trip criterion

void collect(const std::string& name, const Program& p, uint64_t max_instructions = 60000) {
  if (resources(p).total_instructions() <= max_instructions)
    g_corpus.push_back({name, p});
}

std::string check_clean_sweep(const BuiltProgram& built,
                              const std::vector<std::vector<u128>>& sweep,
                              uint64_t taus, uint64_t seed) {
  VerifyOptions opts;
  opts.trials = 0;
  opts.seed = seed;
  opts.taus_per_input = taus;
  opts.input_sweep = &sweep;
  opts.domain = built.domain;
  opts.readout_mod = built.readout_mod;
  opts.exhaustive_limit = 0;
  auto report = verify_clean(built.program, built.oracle, opts);
  if (!report.pass)
    return built.program.name + ": " +
           (report.counterexample ? report.counterexample->what : "failed");
  return "";
}

std::vector<std::vector<u128>> field_sweep(u128 p, uint32_t arity = 1) {
  std::vector<std::vector<u128>> sweep;
  std::vector<u128> x(arity, 0);
  while (true) {
    sweep.push_back(x);
    uint32_t i = 0;
    while (i < arity && ++x[i] == p) x[i++] = 0;
    if (i == arity) break;
  }
  return sweep;
}

std::vector<std::vector<u128>> boolean_sweep(uint32_t n) {
  std::vector<std::vector<u128>> sweep;
  for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
    std::vector<u128> x(n);
    for (uint32_t v = 0; v < n; ++v) x[v] = (mask >> v) & 1;
    sweep.push_back(x);
  }
  return sweep;
}

SparsePoly random_univ_of_degree(Rng& rng, PrimeField field, uint32_t n) {
  std::vector<SparsePoly::Term> ts;
  ts.push_back({1 + rng.below(field.modulus() - 1), Monomial::var(0, n)});
  for (uint32_t i = 0; i < n; ++i)
    ts.push_back({rng.below(field.modulus()), Monomial::var(0, i)});
  return SparsePoly(field, 1, std::move(ts));
}

// ---------------------------------------------------------------- criteria

std::string criterion1_fig1() {
  Rng rng(101);
  for (u128 p : {u128(5), u128(7), u128(11), u128(13)}) {
    PrimeField field(p);
    auto sweep = field_sweep(p);
    for (uint32_t n = 0; n <= 16; ++n) {
      SparsePoly poly = n == 0 ? SparsePoly::constant(field, 1, rng.below(p))
                               : random_univ_of_degree(rng, field, n);
      BuiltProgram built = build_univariate(poly);
      ResourceProfile prof = resources(built.program);
      if (prof.recursive_calls != std::vector<uint64_t>{4})
        return built.program.name + ": expected exactly 4 recursive calls";
      if (prof.total_registers() != uint64_t(n) + 2)
        return built.program.name + ": expected n+2 registers";
      std::string fail = check_clean_sweep(built, sweep, 200, 7 * n + uint64_t(p));
      if (!fail.empty()) return fail;
      if (n <= 6) collect("c1_" + built.program.name, built.program);
    }
  }
  return "";
}

std::string criterion2_set() {
  Rng rng(202);
  PrimeField field(11);
  auto sweep = field_sweep(11);
  for (uint32_t ell = 1; ell <= 4; ++ell) {
    for (uint32_t n = 1; n <= 8; ++n) {
      std::vector<SparsePoly> ps;
      ps.push_back(random_univ_of_degree(rng, field, n));  // pins the max degree
      for (uint32_t j = 1; j < ell; ++j)
        ps.push_back(random_univ_of_degree(rng, field, 1 + uint32_t(rng.below(n))));
      BuiltProgram built = build_univariate_set(ps);
      ResourceProfile prof = resources(built.program);
      if (prof.recursive_calls != std::vector<uint64_t>{4})
        return built.program.name + ": expected exactly 4 recursive calls";
      if (prof.total_registers() != uint64_t(n) + 1 + ell)
        return built.program.name + ": expected n+1+ell registers";
      std::string fail = check_clean_sweep(built, sweep, 24, 100 * ell + n);
      if (!fail.empty()) return fail;
      if (n <= 4)
        collect("c2_l" + std::to_string(ell) + "_n" + std::to_string(n), built.program);
    }
  }
  return "";
}

std::string criterion3_composition() {
  for (u128 p : {u128(11), u128(13)}) {
    PrimeField field(p);
    auto sweep = field_sweep(p);
    for (uint32_t a = 1; a <= 5; ++a)
      for (uint32_t b = 1; b <= 5; ++b) {
        SparsePoly pa(field, 1, {{1, Monomial::var(0, a)}});
        SparsePoly pb(field, 1, {{1, Monomial::var(0, b)}});
        BuiltProgram outer = build_univariate(pa);
        BuiltProgram inner = build_univariate(pb);
        uint64_t s_f = resources(outer.program).basic_instructions;
        uint64_t s_g = resources(inner.program).basic_instructions;
        Program composed =
            compose(outer.program, {std::make_shared<Program>(inner.program)}, {{0, 0}},
                    "pow" + std::to_string(a * b));
        ResourceProfile prof = resources(composed);
        if (prof.recursive_calls != std::vector<uint64_t>{16})
          return composed.name + ": composed calls != t_f * t_g = 16";
        if (prof.basic_instructions != s_f + 4 * s_g)
          return composed.name + ": composed basics != s_f + t_f * s_g";
        BuiltProgram built;
        built.program = composed;
        uint32_t ab = a * b;
        built.oracle = [field, ab](std::span<const u128> x) {
          return std::vector<u128>{field.pow(x[0], ab)};
        };
        std::string fail = check_clean_sweep(built, sweep, 20, a * 31 + b);
        if (!fail.empty()) return fail;
        if (a == 2 && b == 3) collect("c3_pow6_p" + to_string(p), composed);
      }
  }
  return "";
}

std::string criterion4_waring() {
  Rng rng(404);
  int cases = 0;
  while (cases < 100) {
    u128 ps[] = {5, 7, 11};
    PrimeField field(ps[rng.below(3)]);
    uint32_t n = 1 + uint32_t(rng.below(4));
    uint32_t d = 1 + uint32_t(rng.below(4));
    if (u128(d) >= field.modulus()) continue;
    SparsePoly p =
        testutil::random_poly(rng, field, n, d, 1 + uint32_t(rng.below(4)), true);
    if (p.is_zero()) continue;
    LinearFormDecomposition dec = waring_decompose(p, d);
    if (!(dec.expand() == p)) return "waring reconstruction differs from the input";
    BuiltProgram built = build_waring(p);
    ResourceProfile prof = resources(built.program);
    std::set<uint32_t> used;
    for (auto& t : p.terms())
      for (auto& [v, e] : t.mono.factors) used.insert(v);
    for (uint32_t j = 0; j < n; ++j)
      if (prof.recursive_calls[j] != (used.count(j) ? 4u : 0u))
        return built.program.name + ": calls per used input != 4";
    std::vector<std::vector<u128>> pts;
    for (int k = 0; k < 50; ++k) {
      std::vector<u128> x(n);
      for (auto& v : x) v = rng.below(field.modulus());
      pts.push_back(std::move(x));
    }
    std::string fail = check_clean_sweep(built, pts, 1, cases);
    if (!fail.empty()) return fail;
    if (cases % 20 == 0) collect("c4_waring" + std::to_string(cases), built.program);
    ++cases;
  }
  return "";
}

std::string criterion5_boolean() {
  // named symmetric functions at n = 10
  uint32_t n = 10;
  PrimeField field(11);
  std::vector<std::pair<std::string, std::vector<int>>> functions;
  std::vector<int> truth_or(n + 1, 1), truth_and(n + 1, 0), truth_maj(n + 1, 0);
  truth_or[0] = 0;
  truth_and[n] = 1;
  for (uint32_t k = 0; k <= n; ++k) truth_maj[k] = k > n / 2 ? 1 : 0;
  functions.push_back({"or", truth_or});
  functions.push_back({"and", truth_and});
  functions.push_back({"maj", truth_maj});
  Rng rng(505);
  std::vector<int> truth_rand(n + 1);
  for (auto& b : truth_rand) b = int(rng.below(2));
  functions.push_back({"random", truth_rand});

  auto sweep10 = boolean_sweep(n);
  for (auto& [name, truth] : functions) {
    BuiltProgram built = build_symmetric_bool(truth, field);
    ResourceProfile prof = resources(built.program);
    for (auto c : prof.recursive_calls)
      if (c != 4) return "symmetric " + name + ": calls per input != 4";
    std::string fail = check_clean_sweep(built, sweep10, 1, 55);
    if (!fail.empty()) return "symmetric " + name + ": " + fail;
  }
  collect("c5_maj10", build_symmetric_bool(truth_maj, field).program);

  // representation route: OR_10 and random represented functions on n = 8
  {
    std::vector<IntPoly::Term> ts;
    for (uint32_t j = 0; j < n; ++j) ts.push_back({1, Monomial::var(j)});
    IntPoly orp(n, std::move(ts));
    BuiltProgram built = build_bool_rep(orp, field);
    if (resources(built.program).max_calls_per_input() > 64)
      return "bool_rep or10: calls exceed 64";
    std::string fail = check_clean_sweep(built, sweep10, 1, 56);
    if (!fail.empty()) return "bool_rep or10: " + fail;
    collect("c5_or10_rep", built.program);
  }
  auto sweep8 = boolean_sweep(8);
  for (int rcase = 0; rcase < 3; ++rcase) {
    uint32_t nv = 8;
    std::vector<IntPoly::Term> ts;
    uint32_t terms = 2 + uint32_t(rng.below(4));
    i128 magnitude = 0;
    for (uint32_t t = 0; t < terms; ++t) {
      Monomial m;
      uint32_t deg = 1 + uint32_t(rng.below(3));
      for (uint32_t k = 0; k < deg; ++k) m = m * Monomial::var(uint32_t(rng.below(nv)));
      i128 c = i128(1 + rng.below(3)) * (rng.below(2) ? 1 : -1);
      magnitude += c < 0 ? -c : c;
      ts.push_back({c, m});
    }
    IntPoly p(nv, std::move(ts));
    if (p.is_zero()) continue;
    PrimeField fp(next_prime(std::max<u128>(u128(magnitude), p.degree()) + 1));
    BuiltProgram built;
    try {
      built = build_bool_rep(p, fp);
    } catch (const std::invalid_argument&) {
      continue;  // mod-p zero set differs: not a representation, skip
    }
    if (resources(built.program).max_calls_per_input() > 64)
      return "bool_rep random: calls exceed 64";
    std::string fail = check_clean_sweep(built, sweep8, 1, 57 + rcase);
    if (!fail.empty()) return "bool_rep random: " + fail;
  }
  return "";
}

std::string criterion6_interpolation() {
  Rng rng(606);
  for (uint32_t d = 0; d <= 4; ++d)
    for (u128 p : {u128(7), u128(11)}) {
      if (u128(d) + 2 > p) continue;
      PrimeField field(p);
      uint32_t n = 1 + uint32_t(rng.below(3));
      SparsePoly poly(field, n);
      if (d > 0) poly = testutil::random_poly(rng, field, n, d - 1, 3, false);
      std::vector<SparsePoly::Term> ts = poly.terms();
      ts.push_back({1 + rng.below(p - 1), Monomial::var(0, d)});  // pin the degree
      poly = SparsePoly(field, n, std::move(ts));
      BuiltProgram built = build_interpolation_eval(poly);
      ResourceProfile prof = resources(built.program);
      for (auto c : prof.recursive_calls)
        if (c != uint64_t(d) + 2)
          return built.program.name + ": accesses per input != d+2";
      uint64_t runs = 0;
      bool in_run = false;
      for (auto& ins : built.program.instructions) {
        bool acc = std::holds_alternative<InputAccess>(ins);
        if (acc && !in_run) ++runs;
        in_run = acc;
      }
      if (runs != uint64_t(d) + 2)
        return built.program.name + ": broadcast rounds != (d+1 shifts + restore)";
      std::vector<std::vector<u128>> pts;
      for (int k = 0; k < 40; ++k) {
        std::vector<u128> x(n);
        for (auto& v : x) v = rng.below(p);
        pts.push_back(std::move(x));
      }
      std::string fail = check_clean_sweep(built, pts, 2, d * 13 + uint64_t(p));
      if (!fail.empty()) return fail;
      if (d == 2) collect("c6_interp_p" + to_string(p), built.program);
    }
  return "";
}

std::string criterion7_circuits() {
  Rng rng(707);
  std::vector<Circuit> corpus;
  uint32_t depth_seen[7] = {0, 0, 0, 0, 0, 0, 0};
  while (corpus.size() < 52) {
    uint32_t n = 3 + uint32_t(rng.below(6));          // 3..8
    uint32_t size = 6 + uint32_t(rng.below(35));      // 6..40
    uint32_t depth_cap = 2 + uint32_t(rng.below(5));  // 2..6
    Circuit c = testutil::random_circuit(rng, n, size, depth_cap, 3);
    if (c.depth() < 2) continue;
    // keep block polynomials desk-sized so every (circuit, d) combo runs
    bool ok = true;
    for (uint32_t d = 1; d <= 3 && ok; ++d) {
      BlockCircuit plan = merge_layers(c, d);
      for (auto& layer : plan.layers)
        for (auto& sg : layer) {
          IntPoly poly = block_to_poly(sg.frag);
          if (poly.unit_term_count() > 40) ok = false;
        }
    }
    if (!ok) continue;
    ++depth_seen[c.depth()];
    corpus.push_back(std::move(c));
  }
  if (depth_seen[5] + depth_seen[6] == 0) return "corpus lacks deep circuits";

  uint64_t combos = 0;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const Circuit& c = corpus[i];
    uint32_t ell = std::max<uint32_t>(2, c.max_or_fanin());
    for (uint32_t d = 1; d <= 3; ++d) {
      CompiledCircuit cc = compile_circuit(c, d, std::nullopt, 30000);
      // Lemma bounds for every block polynomial
      uint64_t deg_bound = uint64_t(1) << d;
      for (auto& layer : cc.layers)
        for (auto& poly : layer.polys) {
          if (poly.degree() > deg_bound)
            return "circuit " + std::to_string(i) + ": block degree exceeds 2^d";
          u128 tb = 1;
          for (uint64_t e = 0; e < deg_bound; ++e) tb *= ell;
          if (poly.unit_term_count() > tb)
            return "circuit " + std::to_string(i) + ": block terms exceed ell^(2^d)";
        }
      if (cc.stack_profile.max_calls_per_input() > cc.call_bound)
        return "circuit " + std::to_string(i) + ": calls exceed 64^layers";
      CircuitCheckOptions opts;
      opts.seed = i * 10 + d;
      opts.taus_per_point = 1;
      opts.extra_trials = 4;
      auto report = verify_compiled(c, cc, opts);
      if (!report.pass)
        return "circuit " + std::to_string(i) + " d=" + std::to_string(d) + ": " +
               report.detail;
      if (cc.flat && i % 17 == 0 && d == 2)
        collect("c7_circuit" + std::to_string(i), *cc.flat);
      ++combos;
    }
  }
  if (combos < 150) return "not enough circuit/d combinations";
  return "";
}

std::string criterion8_matpow() {
  Rng rng(808);
  auto matrices_for = [&](uint32_t n, u128 p) {
    std::vector<std::vector<u128>> ms;
    std::vector<u128> zero(size_t(n) * n, 0), eye(size_t(n) * n, 0);
    for (uint32_t i = 0; i < n; ++i) eye[size_t(i) * n + i] = 1;
    ms.push_back(zero);
    ms.push_back(eye);
    for (uint32_t s = 1; s < n; ++s) {  // cyclic permutation matrices
      std::vector<u128> perm(size_t(n) * n, 0);
      for (uint32_t i = 0; i < n; ++i) perm[size_t(i) * n + (i + s) % n] = 1;
      ms.push_back(std::move(perm));
    }
    for (int t = 0; t < 30; ++t) {
      std::vector<u128> m(size_t(n) * n);
      for (auto& v : m) v = rng.below(p);
      ms.push_back(std::move(m));
    }
    return ms;
  };

  auto check = [&](const BuiltProgram& built, uint32_t n, u128 p, uint64_t seed) {
    auto ms = matrices_for(n, p);
    return check_clean_sweep(built, ms, 1, seed);
  };

  for (uint32_t n : {2u, 3u}) {
    for (u128 p : {u128(5), u128(7)}) {
      // small: d < p, exactly 4 calls to M
      for (uint32_t d = 1; u128(d) < p; ++d) {
        BuiltProgram built = build_matpow_small(n, p, d);
        ResourceProfile prof = resources(built.program);
        for (auto c : prof.recursive_calls)
          if (c != 4) return built.program.name + ": calls to M != 4";
        std::string fail = check(built, n, p, n * 100 + d);
        if (!fail.empty()) return fail;
        if (d <= 3)
          collect("c8_small_n" + std::to_string(n) + "_d" + std::to_string(d),
                  built.program);
      }
      // lifted: any d within the term budget (n^(d-1) paths per entry)
      uint32_t lifted_max = n == 2 ? 13 : 8;
      for (uint32_t d = 2; d <= std::min(16u, lifted_max); ++d) {
        LiftedMatpow lifted = build_matpow_lifted(n, p, d);
        ResourceProfile prof = resources(lifted.built.program);
        for (auto c : prof.recursive_calls)
          if (c != 4) return lifted.built.program.name + ": calls to M != 4";
        std::string fail = check(lifted.built, n, p, n * 200 + d);
        if (!fail.empty()) return fail;
        if (d <= 4)
          collect("c8_lifted_n" + std::to_string(n) + "_d" + std::to_string(d),
                  lifted.built.program);
      }
      // boosted: all d up to 16, all bases
      for (uint32_t delta : {2u, 3u, 4u}) {
        for (uint32_t d = 2; d <= 16; ++d) {
          BoostedMatpow boosted = build_matpow_boosted(n, p, d, delta);
          if (double(boosted.measured_calls) > 2.0 * boosted.lemma_bound)
            return boosted.built.program.name + ": calls exceed twice the boosting bound";
          if (!boosted.built.bounds_pass())
            return boosted.built.program.name + ": resource bound failed";
          std::string fail = check(boosted.built, n, p, n * 300 + d * 7 + delta);
          if (!fail.empty()) return fail;
          if (d == 5 && delta == 2)
            collect("c8_boosted_n" + std::to_string(n) + "_p" + to_string(p),
                    boosted.built.program);
        }
      }
    }
  }
  return "";
}

std::string criterion9_roundtrips() {
  if (g_corpus.size() < 10) return "round-trip corpus unexpectedly small";
  Rng rng(909);
  for (auto& entry : g_corpus) {
    const Program& p = entry.program;
    std::string text = serialize(p);
    Program parsed = parse_program(text);
    if (!(parsed == p)) return entry.name + ": serialize/parse round trip differs";
    if (serialize(parsed) != text) return entry.name + ": serialization not canonical";
    if (!(resources(parsed) == resources(p))) return entry.name + ": profile drifted";
    Program inv = invert(p);
    const PrimeField& f = p.input_field();
    for (int t = 0; t < 100; ++t) {
      RegisterState init = random_state(p, rng);
      std::vector<u128> x(p.num_inputs);
      for (auto& v : x) v = rng.below(f.modulus());
      auto fwd = execute_prevalidated(p, init, x);
      auto back = execute_prevalidated(inv, fwd.state, x);
      if (!(back.state == init)) return entry.name + ": inverse failed to restore";
    }
  }
  return "";
}

std::string criterion10_space_report() {
  Rng rng(1010);
  for (int t = 0; t < 200; ++t) {
    uint64_t tt = 1 + uint64_t(rng.below(1 << 20));
    uint64_t s = 1 + uint64_t(rng.below(1 << 12));
    uint64_t n = 1 + uint64_t(rng.below(1 << 10));
    uint64_t r = 2 + uint64_t(rng.below(1 << 16));
    SpaceReport rep{tt, s, n, u128(r)};
    // independent recomputation with long-double logarithms
    long double pure = logl((long double)tt) / logl(2.0L) +
                       logl((long double)n) / logl(2.0L) +
                       logl((long double)r) / logl(2.0L);
    long double cat = (long double)s * (logl((long double)r) / logl(2.0L));
    if (std::fabs(double(pure) - rep.pure_space_units()) > 1e-9)
      return "pure-space expression mismatch";
    if (std::fabs(double(cat) - rep.catalytic_space_units()) > 1e-9)
      return "catalytic-space expression mismatch";
  }
  std::istringstream in;
  std::ostringstream out, err;
  int code = run_cli({"space-report", "--t", "16", "--s", "8", "--n", "4", "--field", "7"},
                     in, out, err);
  if (code != 0) return "space-report exited " + std::to_string(code);
  if (out.str().find("8.81") == std::string::npos ||
      out.str().find("22.46") == std::string::npos)
    return "space-report values differ from the worked example";
  return "";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<std::string()> run;
    double limit_seconds;
  };
  std::vector<Criterion> criteria = {
      {1, "univariate programs: counts, cleanness, oracle", criterion1_fig1, 5},
      {2, "univariate set variant", criterion2_set, 60},
      {3, "composition counts and composed powering", criterion3_composition, 60},
      {4, "homogeneous linear-form builder", criterion4_waring, 60},
      {5, "boolean builders, exhaustive truth tables", criterion5_boolean, 60},
      {6, "interpolation evaluator rounds", criterion6_interpolation, 60},
      {7, "circuit pipeline over the corpus", criterion7_circuits, 300},
      {8, "matrix powering (small/lifted/boosted)", criterion8_matpow, 300},
      {9, "IR round trips and inverse restoration", criterion9_roundtrips, 120},
      {10, "space report expressions", criterion10_space_report, 10},
  };

  int failures = 0;
  for (auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string fail;
    try {
      fail = c.run();
    } catch (const std::exception& e) {
      fail = std::string("exception: ") + e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_budget = secs <= c.limit_seconds;
    bool pass = fail.empty() && in_budget;
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name
              << " (" << std::fixed << std::setprecision(2) << secs << "s";
    if (!in_budget) std::cout << ", over the " << c.limit_seconds << "s budget";
    std::cout << ")";
    if (!fail.empty()) std::cout << " -- " << fail;
    std::cout << "\n" << std::flush;
    if (!pass) ++failures;
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed"
                              : "acceptance: " + std::to_string(failures) + " failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
