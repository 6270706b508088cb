#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cleanreg/builders.hpp"
#include "test_util.hpp"

using namespace cleanreg;

namespace {

// number of maximal consecutive access groups (broadcast rounds)
uint64_t access_runs(const Program& p) {
  uint64_t runs = 0;
  bool in_run = false;
  for (auto& ins : p.instructions) {
    bool is_acc = std::holds_alternative<InputAccess>(ins);
    if (is_acc && !in_run) ++runs;
    in_run = is_acc;
  }
  return runs;
}

void expect_clean(const BuiltProgram& built, uint64_t trials = 150, uint64_t seed = 1) {
  VerifyOptions opts;
  opts.trials = trials;
  opts.seed = seed;
  opts.domain = built.domain;
  opts.readout_mod = built.readout_mod;
  auto report = verify_clean(built.program, built.oracle, opts);
  if (!report.pass && report.counterexample)
    MESSAGE(built.program.name, ": ", report.counterexample->what);
  CHECK(report.pass);
}

std::vector<u128> run_deltas(const BuiltProgram& built, std::vector<u128> x,
                             uint64_t seed = 9) {
  Rng rng(seed);
  RegisterState init = random_state(built.program, rng);
  auto res = execute(built.program, init, x);
  return output_deltas(built.program, init, res.state, built.readout_mod);
}

}  // namespace

TEST_CASE("univariate builder matches the Fig.-1 counts") {
  PrimeField f7(7);
  BuiltProgram deg3 = build_univariate(parse_poly("x1^3 + x1^2 + x1 + 1", f7, 1));
  ResourceProfile prof = resources(deg3.program);
  CHECK(prof.recursive_calls == std::vector<uint64_t>{4});
  CHECK(prof.total_registers() == 5);
  CHECK(prof.basic_instructions == 4 * 3 + 1);  // dense coefficients: 4n+1 tally
  CHECK(deg3.bounds_pass());
  expect_clean(deg3);
}

TEST_CASE("univariate builder: constants and values") {
  PrimeField f7(7);
  BuiltProgram c = build_univariate(parse_poly("4", f7, 1));
  ResourceProfile prof = resources(c.program);
  CHECK(prof.recursive_calls == std::vector<uint64_t>{4});
  CHECK(prof.total_registers() == 2);
  for (u128 x = 0; x < 7; ++x) CHECK(run_deltas(c, {x}) == std::vector<u128>{4});
  expect_clean(c);

  BuiltProgram sq = build_univariate(parse_poly("x1^2 + 1", f7, 1));
  CHECK(run_deltas(sq, {3}) == std::vector<u128>{3});
}

TEST_CASE("univariate set builder") {
  PrimeField f11(11);
  BuiltProgram two = build_univariate_set(
      {parse_poly("x1^2", f11, 1), parse_poly("x1^3", f11, 1)});
  ResourceProfile prof = resources(two.program);
  CHECK(prof.recursive_calls == std::vector<uint64_t>{4});
  CHECK(prof.total_registers() == 3 + 1 + 2);  // n + 1 + ell
  CHECK(run_deltas(two, {2}) == std::vector<u128>{4, 8});
  expect_clean(two);

  PrimeField f5(5);
  BuiltProgram dup =
      build_univariate_set({parse_poly("x1", f5, 1), parse_poly("x1", f5, 1)});
  for (u128 x = 0; x < 5; ++x) CHECK(run_deltas(dup, {x}) == std::vector<u128>{x, x});
  CHECK(resources(dup.program).total_registers() == 1 + 1 + 2);

  CHECK_THROWS_AS(build_univariate_set({}), std::invalid_argument);
}

TEST_CASE("waring builder: products of variables") {
  PrimeField f5(5);
  BuiltProgram xy = build_waring(parse_poly("x1*x2", f5, 2));
  ResourceProfile prof = resources(xy.program);
  CHECK(prof.recursive_calls == std::vector<uint64_t>{4, 4});
  CHECK(run_deltas(xy, {2, 3}) == std::vector<u128>{1});  // 6 mod 5
  expect_clean(xy);

  BuiltProgram pure = build_waring(parse_poly("3*x1^4", f5, 1));
  // single form: same register count as the univariate program
  CHECK(resources(pure.program).total_registers() == 4 + 2);
  expect_clean(pure);

  PrimeField f7(7);
  BuiltProgram sum = build_waring(parse_poly("x1*x2 + x3*x4", f7, 4));
  CHECK(run_deltas(sum, {1, 2, 3, 4}) == std::vector<u128>{0});  // 2+12 = 14
  CHECK(resources(sum.program).recursive_calls ==
        std::vector<uint64_t>{4, 4, 4, 4});
  expect_clean(sum);

  CHECK_THROWS_AS(build_waring(parse_poly("x1^6", PrimeField(5), 1)),
                  std::domain_error);
}

TEST_CASE("waring builder on random homogeneous polynomials") {
  Rng rng(99);
  int cases = 0;
  while (cases < 30) {
    u128 ps[] = {5, 7, 11};
    PrimeField field(ps[rng.below(3)]);
    uint32_t n = 2 + uint32_t(rng.below(3));
    uint32_t d = 1 + uint32_t(rng.below(4));
    if (u128(d) >= field.modulus()) continue;
    SparsePoly p = testutil::random_poly(rng, field, n, d, 3, true);
    if (p.is_zero()) continue;
    BuiltProgram built = build_waring(p);
    ResourceProfile prof = resources(built.program);
    std::set<uint32_t> used;
    for (auto& t : p.terms())
      for (auto& [v, e] : t.mono.factors) used.insert(v);
    for (uint32_t j = 0; j < n; ++j)
      CHECK(prof.recursive_calls[j] == (used.count(j) ? 4 : 0));
    expect_clean(built, 40, cases);
    ++cases;
  }
}

TEST_CASE("general builder without lifting") {
  PrimeField f5(5);
  BuiltProgram built = build_general(parse_poly("x1*x2 + x3", f5, 3), false);
  CHECK(run_deltas(built, {2, 3, 4}) == std::vector<u128>{0});
  CHECK(resources(built.program).recursive_calls == std::vector<uint64_t>{4, 4, 4});
  expect_clean(built);

  BuiltProgram zero = build_general(SparsePoly(f5, 2), false);
  CHECK(run_deltas(zero, {1, 2}) == std::vector<u128>{0});

  CHECK_THROWS_AS(build_general(parse_poly("x1^6", f5, 1), false), std::domain_error);
}

TEST_CASE("general builder with field lifting") {
  PrimeField f5(5);
  BuiltProgram built = build_general(parse_poly("x1^6", f5, 1), true);
  // q = next_prime(max(2^1 * 5^7, 7, 6)) = next_prime(156250)
  CHECK(built.program.banks[0].field.modulus() == next_prime(2 * 78125));  // 2^1 * 5^7
  CHECK(built.readout_mod == u128(5));
  for (u128 x = 0; x < 5; ++x) {
    u128 expect = testutil::pow_mod_loop(x, 6, 5);
    CHECK(run_deltas(built, {x}) == std::vector<u128>{expect});
  }
  expect_clean(built, 60);
}

TEST_CASE("lift correctness on random polynomials with d >= p") {
  Rng rng(4242);
  int cases = 0;
  while (cases < 50) {
    u128 ps[] = {3, 5};
    PrimeField base(ps[rng.below(2)]);
    uint32_t n = 1 + uint32_t(rng.below(2));
    uint32_t d = uint32_t(base.modulus()) + uint32_t(rng.below(3));
    SparsePoly p = testutil::random_poly(rng, base, n, d, 2, false);
    BuiltProgram built = build_general(p, true);
    std::vector<u128> x;
    for (uint32_t j = 0; j < n; ++j) x.push_back(rng.below(base.modulus()));
    // independent route: integer evaluation reduced mod p
    std::vector<i128> xi(x.begin(), x.end());
    i128 direct = 0;
    for (auto& term : p.terms()) {
      i128 v = i128(term.coeff);
      for (auto& [var, e] : term.mono.factors)
        for (uint32_t i = 0; i < e; ++i) v *= xi[var];
      direct += v;
    }
    u128 expect = base.reduce_int(direct);
    CHECK(run_deltas(built, x, cases) == std::vector<u128>{expect});
    ++cases;
  }
}

TEST_CASE("symmetric boolean builder") {
  PrimeField f5(5);
  BuiltProgram or3 = build_symmetric_bool({0, 1, 1, 1}, f5);
  CHECK(run_deltas(or3, {1, 0, 1}) == std::vector<u128>{1});
  CHECK(resources(or3.program).recursive_calls == std::vector<uint64_t>{4, 4, 4});
  expect_clean(or3);

  PrimeField f7(7);
  BuiltProgram and5 = build_symmetric_bool({0, 0, 0, 0, 0, 1}, f7);
  CHECK(run_deltas(and5, {1, 1, 1, 1, 1}) == std::vector<u128>{1});
  CHECK(run_deltas(and5, {1, 1, 0, 1, 1}) == std::vector<u128>{0});

  BuiltProgram maj3 = build_symmetric_bool({0, 0, 1, 1}, f5);
  CHECK(run_deltas(maj3, {1, 1, 0}) == std::vector<u128>{1});
  expect_clean(maj3);

  CHECK_THROWS_AS(build_symmetric_bool({0, 1, 1, 1, 1, 1}, f5), std::domain_error);
}

TEST_CASE("boolean representation builder: OR via the sum polynomial") {
  PrimeField f5(5);
  IntPoly or3 = parse_int_poly("x1 + x2 + x3", 3);
  BuiltProgram built = build_bool_rep(or3, f5);
  CHECK(run_deltas(built, {0, 0, 0}) == std::vector<u128>{0});
  CHECK(run_deltas(built, {1, 0, 1}) == std::vector<u128>{1});
  ResourceProfile prof = resources(built.program);
  for (auto c : prof.recursive_calls) CHECK(c == 64);
  expect_clean(built, 80);
}

TEST_CASE("boolean representation builder: general polynomial with signs") {
  PrimeField f7(7);
  // x1 + x2 - 2*x1*x2 is the XOR indicator on {0,1}^2
  IntPoly xorp = parse_int_poly("x1 + x2 - 2*x1*x2", 2);
  BuiltProgram built = build_bool_rep(xorp, f7);
  CHECK(run_deltas(built, {0, 0}) == std::vector<u128>{0});
  CHECK(run_deltas(built, {1, 0}) == std::vector<u128>{1});
  CHECK(run_deltas(built, {0, 1}) == std::vector<u128>{1});
  CHECK(run_deltas(built, {1, 1}) == std::vector<u128>{0});
  CHECK(resources(built.program).max_calls_per_input() <= 64);
  expect_clean(built, 60);
}

TEST_CASE("boolean representation builder rejects bad inputs") {
  PrimeField f7(7);
  // coefficient divisible by p: zero sets differ between Z and F_p
  CHECK_THROWS_AS(build_bool_rep(parse_int_poly("7*x1", 1), f7),
                  std::invalid_argument);
  // p too small for the term count
  CHECK_THROWS_AS(
      build_bool_rep(parse_int_poly("x1 + x2 + x3 + x4 + x5 + x6 + x7", 7), f7),
      std::domain_error);
}

TEST_CASE("interpolation evaluation builder") {
  PrimeField f7(7);
  BuiltProgram xy = build_interpolation_eval(parse_poly("x1*x2", f7, 2));
  CHECK(run_deltas(xy, {2, 3}) == std::vector<u128>{6});
  ResourceProfile prof = resources(xy.program);
  CHECK(prof.recursive_calls == std::vector<uint64_t>{4, 4});  // d+2 accesses
  CHECK(access_runs(xy.program) == 4);  // 3 shifts + restore
  expect_clean(xy);

  BuiltProgram lin = build_interpolation_eval(parse_poly("x1", f7, 1));
  CHECK(resources(lin.program).recursive_calls == std::vector<uint64_t>{3});
  for (u128 x = 0; x < 7; ++x) CHECK(run_deltas(lin, {x}) == std::vector<u128>{x});

  PrimeField f11(11);
  BuiltProgram xyz = build_interpolation_eval(parse_poly("x1*x2*x3", f11, 3));
  CHECK(run_deltas(xyz, {1, 2, 3}) == std::vector<u128>{6});
  CHECK(access_runs(xyz.program) == 5);
  expect_clean(xyz);

  // non-homogeneous input exercises the auxiliary always-1 register
  BuiltProgram mixed = build_interpolation_eval(parse_poly("x1*x2 + x1 + 4", f11, 2));
  expect_clean(mixed);

  CHECK_THROWS_AS(build_interpolation_eval(parse_poly("x1^4", PrimeField(5), 1)),
                  std::domain_error);
}

TEST_CASE("exhaustive cleanness for small parameter sets") {
  PrimeField f5(5);
  BuiltProgram built = build_univariate(parse_poly("x1^2 + 3", f5, 1));
  VerifyOptions opts;
  opts.exhaustive_limit = u128(1) << 16;
  // 5^4 states * 5 inputs = 3125 points: exhaustive kicks in
  auto report = verify_clean(built.program, built.oracle, opts);
  CHECK(report.pass);
  CHECK(report.exhaustive);
}
