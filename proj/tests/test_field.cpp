#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cleanreg/field.hpp"
#include "test_util.hpp"

using namespace cleanreg;

TEST_CASE("inverse agrees with exhaustive search in F_7") {
  PrimeField f7(7);
  // oracle: the unique b with 3*b = 1 (mod 7)
  u128 expect = 0;
  for (u128 b = 1; b < 7; ++b)
    if ((3 * b) % 7 == 1) expect = b;
  CHECK(expect == 5);
  CHECK(f7.inv(3) == expect);
  CHECK(f7.inv(1) == 1);
}

TEST_CASE("pow matches the repeated-multiplication oracle") {
  PrimeField f7(7);
  CHECK(testutil::pow_mod_loop(2, 10, 7) == 2);
  CHECK(f7.pow(2, 10) == 2);
  for (u128 b = 0; b < 7; ++b)
    for (uint64_t e = 0; e < 12; ++e)
      CHECK(f7.pow(b, e) == testutil::pow_mod_loop(b, e, 7));
}

TEST_CASE("field ops agree with integer arithmetic for p <= 13") {
  for (u128 p : {u128(2), u128(3), u128(5), u128(7), u128(11), u128(13)}) {
    PrimeField f(p);
    for (u128 a = 0; a < p; ++a)
      for (u128 b = 0; b < p; ++b) {
        CHECK(f.add(a, b) == (a + b) % p);
        CHECK(f.sub(a, b) == (a + p - b) % p);
        CHECK(f.mul(a, b) == (a * b) % p);
        if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
      }
  }
}

TEST_CASE("errors: inverse of zero and mixed moduli") {
  PrimeField f7(7);
  CHECK_THROWS_AS(f7.inv(0), std::domain_error);
  FieldElement a(PrimeField(7), 3), b(PrimeField(11), 3);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK((FieldElement(f7, 3) * FieldElement(f7, 5)).value == 1);
}

TEST_CASE("wide moduli multiply without overflow") {
  // q just above 2^70; (q-1)^2 overflows 128 bits without the split path
  u128 q = next_prime((u128(1) << 70) + 1);
  PrimeField f(q);
  u128 a = q - 2, b = q - 3;
  // (q-2)(q-3) = q^2 - 5q + 6 = 6 (mod q)
  CHECK(f.mul(a, b) == 6 % q);
  CHECK(f.mul(f.inv(a), a) == 1);
  CHECK(f.pow(2, 200) == f.mul(f.pow(2, 100), f.pow(2, 100)));
}

TEST_CASE("next_prime examples") {
  // oracle: trial division over the candidate range
  for (uint64_t c = 14; c <= 17; ++c)
    CHECK(testutil::trial_division_prime(c) == (c == 17));
  CHECK(next_prime(14) == 17);
  CHECK(next_prime(7) == 7);
  CHECK(testutil::trial_division_prime(433));
  CHECK(next_prime(432) == 433);
  CHECK(next_prime(2) == 2);
  CHECK_THROWS_AS(next_prime(1), std::invalid_argument);
}

TEST_CASE("next_prime returns the first prime (sieve sweep)") {
  auto is = testutil::sieve(1000000);
  for (uint64_t n = 2; n <= 999000; n += 7) {
    u128 p = next_prime(n);
    REQUIRE(p <= 1000000);
    for (uint64_t m = n; m < p; ++m) CHECK_FALSE(is[m]);
    CHECK(is[uint64_t(p)]);
  }
}

TEST_CASE("primality test agrees with the sieve") {
  auto is = testutil::sieve(20000);
  for (uint64_t n = 0; n <= 20000; ++n) CHECK(is_prime(n) == is[n]);
}

TEST_CASE("capacity: moduli beyond 2^80 are rejected") {
  CHECK_THROWS_AS(next_prime(kMaxModulus + 1), std::overflow_error);
  CHECK_THROWS_AS(PrimeField(kMaxModulus + 7), std::overflow_error);
}
