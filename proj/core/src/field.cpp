#include "cleanreg/field.hpp"

namespace cleanreg {

PrimeField::PrimeField(u128 p) : p_(p) {
  if (p > kMaxModulus)
    throw std::overflow_error("modulus exceeds supported magnitude: " + to_string(p));
  if (!is_prime(p))
    throw std::invalid_argument("modulus is not prime: " + to_string(p));
  wide_ = p > u128(UINT64_MAX);
}

u128 PrimeField::mul_wide(u128 a, u128 b) const {
  // p < 2^88 here, so with b = b1*2^40 + b0 every intermediate fits in
  // 128 bits: a*b1 < 2^88 * 2^40 = 2^128 is avoided since a < p <= 2^80.
  const u128 mask40 = (u128(1) << 40) - 1;
  u128 b1 = b >> 40;
  u128 b0 = b & mask40;
  u128 hi = (a * b1) % p_;         // a < 2^80, b1 < 2^40
  u128 r = (hi << 40) % p_;        // hi < 2^80
  return (r + (a * b0) % p_) % p_; // a*b0 < 2^120
}

u128 PrimeField::pow(u128 base, u128 exp) const {
  u128 r = reduce(1);
  u128 b = reduce(base);
  while (exp > 0) {
    if (exp & 1) r = mul(r, b);
    b = mul(b, b);
    exp >>= 1;
  }
  return r;
}

u128 PrimeField::inv(u128 a) const {
  a = reduce(a);
  if (a == 0) throw std::domain_error("inverse of zero");
  return pow(a, p_ - 2);  // Fermat; p_ is prime
}

namespace {

u128 mulmod(u128 a, u128 b, u128 m) {
  if (m <= u128(UINT64_MAX)) return (a * b) % m;
  const u128 mask40 = (u128(1) << 40) - 1;
  u128 b1 = b >> 40;
  u128 b0 = b & mask40;
  u128 hi = (a * b1) % m;
  u128 r = (hi << 40) % m;
  return (r + (a * b0) % m) % m;
}

u128 powmod(u128 base, u128 exp, u128 m) {
  u128 r = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(u128 n) {
  if (n < 2) return false;
  for (u128 q : {u128(2), u128(3), u128(5), u128(7), u128(11), u128(13)}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  // Deterministic Miller-Rabin: this witness set decides primality for all
  // n < 3.3 * 10^24, which covers the supported modulus range.
  u128 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (u128 a : {u128(2), u128(3), u128(5), u128(7), u128(11), u128(13),
                 u128(17), u128(19), u128(23), u128(29), u128(31), u128(37)}) {
    if (a % n == 0) continue;
    u128 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

u128 next_prime(u128 lower_bound) {
  if (lower_bound < 2) throw std::invalid_argument("next_prime: bound must be >= 2");
  u128 c = lower_bound;
  if (c == 2) return 2;
  if ((c & 1) == 0) ++c;
  for (;; c += 2) {
    if (c > kMaxModulus)
      throw std::overflow_error("next_prime: result exceeds supported modulus magnitude");
    if (is_prime(c)) return c;
  }
}

}  // namespace cleanreg
