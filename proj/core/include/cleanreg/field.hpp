#pragma once

#include <stdexcept>

#include "cleanreg/ints.hpp"

namespace cleanreg {

// Largest supported modulus: lifted moduli for desk-scale matrix powering
// stay well below this.
inline constexpr u128 kMaxModulus = u128(1) << 80;

bool is_prime(u128 n);

// Smallest prime >= lower_bound. Throws std::overflow_error if the result
// would exceed kMaxModulus.
u128 next_prime(u128 lower_bound);

// Arithmetic in F_p for a fixed prime p. Values are least non-negative
// residues. Copyable value type; all operations are const.
class PrimeField {
 public:
  PrimeField() : p_(2) {}
  explicit PrimeField(u128 p);

  u128 modulus() const { return p_; }

  u128 reduce(u128 v) const { return v % p_; }
  u128 reduce_int(i128 v) const {
    i128 r = v % i128(p_);
    if (r < 0) r += i128(p_);
    return u128(r);
  }

  u128 add(u128 a, u128 b) const {
    u128 s = a + b;  // a,b < p <= 2^80, no overflow
    return s >= p_ ? s - p_ : s;
  }
  u128 sub(u128 a, u128 b) const { return a >= b ? a - b : a + p_ - b; }
  u128 neg(u128 a) const { return a == 0 ? 0 : p_ - a; }

  u128 mul(u128 a, u128 b) const {
    if (!wide_) return (a * b) % p_;
    return mul_wide(a, b);
  }

  u128 pow(u128 base, u128 exp) const;

  // Multiplicative inverse; throws std::domain_error on zero.
  u128 inv(u128 a) const;

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }
  bool operator!=(const PrimeField& o) const { return p_ != o.p_; }

 private:
  u128 mul_wide(u128 a, u128 b) const;

  u128 p_;
  bool wide_ = false;  // p >= 2^64: products need the split path
};

// A residue tagged with its field, for call sites where mixing moduli is a
// real hazard. Hot paths use PrimeField with raw u128 values instead.
struct FieldElement {
  PrimeField field;
  u128 value = 0;

  FieldElement() = default;
  FieldElement(PrimeField f, u128 v) : field(f), value(f.reduce(v)) {}

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    a.require_same(b);
    return {a.field, a.field.add(a.value, b.value)};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    a.require_same(b);
    return {a.field, a.field.sub(a.value, b.value)};
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    a.require_same(b);
    return {a.field, a.field.mul(a.value, b.value)};
  }
  FieldElement operator-() const { return {field, field.neg(value)}; }
  FieldElement inverse() const { return {field, field.inv(value)}; }
  FieldElement pow(u128 e) const { return {field, field.pow(value, e)}; }

  bool operator==(const FieldElement& o) const {
    return field == o.field && value == o.value;
  }

  void require_same(const FieldElement& o) const {
    if (field != o.field)
      throw std::invalid_argument("field elements with mixed moduli");
  }
};

}  // namespace cleanreg
