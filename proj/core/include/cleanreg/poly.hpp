#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cleanreg/field.hpp"

namespace cleanreg {

// Product of variables with positive exponents, kept sorted by variable.
struct Monomial {
  std::vector<std::pair<uint32_t, uint32_t>> factors;  // (var, exp), exp > 0

  static Monomial one() { return {}; }
  static Monomial var(uint32_t v, uint32_t e = 1) {
    Monomial m;
    if (e > 0) m.factors.push_back({v, e});
    return m;
  }

  void normalize();
  uint32_t total_degree() const;
  uint32_t exponent_of(uint32_t v) const;
  Monomial operator*(const Monomial& o) const;

  bool operator==(const Monomial& o) const { return factors == o.factors; }
  // Lexicographic on the dense exponent vector; the term with the larger
  // exponent at the first differing variable sorts first.
  bool lex_before(const Monomial& o) const;
};

// Multivariate polynomial over a prime field. Canonical form: no zero
// coefficients, no duplicate monomials, terms in lex order.
class SparsePoly {
 public:
  struct Term {
    u128 coeff;
    Monomial mono;
    bool operator==(const Term& o) const = default;
  };

  SparsePoly() : field_(PrimeField(2)), num_vars_(0) {}
  SparsePoly(PrimeField field, uint32_t num_vars) : field_(field), num_vars_(num_vars) {}
  SparsePoly(PrimeField field, uint32_t num_vars, std::vector<Term> terms);

  static SparsePoly constant(PrimeField field, uint32_t num_vars, u128 c);
  static SparsePoly variable(PrimeField field, uint32_t num_vars, uint32_t v);

  const PrimeField& field() const { return field_; }
  uint32_t num_vars() const { return num_vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  uint32_t degree() const;  // 0 for the zero polynomial
  bool is_homogeneous() const;
  bool is_univariate_in(uint32_t v) const;
  u128 coeff_of(const Monomial& m) const;

  SparsePoly add(const SparsePoly& o) const;
  SparsePoly sub(const SparsePoly& o) const;
  SparsePoly negate() const;
  SparsePoly scale(u128 c) const;
  SparsePoly mul(const SparsePoly& o) const;
  SparsePoly pow(uint32_t e) const;
  SparsePoly with_num_vars(uint32_t n) const;   // grow only
  SparsePoly remap_vars(const std::vector<uint32_t>& map, uint32_t new_num_vars) const;

  u128 eval(std::span<const u128> x) const;

  std::vector<SparsePoly> homogeneous_parts() const;

  // Text form, e.g. "3*x1^2*x2 + 4". A custom namer overrides the default
  // 1-based x<i> variable names.
  std::string render() const;
  std::string render(const std::function<std::string(uint32_t)>& namer) const;

  bool operator==(const SparsePoly& o) const {
    return field_ == o.field_ && num_vars_ == o.num_vars_ && terms_ == o.terms_;
  }

 private:
  PrimeField field_;
  uint32_t num_vars_;
  std::vector<Term> terms_;
};

// Parses the polynomial grammar: terms joined by '+', factors by '*',
// '^' for exponents, variables resolved by the callback (default: x<i>,
// 1-based). allow_minus additionally accepts '-' separators and a leading
// sign, for integer-coefficient inputs.
SparsePoly parse_poly(const std::string& text, PrimeField field, uint32_t num_vars,
                      bool allow_minus = false);
SparsePoly parse_poly(const std::string& text, PrimeField field, uint32_t num_vars,
                      bool allow_minus,
                      const std::function<uint32_t(const std::string&)>& var_resolver);

// Polynomial with integer coefficients: circuit block polynomials and
// Boolean-function representations live over Z before any field is chosen.
class IntPoly {
 public:
  struct Term {
    i128 coeff;
    Monomial mono;
    bool operator==(const Term& o) const = default;
  };

  IntPoly() : num_vars_(0) {}
  explicit IntPoly(uint32_t num_vars) : num_vars_(num_vars) {}
  IntPoly(uint32_t num_vars, std::vector<Term> terms);

  static IntPoly constant(uint32_t num_vars, i128 c);
  static IntPoly variable(uint32_t num_vars, uint32_t v);

  uint32_t num_vars() const { return num_vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  uint32_t degree() const;
  // Number of terms counted with coefficient multiplicity: the paper-side
  // "t" for representations and term-count bounds.
  u128 unit_term_count() const;

  IntPoly add(const IntPoly& o) const;
  IntPoly mul(const IntPoly& o) const;
  IntPoly with_num_vars(uint32_t n) const;
  IntPoly remap_vars(const std::vector<uint32_t>& map, uint32_t new_num_vars) const;

  i128 eval(std::span<const i128> x) const;
  SparsePoly to_field(PrimeField field) const;

  std::string render() const;

  bool operator==(const IntPoly& o) const = default;

 private:
  uint32_t num_vars_;
  std::vector<Term> terms_;
};

IntPoly parse_int_poly(const std::string& text, uint32_t num_vars);

// Waring decomposition: P = sum_i alpha_i * (sum_j beta_ij x_j)^degree.
struct LinearForm {
  u128 alpha;
  std::vector<u128> betas;
  bool operator==(const LinearForm& o) const = default;
};

struct LinearFormDecomposition {
  PrimeField field;
  uint32_t num_vars = 0;
  uint32_t degree = 0;
  std::vector<LinearForm> forms;

  SparsePoly expand() const;  // symbolic reconstruction
};

// Exact polarization of a single multilinear monomial x_{v1}...x_{vd} with
// distinct variables: exactly 2^d - 1 forms. Requires d < p.
LinearFormDecomposition polarize_monomial(const std::vector<uint32_t>& vars,
                                          uint32_t num_vars, PrimeField field);

// Per-monomial polarization of a homogeneous polynomial, with repeated
// variables handled by multiplicity merging and identical linear forms
// merged across monomials. Form count stays <= t*(2^d - 1).
LinearFormDecomposition waring_decompose(const SparsePoly& p, uint32_t degree);

// Unique polynomial of degree < |points| through the given points.
SparsePoly interpolate_univariate(const std::vector<std::pair<u128, u128>>& points,
                                  PrimeField field);

// Weights c_k with sum_k c_k * lambda_k^j = [j == e] for 0 <= j <= e;
// applied to samples g(lambda_k) they extract g's degree-e coefficient.
std::vector<u128> extraction_weights(const std::vector<u128>& lambdas,
                                     uint32_t target_degree, PrimeField field);

// C(n, k) mod p via Pascal's rule (no divisions, so small p is fine).
std::vector<std::vector<u128>> binomial_table(uint32_t n, PrimeField field);

}  // namespace cleanreg
