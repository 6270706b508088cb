#include "cleanreg/poly.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cleanreg {

void Monomial::normalize() {
  std::sort(factors.begin(), factors.end());
  std::vector<std::pair<uint32_t, uint32_t>> out;
  for (auto& [v, e] : factors) {
    if (e == 0) continue;
    if (!out.empty() && out.back().first == v)
      out.back().second += e;
    else
      out.push_back({v, e});
  }
  factors = std::move(out);
}

uint32_t Monomial::total_degree() const {
  uint32_t d = 0;
  for (auto& [v, e] : factors) d += e;
  return d;
}

uint32_t Monomial::exponent_of(uint32_t v) const {
  for (auto& [var, e] : factors)
    if (var == v) return e;
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.factors = factors;
  r.factors.insert(r.factors.end(), o.factors.begin(), o.factors.end());
  r.normalize();
  return r;
}

bool Monomial::lex_before(const Monomial& o) const {
  size_t i = 0, j = 0;
  while (i < factors.size() || j < o.factors.size()) {
    uint32_t va = i < factors.size() ? factors[i].first : UINT32_MAX;
    uint32_t vb = j < o.factors.size() ? o.factors[j].first : UINT32_MAX;
    uint32_t v = std::min(va, vb);
    uint32_t ea = va == v ? factors[i].second : 0;
    uint32_t eb = vb == v ? o.factors[j].second : 0;
    if (ea != eb) return ea > eb;
    if (va == v) ++i;
    if (vb == v) ++j;
  }
  return false;
}

namespace {

template <typename Term, typename IsZero>
void normalize_terms(std::vector<Term>& terms, const IsZero& is_zero,
                     const std::function<void(Term&, const Term&)>& accumulate) {
  for (auto& t : terms) t.mono.normalize();
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return a.mono.lex_before(b.mono);
  });
  std::vector<Term> out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().mono == t.mono)
      accumulate(out.back(), t);
    else
      out.push_back(t);
    if (!out.empty() && is_zero(out.back())) out.pop_back();
  }
  terms = std::move(out);
}

void check_var_range(const Monomial& m, uint32_t num_vars) {
  for (auto& [v, e] : m.factors)
    if (v >= num_vars) throw std::invalid_argument("monomial variable out of range");
}

}  // namespace

SparsePoly::SparsePoly(PrimeField field, uint32_t num_vars, std::vector<Term> terms)
    : field_(field), num_vars_(num_vars), terms_(std::move(terms)) {
  for (auto& t : terms_) {
    t.coeff = field_.reduce(t.coeff);
    check_var_range(t.mono, num_vars_);
  }
  normalize_terms<Term>(
      terms_, [](const Term& t) { return t.coeff == 0; },
      [this](Term& a, const Term& b) { a.coeff = field_.add(a.coeff, b.coeff); });
}

SparsePoly SparsePoly::constant(PrimeField field, uint32_t num_vars, u128 c) {
  return SparsePoly(field, num_vars, {{c, Monomial::one()}});
}

SparsePoly SparsePoly::variable(PrimeField field, uint32_t num_vars, uint32_t v) {
  return SparsePoly(field, num_vars, {{1, Monomial::var(v)}});
}

uint32_t SparsePoly::degree() const {
  uint32_t d = 0;
  for (auto& t : terms_) d = std::max(d, t.mono.total_degree());
  return d;
}

bool SparsePoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  uint32_t d = terms_[0].mono.total_degree();
  for (auto& t : terms_)
    if (t.mono.total_degree() != d) return false;
  return true;
}

bool SparsePoly::is_univariate_in(uint32_t v) const {
  for (auto& t : terms_)
    for (auto& [var, e] : t.mono.factors)
      if (var != v) return false;
  return true;
}

u128 SparsePoly::coeff_of(const Monomial& m) const {
  for (auto& t : terms_)
    if (t.mono == m) return t.coeff;
  return 0;
}

SparsePoly SparsePoly::add(const SparsePoly& o) const {
  if (field_ != o.field_) throw std::invalid_argument("polynomial fields differ");
  std::vector<Term> ts = terms_;
  ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
  return SparsePoly(field_, std::max(num_vars_, o.num_vars_), std::move(ts));
}

SparsePoly SparsePoly::sub(const SparsePoly& o) const { return add(o.negate()); }

SparsePoly SparsePoly::negate() const {
  std::vector<Term> ts = terms_;
  for (auto& t : ts) t.coeff = field_.neg(t.coeff);
  return SparsePoly(field_, num_vars_, std::move(ts));
}

SparsePoly SparsePoly::scale(u128 c) const {
  std::vector<Term> ts = terms_;
  c = field_.reduce(c);
  for (auto& t : ts) t.coeff = field_.mul(t.coeff, c);
  return SparsePoly(field_, num_vars_, std::move(ts));
}

SparsePoly SparsePoly::mul(const SparsePoly& o) const {
  if (field_ != o.field_) throw std::invalid_argument("polynomial fields differ");
  std::vector<Term> ts;
  ts.reserve(terms_.size() * o.terms_.size());
  for (auto& a : terms_)
    for (auto& b : o.terms_)
      ts.push_back({field_.mul(a.coeff, b.coeff), a.mono * b.mono});
  return SparsePoly(field_, std::max(num_vars_, o.num_vars_), std::move(ts));
}

SparsePoly SparsePoly::pow(uint32_t e) const {
  SparsePoly r = constant(field_, num_vars_, 1);
  for (uint32_t i = 0; i < e; ++i) r = r.mul(*this);
  return r;
}

SparsePoly SparsePoly::with_num_vars(uint32_t n) const {
  if (n < num_vars_) throw std::invalid_argument("cannot shrink variable space");
  return SparsePoly(field_, n, terms_);
}

SparsePoly SparsePoly::remap_vars(const std::vector<uint32_t>& map,
                                  uint32_t new_num_vars) const {
  std::vector<Term> ts = terms_;
  for (auto& t : ts)
    for (auto& [v, e] : t.mono.factors) v = map.at(v);
  return SparsePoly(field_, new_num_vars, std::move(ts));
}

u128 SparsePoly::eval(std::span<const u128> x) const {
  if (x.size() != num_vars_) throw std::invalid_argument("evaluation arity mismatch");
  u128 acc = 0;
  for (auto& t : terms_) {
    u128 v = t.coeff;
    for (auto& [var, e] : t.mono.factors) v = field_.mul(v, field_.pow(x[var], e));
    acc = field_.add(acc, v);
  }
  return acc;
}

std::vector<SparsePoly> SparsePoly::homogeneous_parts() const {
  if (terms_.empty()) return {};
  std::vector<std::vector<Term>> buckets(degree() + 1);
  for (auto& t : terms_) buckets[t.mono.total_degree()].push_back(t);
  std::vector<SparsePoly> parts;
  for (auto& b : buckets) parts.push_back(SparsePoly(field_, num_vars_, std::move(b)));
  return parts;
}

namespace {

std::string default_var_name(uint32_t v) { return "x" + std::to_string(v + 1); }

std::string render_mono(const Monomial& m,
                        const std::function<std::string(uint32_t)>& namer) {
  std::string s;
  for (auto& [v, e] : m.factors) {
    if (!s.empty()) s += "*";
    s += namer(v);
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

}  // namespace

std::string SparsePoly::render() const { return render(default_var_name); }

std::string SparsePoly::render(const std::function<std::string(uint32_t)>& namer) const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto& t : terms_) {
    if (!s.empty()) s += " + ";
    std::string m = render_mono(t.mono, namer);
    if (m.empty())
      s += to_string(t.coeff);
    else if (t.coeff == 1)
      s += m;
    else
      s += to_string(t.coeff) + "*" + m;
  }
  return s;
}

// ---------------------------------------------------------------- parsing

namespace {

struct PolyCursor {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("polynomial parse error at offset " +
                                std::to_string(pos) + ": " + why);
  }
  u128 read_uint() {
    skip_ws();
    if (pos >= text.size() || !isdigit((unsigned char)text[pos])) fail("expected integer");
    u128 v = 0;
    while (pos < text.size() && isdigit((unsigned char)text[pos])) {
      v = v * 10 + u128(text[pos] - '0');
      ++pos;
    }
    return v;
  }
  std::string read_var_token() {
    skip_ws();
    size_t start = pos;
    if (pos >= text.size() ||
        !(isalpha((unsigned char)text[pos]) || text[pos] == '_'))
      fail("expected factor");
    while (pos < text.size() &&
           (isalnum((unsigned char)text[pos]) || text[pos] == '_'))
      ++pos;
    if (pos < text.size() && text[pos] == '[') {
      while (pos < text.size() && text[pos] != ']') ++pos;
      if (pos >= text.size()) fail("unterminated '[' in variable");
      ++pos;
    }
    return text.substr(start, pos - start);
  }
};

struct RawTerm {
  bool negative = false;
  u128 coeff_abs = 1;
  bool has_coeff = false;
  Monomial mono;
};

std::vector<RawTerm> parse_terms(const std::string& text, bool allow_minus,
                                 const std::function<uint32_t(const std::string&)>& resolve,
                                 uint32_t* max_var) {
  PolyCursor cur{text};
  std::vector<RawTerm> out;
  bool first = true;
  while (true) {
    if (cur.done()) {
      if (first) cur.fail("empty polynomial");
      break;
    }
    RawTerm term;
    char c = cur.peek();
    if (c == '-') {
      if (!allow_minus) cur.fail("'-' not allowed in this polynomial");
      term.negative = true;
      ++cur.pos;
    } else if (c == '+') {
      if (first) cur.fail("leading '+'");
      ++cur.pos;
    } else if (!first) {
      cur.fail("expected '+' between terms");
    }
    while (true) {
      char f = cur.peek();
      if (isdigit((unsigned char)f)) {
        u128 v = cur.read_uint();
        term.coeff_abs = term.has_coeff ? term.coeff_abs * v : v;
        term.has_coeff = true;
      } else {
        std::string tok = cur.read_var_token();
        uint32_t var = resolve(tok);
        if (max_var) *max_var = std::max(*max_var, var + 1);
        uint32_t exp = 1;
        if (cur.peek() == '^') {
          ++cur.pos;
          u128 e = cur.read_uint();
          if (e > 1u << 20) cur.fail("exponent too large");
          exp = uint32_t(e);
        }
        term.mono = term.mono * Monomial::var(var, exp);
      }
      if (cur.peek() == '*') {
        ++cur.pos;
        continue;
      }
      break;
    }
    out.push_back(std::move(term));
    first = false;
  }
  return out;
}

uint32_t default_var_resolver(const std::string& tok) {
  if (tok.size() < 2 || tok[0] != 'x')
    throw std::invalid_argument("unknown variable '" + tok + "' (expected x<i>)");
  for (size_t i = 1; i < tok.size(); ++i)
    if (!isdigit((unsigned char)tok[i]))
      throw std::invalid_argument("unknown variable '" + tok + "'");
  unsigned long idx = std::stoul(tok.substr(1));
  if (idx == 0) throw std::invalid_argument("variable indices are 1-based: " + tok);
  return uint32_t(idx - 1);
}

}  // namespace

SparsePoly parse_poly(const std::string& text, PrimeField field, uint32_t num_vars,
                      bool allow_minus,
                      const std::function<uint32_t(const std::string&)>& var_resolver) {
  uint32_t max_var = 0;
  auto raw = parse_terms(text, allow_minus, var_resolver, &max_var);
  uint32_t n = std::max(num_vars, max_var);
  std::vector<SparsePoly::Term> ts;
  for (auto& r : raw) {
    u128 c = field.reduce(r.coeff_abs);
    if (r.negative) c = field.neg(c);
    ts.push_back({c, r.mono});
  }
  return SparsePoly(field, n, std::move(ts));
}

SparsePoly parse_poly(const std::string& text, PrimeField field, uint32_t num_vars,
                      bool allow_minus) {
  return parse_poly(text, field, num_vars, allow_minus, default_var_resolver);
}

// ---------------------------------------------------------------- IntPoly

IntPoly::IntPoly(uint32_t num_vars, std::vector<Term> terms)
    : num_vars_(num_vars), terms_(std::move(terms)) {
  for (auto& t : terms_) check_var_range(t.mono, num_vars_);
  normalize_terms<Term>(
      terms_, [](const Term& t) { return t.coeff == 0; },
      [](Term& a, const Term& b) { a.coeff += b.coeff; });
}

IntPoly IntPoly::constant(uint32_t num_vars, i128 c) {
  return IntPoly(num_vars, {{c, Monomial::one()}});
}

IntPoly IntPoly::variable(uint32_t num_vars, uint32_t v) {
  return IntPoly(num_vars, {{1, Monomial::var(v)}});
}

uint32_t IntPoly::degree() const {
  uint32_t d = 0;
  for (auto& t : terms_) d = std::max(d, t.mono.total_degree());
  return d;
}

u128 IntPoly::unit_term_count() const {
  u128 n = 0;
  for (auto& t : terms_) {
    u128 mag = t.coeff < 0 ? u128(-t.coeff) : u128(t.coeff);
    n += mag;
    if (n > (u128(1) << 62))
      throw std::overflow_error("polynomial term count out of supported range");
  }
  return n;
}

IntPoly IntPoly::add(const IntPoly& o) const {
  std::vector<Term> ts = terms_;
  ts.insert(ts.end(), o.terms_.begin(), o.terms_.end());
  return IntPoly(std::max(num_vars_, o.num_vars_), std::move(ts));
}

IntPoly IntPoly::mul(const IntPoly& o) const {
  std::vector<Term> ts;
  ts.reserve(terms_.size() * o.terms_.size());
  for (auto& a : terms_)
    for (auto& b : o.terms_) ts.push_back({a.coeff * b.coeff, a.mono * b.mono});
  return IntPoly(std::max(num_vars_, o.num_vars_), std::move(ts));
}

IntPoly IntPoly::with_num_vars(uint32_t n) const {
  if (n < num_vars_) throw std::invalid_argument("cannot shrink variable space");
  return IntPoly(n, terms_);
}

IntPoly IntPoly::remap_vars(const std::vector<uint32_t>& map, uint32_t new_num_vars) const {
  std::vector<Term> ts = terms_;
  for (auto& t : ts)
    for (auto& [v, e] : t.mono.factors) v = map.at(v);
  return IntPoly(new_num_vars, std::move(ts));
}

i128 IntPoly::eval(std::span<const i128> x) const {
  if (x.size() != num_vars_) throw std::invalid_argument("evaluation arity mismatch");
  i128 acc = 0;
  for (auto& t : terms_) {
    i128 v = t.coeff;
    for (auto& [var, e] : t.mono.factors)
      for (uint32_t i = 0; i < e; ++i) v *= x[var];
    acc += v;
  }
  return acc;
}

SparsePoly IntPoly::to_field(PrimeField field) const {
  std::vector<SparsePoly::Term> ts;
  for (auto& t : terms_) ts.push_back({field.reduce_int(t.coeff), t.mono});
  return SparsePoly(field, num_vars_, std::move(ts));
}

std::string IntPoly::render() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto& t : terms_) {
    i128 c = t.coeff;
    if (s.empty()) {
      if (c < 0) { s += "-"; c = -c; }
    } else {
      s += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    }
    std::string m = render_mono(t.mono, default_var_name);
    if (m.empty())
      s += to_string(u128(c));
    else if (c == 1)
      s += m;
    else
      s += to_string(u128(c)) + "*" + m;
  }
  return s;
}

IntPoly parse_int_poly(const std::string& text, uint32_t num_vars) {
  uint32_t max_var = 0;
  auto raw = parse_terms(text, /*allow_minus=*/true, default_var_resolver, &max_var);
  uint32_t n = std::max(num_vars, max_var);
  std::vector<IntPoly::Term> ts;
  for (auto& r : raw) {
    if (r.coeff_abs > (u128(1) << 100))
      throw std::overflow_error("coefficient out of supported range");
    i128 c = i128(r.coeff_abs);
    if (r.negative) c = -c;
    ts.push_back({c, r.mono});
  }
  return IntPoly(n, std::move(ts));
}

// ------------------------------------------------------ Waring decomposition

SparsePoly LinearFormDecomposition::expand() const {
  SparsePoly acc(field, num_vars);
  for (auto& f : forms) {
    std::vector<SparsePoly::Term> lin;
    for (uint32_t v = 0; v < num_vars; ++v)
      if (f.betas[v] != 0) lin.push_back({f.betas[v], Monomial::var(v)});
    SparsePoly form(field, num_vars, std::move(lin));
    acc = acc.add(form.pow(degree).scale(f.alpha));
  }
  return acc;
}

std::vector<std::vector<u128>> binomial_table(uint32_t n, PrimeField field) {
  std::vector<std::vector<u128>> c(n + 1);
  for (uint32_t i = 0; i <= n; ++i) {
    c[i].assign(i + 1, 0);
    c[i][0] = field.reduce(1);
    c[i][i] = field.reduce(1);
    for (uint32_t k = 1; k < i; ++k) c[i][k] = field.add(c[i - 1][k - 1], c[i - 1][k]);
  }
  return c;
}

namespace {

u128 factorial_mod(uint32_t d, PrimeField field) {
  u128 f = field.reduce(1);
  for (uint32_t i = 2; i <= d; ++i) f = field.mul(f, i);
  return f;
}

}  // namespace

LinearFormDecomposition polarize_monomial(const std::vector<uint32_t>& vars,
                                          uint32_t num_vars, PrimeField field) {
  uint32_t d = uint32_t(vars.size());
  if (d == 0) throw std::invalid_argument("polarize_monomial: empty variable list");
  if (u128(d) >= field.modulus())
    throw std::domain_error("polarize_monomial requires degree < field modulus");
  for (size_t i = 0; i < vars.size(); ++i)
    for (size_t j = i + 1; j < vars.size(); ++j)
      if (vars[i] == vars[j])
        throw std::invalid_argument("polarize_monomial: variables must be distinct");
  for (uint32_t v : vars)
    if (v >= num_vars) throw std::invalid_argument("polarize_monomial: variable out of range");

  u128 inv_fact = field.inv(factorial_mod(d, field));
  u128 minus_one = field.neg(1);

  LinearFormDecomposition dec{field, num_vars, d, {}};
  for (uint32_t mask = 1; mask < (1u << d); ++mask) {
    uint32_t popcnt = uint32_t(__builtin_popcount(mask));
    u128 alpha = field.mul(inv_fact, field.pow(minus_one, d - popcnt));
    LinearForm form{alpha, std::vector<u128>(num_vars, 0)};
    for (uint32_t i = 0; i < d; ++i)
      if (mask & (1u << i)) form.betas[vars[i]] = field.reduce(1);
    dec.forms.push_back(std::move(form));
  }
  return dec;
}

LinearFormDecomposition waring_decompose(const SparsePoly& p, uint32_t degree) {
  const PrimeField& field = p.field();
  if (!p.is_homogeneous() || (!p.is_zero() && p.degree() != degree))
    throw std::invalid_argument("waring_decompose requires a homogeneous polynomial of the stated degree");
  if (u128(degree) >= field.modulus())
    throw std::domain_error("waring_decompose requires degree < field modulus");

  // beta vector -> accumulated alpha; std::map keeps emission deterministic.
  std::map<std::vector<u128>, u128> merged;
  auto binom = binomial_table(degree, field);
  u128 inv_fact = degree > 0 ? field.inv(factorial_mod(degree, field)) : field.reduce(1);
  u128 minus_one = field.neg(1);

  for (auto& term : p.terms()) {
    const auto& factors = term.mono.factors;
    if (factors.size() <= 1) {
      // c * x_v^d (or a constant): already a power of a linear form.
      std::vector<u128> beta(p.num_vars(), 0);
      if (!factors.empty()) beta[factors[0].first] = field.reduce(1);
      auto [it, inserted] = merged.try_emplace(std::move(beta), 0);
      it->second = field.add(it->second, term.coeff);
      continue;
    }
    // Generalized polarization with multiplicities:
    //   d! * prod x_v^{e_v} =
    //     sum_{0<=k<=e, k!=0} (-1)^{d-|k|} prod C(e_v,k_v) * (sum k_v x_v)^d
    u128 base = field.mul(term.coeff, inv_fact);
    std::vector<uint32_t> k(factors.size(), 0);
    while (true) {
      // odometer increment over 0..e_v per slot
      size_t slot = 0;
      while (slot < k.size() && k[slot] == factors[slot].second) {
        k[slot] = 0;
        ++slot;
      }
      if (slot == k.size()) break;
      ++k[slot];

      uint32_t ksum = 0;
      u128 alpha = base;
      for (size_t i = 0; i < k.size(); ++i) {
        ksum += k[i];
        alpha = field.mul(alpha, binom[factors[i].second][k[i]]);
      }
      alpha = field.mul(alpha, field.pow(minus_one, degree - ksum));
      std::vector<u128> beta(p.num_vars(), 0);
      for (size_t i = 0; i < k.size(); ++i) beta[factors[i].first] = field.reduce(k[i]);
      auto [it, inserted] = merged.try_emplace(std::move(beta), 0);
      it->second = field.add(it->second, alpha);
    }
  }

  LinearFormDecomposition dec{field, p.num_vars(), degree, {}};
  for (auto& [beta, alpha] : merged)
    if (alpha != 0) dec.forms.push_back({alpha, beta});
  return dec;
}

// ------------------------------------------------- interpolation / weights

SparsePoly interpolate_univariate(const std::vector<std::pair<u128, u128>>& points,
                                  PrimeField field) {
  size_t k = points.size();
  if (k == 0) throw std::invalid_argument("interpolation needs at least one point");
  if (u128(k) > field.modulus())
    throw std::invalid_argument("more interpolation points than field elements");
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j)
      if (field.reduce(points[i].first) == field.reduce(points[j].first))
        throw std::invalid_argument("duplicate interpolation abscissae");

  // N(X) = prod (X - x_j), dense coefficients, degree k.
  std::vector<u128> n(k + 1, 0);
  n[0] = field.reduce(1);
  size_t deg = 0;
  for (auto& [x, y] : points) {
    u128 neg_x = field.neg(field.reduce(x));
    for (size_t i = deg + 1; i > 0; --i)
      n[i] = field.add(field.mul(n[i], neg_x), n[i - 1]);
    n[0] = field.mul(n[0], neg_x);
    ++deg;
  }

  std::vector<u128> result(k, 0);
  std::vector<u128> q(k, 0);  // N / (X - x_i), synthetic division
  for (size_t i = 0; i < k; ++i) {
    u128 xi = field.reduce(points[i].first);
    u128 carry = 0;
    for (size_t j = k; j-- > 0;) {
      carry = field.add(n[j + 1], field.mul(carry, xi));
      q[j] = carry;
    }
    u128 den = field.reduce(1);
    for (size_t j = 0; j < k; ++j)
      if (j != i) den = field.mul(den, field.sub(xi, field.reduce(points[j].first)));
    u128 w = field.mul(field.reduce(points[i].second), field.inv(den));
    for (size_t j = 0; j < k; ++j)
      result[j] = field.add(result[j], field.mul(w, q[j]));
  }

  std::vector<SparsePoly::Term> ts;
  for (size_t j = 0; j < k; ++j)
    if (result[j] != 0) ts.push_back({result[j], Monomial::var(0, uint32_t(j))});
  return SparsePoly(field, 1, std::move(ts));
}

std::vector<u128> extraction_weights(const std::vector<u128>& lambdas,
                                     uint32_t target_degree, PrimeField field) {
  size_t k = lambdas.size();
  if (k != size_t(target_degree) + 1)
    throw std::invalid_argument("extraction_weights needs exactly e+1 lambdas");
  if (u128(k) > field.modulus() - 1)
    throw std::invalid_argument("not enough nonzero field elements for lambdas");
  for (size_t i = 0; i < k; ++i) {
    if (field.reduce(lambdas[i]) == 0)
      throw std::invalid_argument("lambdas must be nonzero");
    for (size_t j = i + 1; j < k; ++j)
      if (field.reduce(lambdas[i]) == field.reduce(lambdas[j]))
        throw std::invalid_argument("lambdas must be distinct");
  }

  // Vandermonde system: sum_k c_k lambda_k^j = [j == e], j = 0..e.
  std::vector<std::vector<u128>> m(k, std::vector<u128>(k + 1, 0));
  for (size_t j = 0; j < k; ++j) {
    for (size_t c = 0; c < k; ++c) m[j][c] = field.pow(field.reduce(lambdas[c]), j);
    m[j][k] = (j == target_degree) ? field.reduce(1) : 0;
  }
  for (size_t col = 0; col < k; ++col) {
    size_t pivot = col;
    while (pivot < k && m[pivot][col] == 0) ++pivot;
    if (pivot == k) throw std::logic_error("singular Vandermonde system");
    std::swap(m[col], m[pivot]);
    u128 inv = field.inv(m[col][col]);
    for (size_t c = col; c <= k; ++c) m[col][c] = field.mul(m[col][c], inv);
    for (size_t r = 0; r < k; ++r) {
      if (r == col || m[r][col] == 0) continue;
      u128 f = m[r][col];
      for (size_t c = col; c <= k; ++c)
        m[r][c] = field.sub(m[r][c], field.mul(f, m[col][c]));
    }
  }
  std::vector<u128> weights(k);
  for (size_t i = 0; i < k; ++i) weights[i] = m[i][k];
  return weights;
}

}  // namespace cleanreg
