#include "cgk/polynomial.hpp"

#include <algorithm>

#include "cgk/errors.hpp"

namespace cgk {

namespace {

void require_field(const ResidueRing& ring, const char* what) {
  if (!ring.is_field()) throw NotAField(std::string(what) + " needs a field, got " + ring.describe());
}

// g(x) with g(x)^p = f(x); f must satisfy f' = 0.
Polynomial pth_root(const Polynomial& f) {
  const ResidueRing& ring = f.ring();
  const auto p = static_cast<int>(ring.p());
  const auto q_over_p = static_cast<std::uint64_t>(ring.size() / ring.p());
  std::vector<Residue> out;
  for (int i = 0; i <= f.degree(); i += p) out.push_back(ring.pow(f.coeff(i), q_over_p));
  return Polynomial(ring, std::move(out));
}

void sff_into(const Polynomial& f, int scale, std::vector<std::pair<Polynomial, int>>& out) {
  const ResidueRing& ring = f.ring();
  Polynomial c = gcd(f, f.derivative());
  Polynomial w = f / c;
  int i = 1;
  while (!w.is_one()) {
    const Polynomial y = gcd(w, c);
    const Polynomial fac = w / y;
    if (fac.degree() > 0) out.emplace_back(fac.monic(), i * scale);
    w = y;
    c = c / y;
    ++i;
  }
  if (c.degree() > 0) sff_into(pth_root(c).monic(), scale * static_cast<int>(ring.p()), out);
}

}  // namespace

Polynomial::Polynomial(ResidueRing ring, std::vector<Residue> coeffs) : ring_(ring), c_(std::move(coeffs)) {
  for (auto& v : c_) v = RingElement(ring_, v).value();
  trim();
}

Polynomial Polynomial::monomial(const ResidueRing& ring, int degree) {
  std::vector<Residue> c(degree + 1);
  c[degree] = ring.one();
  return Polynomial(ring, std::move(c));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == Residue{}) c_.pop_back();
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  const auto inv = ring_.inverse(leading());
  if (!inv) throw DomainError("leading coefficient is not a unit");
  std::vector<Residue> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] = ring_.mul(*inv, c_[i]);
  return Polynomial(ring_, std::move(out));
}

Polynomial Polynomial::derivative() const {
  std::vector<Residue> out;
  for (std::size_t i = 1; i < c_.size(); ++i) out.push_back(ring_.mul(ring_.from_int(static_cast<Int>(i)), c_[i]));
  return Polynomial(ring_, std::move(out));
}

Residue Polynomial::evaluate(Residue x) const {
  Residue acc = ring_.zero();
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = ring_.add(ring_.mul(acc, x), *it);
  return acc;
}

Polynomial operator+(const Polynomial& x, const Polynomial& y) {
  if (!(x.ring_ == y.ring_)) throw RingMismatch("polynomial ring mismatch");
  std::vector<Residue> out(std::max(x.c_.size(), y.c_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.ring_.add(x.coeff(static_cast<int>(i)), y.coeff(static_cast<int>(i)));
  return Polynomial(x.ring_, std::move(out));
}

Polynomial operator-(const Polynomial& x, const Polynomial& y) {
  if (!(x.ring_ == y.ring_)) throw RingMismatch("polynomial ring mismatch");
  std::vector<Residue> out(std::max(x.c_.size(), y.c_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.ring_.sub(x.coeff(static_cast<int>(i)), y.coeff(static_cast<int>(i)));
  return Polynomial(x.ring_, std::move(out));
}

Polynomial operator*(const Polynomial& x, const Polynomial& y) {
  if (!(x.ring_ == y.ring_)) throw RingMismatch("polynomial ring mismatch");
  if (x.is_zero() || y.is_zero()) return Polynomial(x.ring_);
  std::vector<Residue> out(x.c_.size() + y.c_.size() - 1);
  for (std::size_t i = 0; i < x.c_.size(); ++i)
    for (std::size_t j = 0; j < y.c_.size(); ++j)
      out[i + j] = x.ring_.add(out[i + j], x.ring_.mul(x.c_[i], y.c_[j]));
  return Polynomial(x.ring_, std::move(out));
}

DivMod divmod(const Polynomial& num, const Polynomial& den) {
  const ResidueRing& ring = num.ring();
  if (den.is_zero()) throw DomainError("polynomial division by zero");
  const auto inv = ring.inverse(den.leading());
  if (!inv) throw DomainError("divisor leading coefficient is not a unit");
  std::vector<Residue> rem = num.coeffs();
  const int dd = den.degree();
  if (num.degree() < dd) return {Polynomial(ring), num};
  std::vector<Residue> quo(num.degree() - dd + 1);
  for (int i = num.degree(); i >= dd; --i) {
    const Residue f = ring.mul(rem[i], *inv);
    quo[i - dd] = f;
    if (f == Residue{}) continue;
    for (int j = 0; j <= dd; ++j) rem[i - dd + j] = ring.sub(rem[i - dd + j], ring.mul(f, den.coeff(j)));
  }
  rem.resize(dd);
  return {Polynomial(ring, std::move(quo)), Polynomial(ring, std::move(rem))};
}

Polynomial operator/(const Polynomial& num, const Polynomial& den) { return divmod(num, den).quotient; }
Polynomial operator%(const Polynomial& num, const Polynomial& den) { return divmod(num, den).remainder; }

Polynomial gcd(const Polynomial& x, const Polynomial& y) {
  require_field(x.ring(), "polynomial gcd");
  Polynomial a = x, b = y;
  while (!b.is_zero()) {
    Polynomial r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Polynomial pow_mod(const Polynomial& base, std::uint64_t e, const Polynomial& mod) {
  Polynomial acc = Polynomial::constant(base.ring(), base.ring().one()) % mod;
  Polynomial b = base % mod;
  while (e > 0) {
    if (e & 1U) acc = (acc * b) % mod;
    e >>= 1U;
    if (e > 0) b = (b * b) % mod;
  }
  return acc;
}

RingMatrix evaluate(const Polynomial& f, const RingMatrix& x) {
  if (!x.is_square()) throw DomainError("polynomial of a non-square matrix");
  const ResidueRing& ring = x.ring();
  RingMatrix acc(ring, x.rows(), x.cols());
  const RingMatrix id = RingMatrix::identity(ring, x.rows());
  for (int i = f.degree(); i >= 0; --i) acc = acc * x + f.coeff(i) * id;
  return acc;
}

Polynomial charpoly(const RingMatrix& a) {
  if (!a.is_square()) throw DomainError("characteristic polynomial of a non-square matrix");
  const ResidueRing& ring = a.ring();
  const Index n = a.rows();
  // p holds coefficients high to low for the leading r x r block.
  std::vector<Residue> p{ring.one()};
  for (Index r = 0; r < n; ++r) {
    // Toeplitz column t_0 = 1, t_1 = -a_rr, t_{k+2} = -R A_r^k C.
    std::vector<Residue> t(r + 2);
    t[0] = ring.one();
    t[1] = ring.neg(a(r, r));
    std::vector<Residue> v(r);  // A_r^k C
    for (Index i = 0; i < r; ++i) v[i] = a(i, r);
    for (Index k = 0; k < r; ++k) {
      Residue rv = ring.zero();
      for (Index i = 0; i < r; ++i) rv = ring.add(rv, ring.mul(a(r, i), v[i]));
      t[k + 2] = ring.neg(rv);
      std::vector<Residue> next(r);
      for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < r; ++j) next[i] = ring.add(next[i], ring.mul(a(i, j), v[j]));
      v = std::move(next);
    }
    std::vector<Residue> q(r + 2);
    for (Index i = 0; i <= r + 1; ++i)
      for (Index j = 0; j <= std::min<Index>(i, r); ++j)
        q[i] = ring.add(q[i], ring.mul(t[i - j], p[j]));
    p = std::move(q);
  }
  std::reverse(p.begin(), p.end());
  return Polynomial(ring, std::move(p));
}

std::vector<std::pair<Polynomial, int>> squarefree_factorization(const Polynomial& f) {
  require_field(f.ring(), "squarefree factorization");
  if (f.is_zero()) throw DomainError("squarefree factorization of zero");
  std::vector<std::pair<Polynomial, int>> out;
  if (f.degree() > 0) sff_into(f.monic(), 1, out);
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
  return out;
}

std::vector<std::pair<Polynomial, int>> distinct_degree_factorization(const Polynomial& f) {
  require_field(f.ring(), "distinct-degree factorization");
  const ResidueRing& ring = f.ring();
  const auto q = static_cast<std::uint64_t>(ring.size());
  std::vector<std::pair<Polynomial, int>> out;
  Polynomial rest = f.monic();
  const Polynomial x = Polynomial::monomial(ring, 1);
  Polynomial h = x % rest;  // x^{q^i} mod rest
  for (int d = 1; 2 * d <= rest.degree(); ++d) {
    h = pow_mod(h, q, rest);
    const Polynomial g = gcd(rest, h - x);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      rest = rest / g;
      h = h % rest;
    }
  }
  if (rest.degree() > 0) out.emplace_back(rest, rest.degree());
  return out;
}

Polynomial radical(const Polynomial& f) {
  Polynomial acc = Polynomial::constant(f.ring(), f.ring().one());
  for (const auto& [g, m] : squarefree_factorization(f)) acc = acc * g;
  return acc;
}

}  // namespace cgk
