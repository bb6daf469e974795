#pragma once

#include <utility>
#include <vector>

#include "cgk/ringalg.hpp"

namespace cgk {

/// Univariate polynomial over a residue ring, coefficients stored low to high
/// with no trailing zeros. Division and gcd need a field (or a unit leading
/// coefficient for division).
class Polynomial {
 public:
  explicit Polynomial(ResidueRing ring, std::vector<Residue> coeffs = {});

  static Polynomial constant(const ResidueRing& ring, Residue c) { return Polynomial(ring, {c}); }
  static Polynomial monomial(const ResidueRing& ring, int degree);

  const ResidueRing& ring() const { return ring_; }
  const std::vector<Residue>& coeffs() const { return c_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == ring_.one(); }
  Residue coeff(int i) const { return i < static_cast<int>(c_.size()) ? c_[i] : Residue{}; }
  Residue leading() const { return c_.empty() ? Residue{} : c_.back(); }

  Polynomial monic() const;
  Polynomial derivative() const;
  Residue evaluate(Residue x) const;

  friend Polynomial operator+(const Polynomial& x, const Polynomial& y);
  friend Polynomial operator-(const Polynomial& x, const Polynomial& y);
  friend Polynomial operator*(const Polynomial& x, const Polynomial& y);
  friend bool operator==(const Polynomial& x, const Polynomial& y) {
    return x.ring_ == y.ring_ && x.c_ == y.c_;
  }

 private:
  void trim();

  ResidueRing ring_;
  std::vector<Residue> c_;
};

struct DivMod {
  Polynomial quotient;
  Polynomial remainder;
};

DivMod divmod(const Polynomial& num, const Polynomial& den);
Polynomial operator/(const Polynomial& num, const Polynomial& den);
Polynomial operator%(const Polynomial& num, const Polynomial& den);
/// Monic gcd over a field.
Polynomial gcd(const Polynomial& x, const Polynomial& y);
Polynomial pow_mod(const Polynomial& base, std::uint64_t e, const Polynomial& mod);

/// Horner evaluation f(X) for a square matrix X.
RingMatrix evaluate(const Polynomial& f, const RingMatrix& x);

/// det(x I - A) by the division-free Berkowitz recursion; valid over any ring.
Polynomial charpoly(const RingMatrix& a);

/// f = prod g_i^{m_i} with g_i squarefree and pairwise coprime, over a finite field.
std::vector<std::pair<Polynomial, int>> squarefree_factorization(const Polynomial& f);
/// For squarefree f: pairs (product of all irreducible factors of degree d, d).
std::vector<std::pair<Polynomial, int>> distinct_degree_factorization(const Polynomial& f);
/// Product of the distinct monic irreducible factors of f.
Polynomial radical(const Polynomial& f);

}  // namespace cgk
