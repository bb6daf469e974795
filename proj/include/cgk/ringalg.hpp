#pragma once

// Exact arithmetic over Z/p^r, F_p and the unramified quadratic extension
// (Z/p^r)[t]/(t^2 + c1 t + c0), plus dense matrices over those rings.
//
// Matrices are stored as Eigen int64 matrices of canonical representatives.
// For the quadratic extension an entry a + b t is split into two Eigen
// matrices (re = a, im = b). Every operation reduces back to [0, p^r).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace cgk {

using Int = std::int64_t;
using Index = Eigen::Index;
using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<Int, Eigen::Dynamic, 1>;

enum class RingKind { LocalRing, PrimeField, QuadraticExtension };

std::string to_string(RingKind kind);

/// Canonical residue a + b t. Outside the quadratic extension b is always 0.
struct Residue {
  Int a = 0;
  Int b = 0;

  friend bool operator==(const Residue&, const Residue&) = default;
};

/// Modulus ceiling. Keeps every single product of residues inside int64.
inline constexpr Int kMaxModulus = Int{1} << 31;

class ResidueRing {
 public:
  /// Z/p^r (the prime field F_p when r = 1). p is checked for primality.
  static ResidueRing integers(Int p, int r = 1);
  static ResidueRing prime_field(Int p) { return integers(p, 1); }
  /// (Z/p^r)[t]/(f) with f the lexicographically least monic irreducible
  /// quadratic t^2 + c1 t + c0 over F_p, ordered by (c1, c0).
  static ResidueRing quadratic(Int p, int r = 1);

  Int p() const { return p_; }
  int r() const { return r_; }
  Int modulus() const { return modulus_; }
  RingKind kind() const;
  bool is_field() const { return r_ == 1; }
  bool is_quadratic() const { return quadratic_; }
  /// Coefficients of the defining polynomial t^2 + c1 t + c0 (zero when not quadratic).
  Int c0() const { return c0_; }
  Int c1() const { return c1_; }
  /// Number of elements.
  Int size() const { return quadratic_ ? modulus_ * modulus_ : modulus_; }

  /// Same prime and kind (and defining polynomial) with a different exponent.
  ResidueRing with_exponent(int r) const;
  ResidueRing residue_field() const { return with_exponent(1); }

  std::string describe() const;

  Int reduce(Int x) const {
    Int y = x % modulus_;
    return y < 0 ? y + modulus_ : y;
  }
  Residue from_int(Int x) const { return {reduce(x), 0}; }
  Residue zero() const { return {}; }
  Residue one() const { return {1 % modulus_, 0}; }

  Residue add(Residue x, Residue y) const;
  Residue sub(Residue x, Residue y) const;
  Residue neg(Residue x) const;
  Residue mul(Residue x, Residue y) const;
  Residue pow(Residue x, std::uint64_t e) const;
  /// t -> -c1 - t, the nontrivial automorphism; identity on Z/p^r.
  Residue conj(Residue x) const;
  bool is_unit(Residue x) const;
  std::optional<Residue> inverse(Residue x) const;
  /// Largest v with p^v dividing x; r for zero.
  int valuation(Residue x) const;
  /// x / p^v for v <= valuation(x), as a canonical residue.
  Residue divide_by_p_power(Residue x, int v) const;
  /// Residue of the integer element (or pair) when reduced to the ring with exponent l.
  Residue reduce_to(Residue x, const ResidueRing& smaller) const;

  friend bool operator==(const ResidueRing& x, const ResidueRing& y) {
    return x.p_ == y.p_ && x.r_ == y.r_ && x.quadratic_ == y.quadratic_ && x.c0_ == y.c0_ &&
           x.c1_ == y.c1_;
  }

 private:
  ResidueRing(Int p, int r, bool quadratic, Int c0, Int c1);

  Int p_;
  int r_;
  Int modulus_;
  bool quadratic_;
  Int c0_;
  Int c1_;
};

bool is_prime(Int n);

/// Element of a residue ring with value semantics.
class RingElement {
 public:
  RingElement(ResidueRing ring, Residue value);
  RingElement(ResidueRing ring, Int value) : RingElement(ring, ring.from_int(value)) {}

  const ResidueRing& ring() const { return ring_; }
  Residue value() const { return value_; }
  bool is_zero() const { return value_ == Residue{}; }
  bool is_unit() const { return ring_.is_unit(value_); }
  std::optional<RingElement> inverse() const;

  friend RingElement operator+(const RingElement& x, const RingElement& y);
  friend RingElement operator-(const RingElement& x, const RingElement& y);
  friend RingElement operator*(const RingElement& x, const RingElement& y);
  friend RingElement operator-(const RingElement& x) { return {x.ring_, x.ring_.neg(x.value_)}; }
  friend bool operator==(const RingElement& x, const RingElement& y) {
    return x.ring_ == y.ring_ && x.value_ == y.value_;
  }

 private:
  ResidueRing ring_;
  Residue value_;
};

/// x -> x^p on F_{p^2}; throws DomainError outside the quadratic extension.
RingElement frobenius(const RingElement& x);

class RingMatrix {
 public:
  RingMatrix(ResidueRing ring, Index rows, Index cols);
  /// Entries are reduced into the ring. `im` may be empty for non-quadratic rings.
  RingMatrix(ResidueRing ring, const IntMatrix& re, const IntMatrix& im = IntMatrix());

  static RingMatrix zero(const ResidueRing& ring, Index m) { return {ring, m, m}; }
  static RingMatrix identity(const ResidueRing& ring, Index m);

  const ResidueRing& ring() const { return ring_; }
  Index rows() const { return re_.rows(); }
  Index cols() const { return re_.cols(); }
  Index dim() const { return re_.rows(); }
  bool is_square() const { return rows() == cols(); }

  Residue operator()(Index i, Index j) const {
    return {re_(i, j), ring_.is_quadratic() ? im_(i, j) : 0};
  }
  void set(Index i, Index j, Residue v);
  RingElement element(Index i, Index j) const { return {ring_, (*this)(i, j)}; }

  const IntMatrix& re() const { return re_; }
  /// Coefficients of t; a zero-sized matrix outside the quadratic extension.
  const IntMatrix& im() const { return im_; }

  bool is_zero() const;
  bool is_identity() const;

  friend bool operator==(const RingMatrix& x, const RingMatrix& y);

 private:
  ResidueRing ring_;
  IntMatrix re_;
  IntMatrix im_;
};

RingMatrix operator+(const RingMatrix& x, const RingMatrix& y);
RingMatrix operator-(const RingMatrix& x, const RingMatrix& y);
RingMatrix operator-(const RingMatrix& x);
RingMatrix operator*(const RingMatrix& x, const RingMatrix& y);
RingMatrix operator*(Residue c, const RingMatrix& x);
RingMatrix operator*(Int c, const RingMatrix& x);

RingMatrix transpose(const RingMatrix& x);
/// Entrywise Frobenius.
RingMatrix conjugate(const RingMatrix& x);
/// conjugate(x) transposed.
RingMatrix adjoint(const RingMatrix& x);
Residue trace(const RingMatrix& x);
RingMatrix power(const RingMatrix& x, std::uint64_t e);
RingMatrix commutator(const RingMatrix& x, const RingMatrix& y);

Residue determinant(const RingMatrix& x);
/// Laplace expansion along the first row; exponential cost, used as an oracle.
Residue determinant_cofactor(const RingMatrix& x);
/// nullopt exactly when det(x) is not a unit (det = 0 mod p).
std::optional<RingMatrix> inverse(const RingMatrix& x);

struct Kernel {
  Index rank = 0;
  /// cols x nullity matrix whose columns span {v : a v = 0}.
  RingMatrix basis;
  /// basis column k is 1 at free_cols[k] and 0 at the other free columns.
  std::vector<Index> free_cols;
};

/// Row-reduced null space over a field. Throws NotAField for r > 1.
Kernel solve_kernel(const RingMatrix& a);
Index rank(const RingMatrix& a);
/// Null space over Z/p^r when a unit pivot exists in every reduction step, so
/// that the kernel is free. Throws DomainError otherwise.
Kernel free_kernel(const RingMatrix& a);

struct AffineSolution {
  /// cols x 1 particular solution.
  RingMatrix particular;
  /// Free basis of the homogeneous solutions.
  Kernel homogeneous;
};

/// All x with a x = b (b a column), over Z/p^r or the quadratic ring.
/// nullopt when the rows of a are dependent mod p.
std::optional<AffineSolution> solve_affine(const RingMatrix& a, const RingMatrix& b);

/// Entrywise reduction to the ring with exponent l <= r.
RingMatrix reduce_exponent(const RingMatrix& x, int l);
/// Same canonical representatives read in the ring with exponent r' >= r.
RingMatrix lift_exponent(const RingMatrix& x, int r);

}  // namespace cgk
