#include "cgk/ringalg.hpp"

#include <utility>

#include "cgk/errors.hpp"

namespace cgk {

namespace {

Int mulmod(Int x, Int y, Int mod) {
  return static_cast<Int>(static_cast<__int128>(x) * y % mod);
}

IntMatrix reduce_matrix(const IntMatrix& x, Int mod) {
  return x.unaryExpr([mod](Int v) {
    Int y = v % mod;
    return y < 0 ? y + mod : y;
  });
}

// Product of reduced matrices. Uses the Eigen kernel when the accumulated sum
// provably fits in int64, otherwise reduces after every term.
IntMatrix mod_product(const IntMatrix& x, const IntMatrix& y, Int mod) {
  const auto inner = static_cast<__int128>(x.cols());
  if (static_cast<__int128>(mod) * mod * (inner + 1) < (static_cast<__int128>(1) << 62)) {
    return reduce_matrix(x * y, mod);
  }
  IntMatrix out(x.rows(), y.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < y.cols(); ++j) {
      Int acc = 0;
      for (Index k = 0; k < x.cols(); ++k) {
        acc += mulmod(x(i, k), y(k, j), mod);
        if (acc >= mod) acc -= mod;
      }
      out(i, j) = acc;
    }
  }
  return out;
}

void require_same_ring(const ResidueRing& x, const ResidueRing& y) {
  if (!(x == y)) throw RingMismatch("ring mismatch: " + x.describe() + " vs " + y.describe());
}

// Row-major scratch copy used by the elimination routines.
struct Work {
  Index rows;
  Index cols;
  std::vector<Residue> data;

  explicit Work(const RingMatrix& m) : rows(m.rows()), cols(m.cols()), data(rows * cols) {
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) data[i * cols + j] = m(i, j);
  }
  Residue& at(Index i, Index j) { return data[i * cols + j]; }
  void swap_rows(Index i, Index k) {
    if (i == k) return;
    for (Index j = 0; j < cols; ++j) std::swap(at(i, j), at(k, j));
  }
};

// t := t - f * s for rows t, s.
void axpy_row(const ResidueRing& ring, Work& w, Index target, Index source, Residue f,
              Index from_col = 0) {
  if (f == Residue{}) return;
  for (Index j = from_col; j < w.cols; ++j) {
    w.at(target, j) = ring.sub(w.at(target, j), ring.mul(f, w.at(source, j)));
  }
}

struct Reduced {
  std::vector<Index> pivot_cols;  // pivot column of row i
  Index rank() const { return static_cast<Index>(pivot_cols.size()); }
};

// Reduced row echelon form in place. In unit mode a pivot must be a unit and
// the rows left without a pivot must vanish, otherwise the kernel is not free.
Reduced rref(const ResidueRing& ring, Work& w, bool unit_mode) {
  Reduced out;
  Index row = 0;
  for (Index col = 0; col < w.cols && row < w.rows; ++col) {
    Index pivot = -1;
    for (Index i = row; i < w.rows; ++i) {
      const Residue v = w.at(i, col);
      if (unit_mode ? ring.is_unit(v) : !(v == Residue{})) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    w.swap_rows(row, pivot);
    const Residue inv = *ring.inverse(w.at(row, col));
    for (Index j = col; j < w.cols; ++j) w.at(row, j) = ring.mul(inv, w.at(row, j));
    for (Index i = 0; i < w.rows; ++i) {
      if (i != row) axpy_row(ring, w, i, row, w.at(i, col), col);
    }
    out.pivot_cols.push_back(col);
    ++row;
  }
  if (unit_mode) {
    for (Index i = row; i < w.rows; ++i)
      for (Index j = 0; j < w.cols; ++j)
        if (!(w.at(i, j) == Residue{}))
          throw DomainError("linear system over " + ring.describe() +
                            " has no unit pivot; kernel is not free");
  }
  return out;
}

Kernel kernel_from_rref(const ResidueRing& ring, Work& w, const Reduced& red) {
  std::vector<bool> is_pivot(w.cols, false);
  for (Index c : red.pivot_cols) is_pivot[c] = true;
  std::vector<Index> free_cols;
  for (Index c = 0; c < w.cols; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  RingMatrix basis(ring, w.cols, static_cast<Index>(free_cols.size()));
  for (Index k = 0; k < static_cast<Index>(free_cols.size()); ++k) {
    const Index f = free_cols[k];
    basis.set(f, k, ring.one());
    for (Index i = 0; i < red.rank(); ++i) basis.set(red.pivot_cols[i], k, ring.neg(w.at(i, f)));
  }
  return {red.rank(), std::move(basis), std::move(free_cols)};
}

Residue cofactor_rec(const ResidueRing& ring, const std::vector<Residue>& m, Index n) {
  if (n == 1) return m[0];
  Residue acc = ring.zero();
  std::vector<Residue> minor((n - 1) * (n - 1));
  for (Index c = 0; c < n; ++c) {
    Index k = 0;
    for (Index i = 1; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (j != c) minor[k++] = m[i * n + j];
    const Residue term = ring.mul(m[c], cofactor_rec(ring, minor, n - 1));
    acc = (c % 2 == 0) ? ring.add(acc, term) : ring.sub(acc, term);
  }
  return acc;
}

}  // namespace

std::string to_string(RingKind kind) {
  switch (kind) {
    case RingKind::LocalRing:
      return "local-ring";
    case RingKind::PrimeField:
      return "prime-field";
    case RingKind::QuadraticExtension:
      return "quadratic-field-extension";
  }
  return "?";
}

bool is_prime(Int n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

ResidueRing::ResidueRing(Int p, int r, bool quadratic, Int c0, Int c1)
    : p_(p), r_(r), modulus_(1), quadratic_(quadratic), c0_(c0), c1_(c1) {
  if (!is_prime(p)) throw DomainError("not a prime: " + std::to_string(p));
  if (r < 1) throw DomainError("exponent must be >= 1");
  for (int i = 0; i < r; ++i) {
    modulus_ *= p;
    if (modulus_ >= kMaxModulus) throw DomainError("modulus p^r too large for exact int64 arithmetic");
  }
}

ResidueRing ResidueRing::integers(Int p, int r) { return {p, r, false, 0, 0}; }

ResidueRing ResidueRing::quadratic(Int p, int r) {
  if (!is_prime(p)) throw DomainError("not a prime: " + std::to_string(p));
  for (Int c1 = 0; c1 < p; ++c1) {
    for (Int c0 = 0; c0 < p; ++c0) {
      bool has_root = false;
      for (Int x = 0; x < p && !has_root; ++x) has_root = (x * x + c1 * x + c0) % p == 0;
      if (!has_root) return {p, r, true, c0, c1};
    }
  }
  throw DomainError("no irreducible quadratic found");  // unreachable for primes
}

RingKind ResidueRing::kind() const {
  if (quadratic_) return RingKind::QuadraticExtension;
  return r_ == 1 ? RingKind::PrimeField : RingKind::LocalRing;
}

ResidueRing ResidueRing::with_exponent(int r) const { return {p_, r, quadratic_, c0_, c1_}; }

std::string ResidueRing::describe() const {
  std::string base = r_ == 1 ? "F_" + std::to_string(p_)
                             : "Z/" + std::to_string(p_) + "^" + std::to_string(r_);
  if (!quadratic_) return base;
  return base + "[t]/(t^2+" + std::to_string(c1_) + "t+" + std::to_string(c0_) + ")";
}

Residue ResidueRing::add(Residue x, Residue y) const {
  Int a = x.a + y.a;
  Int b = x.b + y.b;
  if (a >= modulus_) a -= modulus_;
  if (b >= modulus_) b -= modulus_;
  return {a, b};
}

Residue ResidueRing::sub(Residue x, Residue y) const {
  Int a = x.a - y.a;
  Int b = x.b - y.b;
  if (a < 0) a += modulus_;
  if (b < 0) b += modulus_;
  return {a, b};
}

Residue ResidueRing::neg(Residue x) const { return sub(Residue{}, x); }

Residue ResidueRing::mul(Residue x, Residue y) const {
  if (!quadratic_) return {mulmod(x.a, y.a, modulus_), 0};
  const Int ac = mulmod(x.a, y.a, modulus_);
  const Int bd = mulmod(x.b, y.b, modulus_);
  const Int cross = (mulmod(x.a, y.b, modulus_) + mulmod(x.b, y.a, modulus_)) % modulus_;
  return {reduce(ac - mulmod(bd, c0_, modulus_)), reduce(cross - mulmod(bd, c1_, modulus_))};
}

Residue ResidueRing::pow(Residue x, std::uint64_t e) const {
  Residue acc = one();
  while (e > 0) {
    if (e & 1U) acc = mul(acc, x);
    x = mul(x, x);
    e >>= 1U;
  }
  return acc;
}

Residue ResidueRing::conj(Residue x) const {
  if (!quadratic_) return x;
  return {reduce(x.a - mulmod(x.b, c1_, modulus_)), reduce(-x.b)};
}

bool ResidueRing::is_unit(Residue x) const {
  if (!quadratic_) return x.a % p_ != 0;
  return mul(x, conj(x)).a % p_ != 0;
}

std::optional<Residue> ResidueRing::inverse(Residue x) const {
  if (!is_unit(x)) return std::nullopt;
  auto inv_int = [this](Int v) {
    Int old_r = v, r = modulus_, old_s = 1, s = 0;
    while (r != 0) {
      const Int q = old_r / r;
      old_r -= q * r;
      std::swap(old_r, r);
      old_s -= q * s;
      std::swap(old_s, s);
    }
    return reduce(old_s);
  };
  if (!quadratic_) return Residue{inv_int(x.a), 0};
  const Residue c = conj(x);
  const Int norm = mul(x, c).a;
  return mul(c, {inv_int(norm), 0});
}

int ResidueRing::valuation(Residue x) const {
  if (x == Residue{}) return r_;
  int v = 0;
  Int a = x.a, b = x.b;
  while (v < r_ && a % p_ == 0 && b % p_ == 0) {
    a /= p_;
    b /= p_;
    ++v;
  }
  return v;
}

Residue ResidueRing::divide_by_p_power(Residue x, int v) const {
  Int d = 1;
  for (int i = 0; i < v; ++i) d *= p_;
  if (x.a % d != 0 || x.b % d != 0) throw DomainError("residue not divisible by p^v");
  return {x.a / d, x.b / d};
}

Residue ResidueRing::reduce_to(Residue x, const ResidueRing& smaller) const {
  return {x.a % smaller.modulus(), x.b % smaller.modulus()};
}

RingElement::RingElement(ResidueRing ring, Residue value)
    : ring_(ring), value_{ring.reduce(value.a), ring.is_quadratic() ? ring.reduce(value.b) : 0} {}

std::optional<RingElement> RingElement::inverse() const {
  auto inv = ring_.inverse(value_);
  if (!inv) return std::nullopt;
  return RingElement(ring_, *inv);
}

RingElement operator+(const RingElement& x, const RingElement& y) {
  require_same_ring(x.ring_, y.ring_);
  return {x.ring_, x.ring_.add(x.value_, y.value_)};
}

RingElement operator-(const RingElement& x, const RingElement& y) {
  require_same_ring(x.ring_, y.ring_);
  return {x.ring_, x.ring_.sub(x.value_, y.value_)};
}

RingElement operator*(const RingElement& x, const RingElement& y) {
  require_same_ring(x.ring_, y.ring_);
  return {x.ring_, x.ring_.mul(x.value_, y.value_)};
}

RingElement frobenius(const RingElement& x) {
  if (!x.ring().is_quadratic()) throw DomainError("frobenius needs the quadratic extension");
  return {x.ring(), x.ring().conj(x.value())};
}

RingMatrix::RingMatrix(ResidueRing ring, Index rows, Index cols)
    : ring_(ring), re_(IntMatrix::Zero(rows, cols)) {
  if (ring_.is_quadratic()) im_ = IntMatrix::Zero(rows, cols);
}

RingMatrix::RingMatrix(ResidueRing ring, const IntMatrix& re, const IntMatrix& im)
    : ring_(ring), re_(reduce_matrix(re, ring.modulus())) {
  if (ring_.is_quadratic()) {
    if (im.size() == 0) {
      im_ = IntMatrix::Zero(re.rows(), re.cols());
    } else {
      if (im.rows() != re.rows() || im.cols() != re.cols())
        throw DomainError("real and t-parts differ in shape");
      im_ = reduce_matrix(im, ring.modulus());
    }
  } else if (im.size() != 0 && (im.array() != 0).any()) {
    throw DomainError("t-part given for a ring without quadratic extension");
  }
}

RingMatrix RingMatrix::identity(const ResidueRing& ring, Index m) {
  return {ring, IntMatrix::Identity(m, m)};
}

void RingMatrix::set(Index i, Index j, Residue v) {
  re_(i, j) = ring_.reduce(v.a);
  if (ring_.is_quadratic()) {
    im_(i, j) = ring_.reduce(v.b);
  } else if (ring_.reduce(v.b) != 0) {
    throw DomainError("t-part given for a ring without quadratic extension");
  }
}

bool RingMatrix::is_zero() const {
  return (re_.array() == 0).all() && (im_.size() == 0 || (im_.array() == 0).all());
}

bool RingMatrix::is_identity() const {
  if (!is_square()) return false;
  return reduce_matrix(IntMatrix::Identity(rows(), cols()), ring_.modulus()) == re_ &&
         (im_.size() == 0 || (im_.array() == 0).all());
}

bool operator==(const RingMatrix& x, const RingMatrix& y) {
  return x.ring_ == y.ring_ && x.re_.rows() == y.re_.rows() && x.re_.cols() == y.re_.cols() &&
         x.re_ == y.re_ && x.im_ == y.im_;
}

RingMatrix operator+(const RingMatrix& x, const RingMatrix& y) {
  require_same_ring(x.ring(), y.ring());
  return {x.ring(), x.re() + y.re(), x.ring().is_quadratic() ? IntMatrix(x.im() + y.im()) : IntMatrix()};
}

RingMatrix operator-(const RingMatrix& x, const RingMatrix& y) {
  require_same_ring(x.ring(), y.ring());
  return {x.ring(), x.re() - y.re(), x.ring().is_quadratic() ? IntMatrix(x.im() - y.im()) : IntMatrix()};
}

RingMatrix operator-(const RingMatrix& x) {
  return {x.ring(), -x.re(), x.ring().is_quadratic() ? IntMatrix(-x.im()) : IntMatrix()};
}

RingMatrix operator*(const RingMatrix& x, const RingMatrix& y) {
  require_same_ring(x.ring(), y.ring());
  if (x.cols() != y.rows()) throw DomainError("matrix shapes do not compose");
  const ResidueRing& ring = x.ring();
  const Int mod = ring.modulus();
  if (!ring.is_quadratic()) return {ring, mod_product(x.re(), y.re(), mod)};
  // (X0 + X1 t)(Y0 + Y1 t) with t^2 = -c1 t - c0.
  const IntMatrix p00 = mod_product(x.re(), y.re(), mod);
  const IntMatrix p11 = mod_product(x.im(), y.im(), mod);
  const IntMatrix p01 = mod_product(x.re(), y.im(), mod);
  const IntMatrix p10 = mod_product(x.im(), y.re(), mod);
  return {ring, p00 - ring.c0() * p11, p01 + p10 - ring.c1() * p11};
}

RingMatrix operator*(Residue c, const RingMatrix& x) {
  const ResidueRing& ring = x.ring();
  RingMatrix out(ring, x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) out.set(i, j, ring.mul(c, x(i, j)));
  return out;
}

RingMatrix operator*(Int c, const RingMatrix& x) { return x.ring().from_int(c) * x; }

RingMatrix transpose(const RingMatrix& x) {
  return {x.ring(), x.re().transpose(),
          x.ring().is_quadratic() ? IntMatrix(x.im().transpose()) : IntMatrix()};
}

RingMatrix conjugate(const RingMatrix& x) {
  if (!x.ring().is_quadratic()) return x;
  // conj(a + b t) = (a - c1 b) - b t
  return {x.ring(), x.re() - x.ring().c1() * x.im(), -x.im()};
}

RingMatrix adjoint(const RingMatrix& x) { return transpose(conjugate(x)); }

Residue trace(const RingMatrix& x) {
  Residue acc = x.ring().zero();
  for (Index i = 0; i < std::min(x.rows(), x.cols()); ++i) acc = x.ring().add(acc, x(i, i));
  return acc;
}

RingMatrix power(const RingMatrix& x, std::uint64_t e) {
  if (!x.is_square()) throw DomainError("power of a non-square matrix");
  RingMatrix acc = RingMatrix::identity(x.ring(), x.rows());
  RingMatrix base = x;
  while (e > 0) {
    if (e & 1U) acc = acc * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return acc;
}

RingMatrix commutator(const RingMatrix& x, const RingMatrix& y) { return x * y - y * x; }

Residue determinant(const RingMatrix& x) {
  if (!x.is_square()) throw DomainError("determinant of a non-square matrix");
  const ResidueRing& ring = x.ring();
  Work w(x);
  const Index n = w.rows;
  Residue det = ring.one();
  for (Index col = 0; col < n; ++col) {
    // Pivot on the entry of least valuation; over the chain ring it divides
    // every other entry of the column.
    Index pivot = -1;
    int best = ring.r() + 1;
    for (Index i = col; i < n; ++i) {
      const Residue v = w.at(i, col);
      if (v == Residue{}) continue;
      const int val = ring.valuation(v);
      if (val < best) {
        best = val;
        pivot = i;
      }
    }
    if (pivot < 0) return ring.zero();
    if (pivot != col) {
      w.swap_rows(pivot, col);
      det = ring.neg(det);
    }
    const Residue piv = w.at(col, col);
    det = ring.mul(det, piv);
    const Residue unit_inv = *ring.inverse(ring.divide_by_p_power(piv, best));
    for (Index i = col + 1; i < n; ++i) {
      const Residue v = w.at(i, col);
      if (v == Residue{}) continue;
      const Residue f = ring.mul(ring.divide_by_p_power(v, best), unit_inv);
      axpy_row(ring, w, i, col, f, col);
    }
  }
  return det;
}

Residue determinant_cofactor(const RingMatrix& x) {
  if (!x.is_square()) throw DomainError("determinant of a non-square matrix");
  if (x.rows() == 0) return x.ring().one();
  Work w(x);
  return cofactor_rec(x.ring(), w.data, w.rows);
}

std::optional<RingMatrix> inverse(const RingMatrix& x) {
  if (!x.is_square()) throw DomainError("inverse of a non-square matrix");
  const ResidueRing& ring = x.ring();
  const Index n = x.rows();
  RingMatrix aug(ring, n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) aug.set(i, j, x(i, j));
    aug.set(i, n + i, ring.one());
  }
  Work w(aug);
  for (Index col = 0; col < n; ++col) {
    Index pivot = -1;
    for (Index i = col; i < n; ++i) {
      if (ring.is_unit(w.at(i, col))) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;  // every candidate is divisible by p
    w.swap_rows(col, pivot);
    const Residue inv = *ring.inverse(w.at(col, col));
    for (Index j = 0; j < w.cols; ++j) w.at(col, j) = ring.mul(inv, w.at(col, j));
    for (Index i = 0; i < n; ++i)
      if (i != col) axpy_row(ring, w, i, col, w.at(i, col));
  }
  RingMatrix out(ring, n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out.set(i, j, w.at(i, n + j));
  return out;
}

Kernel solve_kernel(const RingMatrix& a) {
  if (!a.ring().is_field()) throw NotAField("solve_kernel needs a field, got " + a.ring().describe());
  Work w(a);
  const Reduced red = rref(a.ring(), w, false);
  return kernel_from_rref(a.ring(), w, red);
}

Index rank(const RingMatrix& a) {
  if (!a.ring().is_field()) throw NotAField("rank needs a field, got " + a.ring().describe());
  Work w(a);
  return rref(a.ring(), w, false).rank();
}

Kernel free_kernel(const RingMatrix& a) {
  Work w(a);
  const Reduced red = rref(a.ring(), w, true);
  return kernel_from_rref(a.ring(), w, red);
}

std::optional<AffineSolution> solve_affine(const RingMatrix& a, const RingMatrix& b) {
  require_same_ring(a.ring(), b.ring());
  if (b.rows() != a.rows() || b.cols() != 1) throw DomainError("solve_affine: b must be a column");
  const ResidueRing& ring = a.ring();
  RingMatrix aug(ring, a.rows(), a.cols() + 1);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) aug.set(i, j, a(i, j));
    aug.set(i, a.cols(), ring.neg(b(i, 0)));
  }
  Work w(aug);
  Reduced red;
  try {
    red = rref(ring, w, true);
  } catch (const DomainError&) {
    return std::nullopt;
  }
  if (red.rank() != a.rows() || (red.rank() > 0 && red.pivot_cols.back() == a.cols())) return std::nullopt;
  // The augmented column is the last free column, so the last kernel vector
  // has final coordinate 1 and the others have final coordinate 0.
  const Kernel k = kernel_from_rref(ring, w, red);
  const Index nh = k.basis.cols() - 1;
  RingMatrix particular(ring, a.cols(), 1);
  RingMatrix hom(ring, a.cols(), nh);
  for (Index i = 0; i < a.cols(); ++i) {
    particular.set(i, 0, k.basis(i, nh));
    for (Index c = 0; c < nh; ++c) hom.set(i, c, k.basis(i, c));
  }
  std::vector<Index> free_cols(k.free_cols.begin(), k.free_cols.end() - 1);
  return AffineSolution{std::move(particular), {red.rank(), std::move(hom), std::move(free_cols)}};
}

RingMatrix reduce_exponent(const RingMatrix& x, int l) {
  if (l < 1 || l > x.ring().r()) throw DomainError("reduction exponent out of range");
  const ResidueRing smaller = x.ring().with_exponent(l);
  return {smaller, x.re(), x.im()};
}

RingMatrix lift_exponent(const RingMatrix& x, int r) {
  if (r < x.ring().r()) throw DomainError("lift exponent below current exponent");
  return {x.ring().with_exponent(r), x.re(), x.im()};
}

}  // namespace cgk
