#include "cgk/groupscheme.hpp"

#include <algorithm>

#include "cgk/errors.hpp"

namespace cgk {

namespace {

std::vector<Int> prime_divisors(Int x) {
  std::vector<Int> out;
  x = x < 0 ? -x : x;
  for (Int d = 2; d * d <= x; ++d) {
    if (x % d != 0) continue;
    out.push_back(d);
    while (x % d == 0) x /= d;
  }
  if (x > 1) out.push_back(x);
  return out;
}

std::uint64_t checked_mul(std::uint64_t x, std::uint64_t y) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(x, y, &out)) throw DomainError("group order overflows 64 bits");
  return out;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t e) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < e; ++i) out = checked_mul(out, base);
  return out;
}

IntMatrix identity_form(int m) { return IntMatrix::Identity(m, m); }

void validate_form(const GroupFamily& f) {
  if (f.form.rows() != f.size() || f.form.cols() != f.size())
    throw DomainError("form matrix must be " + std::to_string(f.size()) + "x" + std::to_string(f.size()));
  if (f.form != f.form.transpose()) throw DomainError("form matrix must be symmetric");
  if (form_determinant(f) == 0) throw DomainError("form matrix must be invertible");
}

// Entry digit of a column code: the ring has `size` residues, listed a + b*M.
Residue digit_residue(const ResidueRing& ring, Int digit) {
  return {digit % ring.modulus(), digit / ring.modulus()};
}

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::SL: return "SL";
    case FamilyKind::SO: return "SO";
    case FamilyKind::SU: return "SU";
  }
  return "?";
}

FamilyKind parse_family_kind(const std::string& text) {
  if (text == "SL") return FamilyKind::SL;
  if (text == "SO") return FamilyKind::SO;
  if (text == "SU") return FamilyKind::SU;
  throw DomainError("unknown family kind '" + text + "' (expected SL, SO or SU)");
}

GroupFamily GroupFamily::SL(int n) {
  if (n < 1) throw DomainError("SL needs n >= 1");
  return {FamilyKind::SL, n, identity_form(n + 1)};
}

GroupFamily GroupFamily::SO(int n, IntMatrix form) {
  if (n < 2) throw DomainError("SO needs n >= 2");
  GroupFamily f{FamilyKind::SO, n, form.size() == 0 ? identity_form(n + 1) : std::move(form)};
  validate_form(f);
  return f;
}

GroupFamily GroupFamily::SU(int n, IntMatrix form) {
  if (n < 1) throw DomainError("SU needs n >= 1");
  GroupFamily f{FamilyKind::SU, n, form.size() == 0 ? identity_form(n + 1) : std::move(form)};
  validate_form(f);
  return f;
}

int GroupFamily::dim() const { return kind == FamilyKind::SO ? n * (n + 1) / 2 : n * (n + 2); }

int GroupFamily::rep_exponent() const {
  if (kind == FamilyKind::SO) return n < 6 ? 1 : n - 2;
  return n;
}

std::string GroupFamily::describe() const { return to_string(kind) + "_" + std::to_string(size()); }

Int form_determinant(const GroupFamily& family) {
  // Bareiss fraction-free elimination; every division is exact.
  const Index m = family.form.rows();
  std::vector<__int128> a(m * m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) a[i * m + j] = family.form(i, j);
  __int128 prev = 1;
  int sign = 1;
  for (Index k = 0; k + 1 < m; ++k) {
    if (a[k * m + k] == 0) {
      Index s = k + 1;
      while (s < m && a[s * m + k] == 0) ++s;
      if (s == m) return 0;
      for (Index j = 0; j < m; ++j) std::swap(a[k * m + j], a[s * m + j]);
      sign = -sign;
    }
    for (Index i = k + 1; i < m; ++i)
      for (Index j = k + 1; j < m; ++j)
        a[i * m + j] = (a[i * m + j] * a[k * m + k] - a[i * m + k] * a[k * m + j]) / prev;
    prev = a[k * m + k];
  }
  return static_cast<Int>(sign * a[(m - 1) * m + (m - 1)]);
}

std::vector<Int> bad_primes(const GroupFamily& family) {
  std::vector<Int> out{2};
  auto add = [&out](Int x) {
    for (Int p : prime_divisors(x)) out.push_back(p);
  };
  if (family.kind == FamilyKind::SO) {
    if (family.size() >= 7) out.push_back(3);
    add(family.n - 1);
  } else {
    add(family.size());
  }
  if (family.kind != FamilyKind::SL) add(2 * form_determinant(family));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_bad_prime(const GroupFamily& family, Int p) {
  const auto bad = bad_primes(family);
  return std::find(bad.begin(), bad.end(), p) != bad.end();
}

GroupContext::GroupContext(GroupFamily family, Int p, int r, bool allow_bad_primes)
    : family_(std::move(family)),
      ring_(family_.uses_quadratic_ring() ? ResidueRing::quadratic(p, r) : ResidueRing::integers(p, r)),
      form_(ring_, family_.form),
      bad_(is_bad_prime(family_, p)) {
  if (bad_ && !allow_bad_primes)
    throw BadPrime(std::to_string(p) + " is a bad prime for " + family_.describe());
  if (family_.kind != FamilyKind::SL && form_determinant(family_) % p == 0)
    throw DomainError("form matrix is singular mod " + std::to_string(p));
}

GroupContext GroupContext::at_exponent(int l) const { return {family_, p(), l, true}; }

std::string GroupContext::describe() const { return family_.describe() + "(" + ring_.describe() + ")"; }

bool contains(const GroupContext& ctx, const RingMatrix& m) {
  if (!(m.ring() == ctx.ring()) || !m.is_square() || m.rows() != ctx.family().size()) return false;
  if (!(determinant(m) == ctx.ring().one())) return false;
  switch (ctx.family().kind) {
    case FamilyKind::SL: return true;
    case FamilyKind::SO: return transpose(m) * ctx.form() * m == ctx.form();
    case FamilyKind::SU: return adjoint(m) * ctx.form() * m == ctx.form();
  }
  return false;
}

GroupElement::GroupElement(const GroupContext& ctx, RingMatrix m) : m_(std::move(m)) {
  if (!contains(ctx, m_)) throw DomainError("matrix is not in " + ctx.describe());
}

GroupElement operator*(const GroupElement& x, const GroupElement& y) {
  return {GroupElement::Trusted{}, x.m_ * y.m_};
}

GroupElement inverse(const GroupElement& g) { return {GroupElement::Trusted{}, *inverse(g.m_)}; }

// Depth-first search over columns in lexicographic order of column codes.
class GroupEnumerator {
 public:
  GroupEnumerator(const GroupContext& ctx, const ElementVisitor& visit, BudgetMeter& meter)
      : ctx_(ctx), ring_(ctx.ring()), m_(ctx.family().size()), visit_(visit), meter_(meter),
        cols_(m_, std::vector<Residue>(m_)), qcols_(m_, std::vector<Residue>(m_)) {
    per_column_ = 1;
    for (Index i = 0; i < m_; ++i) per_column_ = checked_mul(per_column_, static_cast<std::uint64_t>(ring_.size()));
  }

  std::uint64_t per_column() const { return per_column_; }

  void run(std::uint64_t first_begin, std::uint64_t first_end) {
    for (std::uint64_t code = first_begin; code < first_end; ++code) {
      meter_.charge();
      decode(code, cols_[0]);
      if (accept(0)) descend(1);
    }
  }

 private:
  void decode(std::uint64_t code, std::vector<Residue>& col) const {
    const auto size = static_cast<std::uint64_t>(ring_.size());
    for (Index i = 0; i < m_; ++i) {
      col[i] = digit_residue(ring_, static_cast<Int>(code % size));
      code /= size;
    }
  }

  Residue dot(const std::vector<Residue>& x, const std::vector<Residue>& y, bool conj_left) const {
    Residue acc = ring_.zero();
    for (Index i = 0; i < m_; ++i) acc = ring_.add(acc, ring_.mul(conj_left ? ring_.conj(x[i]) : x[i], y[i]));
    return acc;
  }

  // Constraints that involve column 0 only.
  bool accept(Index j) {
    if (ctx_.family().kind == FamilyKind::SL) return prefix_independent(j);
    return norm_ok(j);
  }

  // Q c_j into qcols_[j], then c_j^* Q c_j = Q_jj.
  bool norm_ok(Index j) {
    const RingMatrix& q = ctx_.form();
    for (Index i = 0; i < m_; ++i) {
      Residue acc = ring_.zero();
      for (Index k = 0; k < m_; ++k) acc = ring_.add(acc, ring_.mul(q(i, k), cols_[j][k]));
      qcols_[j][i] = acc;
    }
    return dot(cols_[j], qcols_[j], ctx_.family().kind == FamilyKind::SU) == q(j, j);
  }

  bool prefix_independent(Index j) const {
    const ResidueRing field = ring_.residue_field();
    RingMatrix pre(field, m_, j + 1);
    for (Index c = 0; c <= j; ++c)
      for (Index i = 0; i < m_; ++i) pre.set(i, c, ring_.reduce_to(cols_[c][i], field));
    return rank(pre) == j + 1;
  }

  RingMatrix assemble() const {
    RingMatrix g(ring_, m_, m_);
    for (Index c = 0; c < m_; ++c)
      for (Index i = 0; i < m_; ++i) g.set(i, c, cols_[c][i]);
    return g;
  }

  void descend(Index j) {
    if (j == m_) {
      const RingMatrix g = assemble();
      if (determinant(g) == ring_.one()) visit_(g);
      return;
    }
    if (ctx_.family().kind != FamilyKind::SL) {
      form_column(j);
      return;
    }
    if (j == m_ - 1) {
      solve_last_column();
      return;
    }
    for (std::uint64_t code = 0; code < per_column_; ++code) {
      meter_.charge();
      decode(code, cols_[j]);
      if (accept(j)) descend(j + 1);
    }
  }

  // The off-diagonal form equations c_i^* Q c_j = Q_ij (i < j) are linear in
  // c_j; only the affine solution space is scanned against the norm equation.
  void form_column(Index j) {
    const bool herm = ctx_.family().kind == FamilyKind::SU;
    RingMatrix a(ring_, j, m_), b(ring_, j, 1);
    for (Index i = 0; i < j; ++i) {
      for (Index k = 0; k < m_; ++k) a.set(i, k, herm ? ring_.conj(qcols_[i][k]) : qcols_[i][k]);
      b.set(i, 0, ctx_.form()(i, j));
    }
    const auto sol = solve_affine(a, b);
    if (!sol) return;  // earlier columns dependent mod p
    const RingMatrix& hom = sol->homogeneous.basis;
    const Index nh = hom.cols();
    const auto size = static_cast<std::uint64_t>(ring_.size());
    std::uint64_t total = 1;
    for (Index i = 0; i < nh; ++i) total *= size;
    std::vector<Residue> z(nh);
    for (std::uint64_t code = 0; code < total; ++code) {
      meter_.charge();
      std::uint64_t c = code;
      for (Index i = 0; i < nh; ++i) {
        z[i] = digit_residue(ring_, static_cast<Int>(c % size));
        c /= size;
      }
      for (Index k = 0; k < m_; ++k) {
        Residue acc = sol->particular(k, 0);
        for (Index i = 0; i < nh; ++i) acc = ring_.add(acc, ring_.mul(hom(k, i), z[i]));
        cols_[j][k] = acc;
      }
      if (norm_ok(j)) descend(j + 1);
    }
  }

  // det is linear in the last column: sum_i cof_i x_i = 1. Some cofactor is a
  // unit because the first m-1 columns are independent mod p.
  void solve_last_column() {
    const Index last = m_ - 1;
    std::vector<Residue> cof(m_);
    for (Index i = 0; i < m_; ++i) {
      if (m_ == 1) {
        cof[i] = ring_.one();
        break;
      }
      RingMatrix minor(ring_, last, last);
      for (Index rr = 0, row = 0; rr < m_; ++rr) {
        if (rr == i) continue;
        for (Index c = 0; c < last; ++c) minor.set(row, c, cols_[c][rr]);
        ++row;
      }
      const Residue d = determinant(minor);
      cof[i] = (i + last) % 2 == 0 ? d : ring_.neg(d);
    }
    Index pivot = 0;
    while (pivot < m_ && !ring_.is_unit(cof[pivot])) ++pivot;
    const Residue inv = *ring_.inverse(cof[pivot]);
    const auto size = static_cast<std::uint64_t>(ring_.size());
    std::uint64_t free_total = 1;
    for (Index i = 0; i + 1 < m_; ++i) free_total *= size;
    for (std::uint64_t code = 0; code < free_total; ++code) {
      meter_.charge();
      std::uint64_t c = code;
      Residue rest = ring_.one();
      for (Index i = 0; i < m_; ++i) {
        if (i == pivot) continue;
        cols_[last][i] = digit_residue(ring_, static_cast<Int>(c % size));
        c /= size;
        rest = ring_.sub(rest, ring_.mul(cof[i], cols_[last][i]));
      }
      cols_[last][pivot] = ring_.mul(inv, rest);
      visit_(assemble());
    }
  }

  const GroupContext& ctx_;
  const ResidueRing& ring_;
  Index m_;
  const ElementVisitor& visit_;
  BudgetMeter& meter_;
  std::uint64_t per_column_ = 1;
  std::vector<std::vector<Residue>> cols_;
  std::vector<std::vector<Residue>> qcols_;
};

void enumerate(const GroupContext& ctx, const ElementVisitor& visit, BudgetMeter& meter, Shard shard) {
  GroupEnumerator e(ctx, visit, meter);
  e.run(shard.begin(e.per_column()), shard.end(e.per_column()));
}

std::vector<RingMatrix> elements(const GroupContext& ctx, BudgetMeter& meter, Shard shard) {
  std::vector<RingMatrix> out;
  enumerate(ctx, [&out](const RingMatrix& g) { out.push_back(g); }, meter, shard);
  return out;
}

std::uint64_t enumerate_count(const GroupContext& ctx, BudgetMeter& meter, Shard shard) {
  std::uint64_t n = 0;
  enumerate(ctx, [&n](const RingMatrix&) { ++n; }, meter, shard);
  return n;
}

std::uint64_t order(const GroupContext& ctx, BudgetMeter& meter) {
  const std::uint64_t base = enumerate_count(ctx.r() == 1 ? ctx : ctx.at_exponent(1), meter);
  const auto lift = checked_pow(static_cast<std::uint64_t>(ctx.p()),
                                static_cast<std::uint64_t>(ctx.r() - 1) * ctx.family().dim());
  return checked_mul(base, lift);
}

void enumerate_kernel(const GroupContext& ctx, int l, const ElementVisitor& visit, BudgetMeter& meter) {
  if (l < 1 || l >= ctx.r()) throw DomainError("kernel level must satisfy 1 <= l < r");
  const ResidueRing small = ctx.ring().with_exponent(ctx.r() - l);
  const Index m = ctx.family().size();
  const auto size = static_cast<std::uint64_t>(small.size());
  const std::uint64_t total = checked_pow(size, static_cast<std::uint64_t>(m * m));
  RingMatrix y(small, m, m);
  for (std::uint64_t code = 0; code < total; ++code) {
    meter.charge();
    std::uint64_t c = code;
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) {
        y.set(i, j, digit_residue(small, static_cast<Int>(c % size)));
        c /= size;
      }
    const RingMatrix g = kernel_exp(ctx, y, l);
    if (contains(ctx, g)) visit(g);
  }
}

std::uint64_t kernel_count(const GroupContext& ctx, int l, BudgetMeter& meter) {
  std::uint64_t n = 0;
  enumerate_kernel(ctx, l, [&n](const RingMatrix&) { ++n; }, meter);
  return n;
}

GroupElement reduce(const GroupElement& g, int l) {
  // Reduction of a member satisfies the same equations mod p^l.
  return GroupElement(GroupElement::Trusted{}, reduce_exponent(g.matrix(), l));
}

RingMatrix kernel_log(const GroupContext& ctx, const RingMatrix& g, int l) {
  const int r = ctx.r();
  if (l < 1 || l >= r) throw DomainError("kernel_log needs 1 <= l < r");
  if (2 * l < r) throw DomainError("kernel_log needs 2l >= r");
  if (!(g.ring() == ctx.ring())) throw RingMismatch("kernel_log ring mismatch");
  const RingMatrix d = g - RingMatrix::identity(ctx.ring(), g.rows());
  const ResidueRing small = ctx.ring().with_exponent(r - l);
  RingMatrix x(small, g.rows(), g.cols());
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j) {
      const Residue v = d(i, j);
      if (ctx.ring().valuation(v) < l) throw DomainError("element is not in the level-l kernel");
      x.set(i, j, ctx.ring().divide_by_p_power(v, l));
    }
  return x;
}

RingMatrix kernel_exp(const GroupContext& ctx, const RingMatrix& x, int l) {
  if (!(x.ring() == ctx.ring().with_exponent(ctx.r() - l))) throw RingMismatch("kernel_exp expects X over Z/p^{r-l}");
  Int pl = 1;
  for (int i = 0; i < l; ++i) pl *= ctx.p();
  return RingMatrix::identity(ctx.ring(), x.rows()) + pl * lift_exponent(x, ctx.r());
}

CongruenceLevel CongruenceLevel::of(Int q) {
  if (q < 1) throw DomainError("level must be positive");
  CongruenceLevel out{q, {}};
  Int x = q;
  for (Int p : prime_divisors(q)) {
    int r = 0;
    while (x % p == 0) {
      x /= p;
      ++r;
    }
    out.factors.emplace_back(p, r);
  }
  return out;
}

bool CongruenceLevel::square_free() const {
  return std::all_of(factors.begin(), factors.end(), [](const auto& f) { return f.second == 1; });
}

std::uint64_t sl_order_composite(int n, Int q, BudgetMeter& meter) {
  const Index m = n + 1;
  if (q == 1) return 1;
  const std::uint64_t total = checked_pow(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(m * m));
  std::vector<Int> a(m * m);
  std::function<Int(std::vector<Int>&, Index)> det = [&](std::vector<Int>& x, Index k) -> Int {
    if (k == 1) return x[0] % q;
    Int acc = 0;
    std::vector<Int> minor((k - 1) * (k - 1));
    for (Index c = 0; c < k; ++c) {
      for (Index i = 1; i < k; ++i)
        for (Index j = 0, jj = 0; j < k; ++j)
          if (j != c) minor[(i - 1) * (k - 1) + jj++] = x[i * k + j];
      const Int term = x[c] * det(minor, k - 1) % q;
      acc = (c % 2 == 0 ? acc + term : acc - term) % q;
    }
    return acc;
  };
  std::uint64_t count = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    meter.charge();
    std::uint64_t c = code;
    for (auto& v : a) {
      v = static_cast<Int>(c % static_cast<std::uint64_t>(q));
      c /= static_cast<std::uint64_t>(q);
    }
    if (((det(a, m) % q) + q) % q == 1 % q) ++count;
  }
  return count;
}

std::uint64_t index_V(const GroupFamily& family, const CongruenceLevel& level, BudgetMeter& meter,
                      bool allow_bad_primes) {
  std::uint64_t v = 1;
  for (const auto& [p, r] : level.factors) {
    if (!allow_bad_primes && is_bad_prime(family, p))
      throw BadPrime(std::to_string(p) + " is a bad prime for " + family.describe());
    v = checked_mul(v, order(GroupContext(family, p, r, true), meter));
  }
  return v;
}

WittDiagnostic witt_index(const GroupFamily& family, Int p) {
  if (family.kind != FamilyKind::SO) throw DomainError("Witt index is defined for SO families");
  const Int det = form_determinant(family);
  if (p == 2 || det % p == 0) throw BadPrime("Witt diagnostic needs odd p not dividing det Q");
  const int m = family.size();
  if (m % 2 == 1) return {(m - 1) / 2, "SO", true};
  const int k = m / 2;
  const auto field = ResidueRing::prime_field(p);
  const Residue d = field.from_int(k % 2 == 0 ? det : -det);
  const bool square = field.pow(d, static_cast<std::uint64_t>((p - 1) / 2)) == field.one();
  return square ? WittDiagnostic{k, "SO+", true} : WittDiagnostic{k - 1, "SO-", false};
}

}  // namespace cgk
