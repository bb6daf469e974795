#include "cgk/liealg.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cgk/errors.hpp"
#include "cgk/polynomial.hpp"

namespace cgk {

namespace {

std::uint64_t ipow_u(std::uint64_t b, int e) {
  std::uint64_t out = 1;
  for (int i = 0; i < e; ++i) {
    if (__builtin_mul_overflow(out, b, &out)) throw DomainError("algebra too large to index");
  }
  return out;
}

void require_field(const ResidueRing& ring, const char* what) {
  if (!ring.is_field()) throw NotAField(std::string(what) + " needs a field, got " + ring.describe());
}

}  // namespace

LieAlgebra::LieAlgebra(GroupContext ctx)
    : ctx_(std::move(ctx)), scalars_(ResidueRing::integers(ctx_.p(), ctx_.r())) {
  const Index m = family().size();
  const bool quad = ring().is_quadratic();
  const Index ncoords = m * m * (quad ? 2 : 1);
  // Column c of the constraint matrix is the image of the c-th coordinate unit.
  std::vector<std::vector<Residue>> cols;
  for (Index c = 0; c < ncoords; ++c) {
    RingMatrix e(ring(), m, m);
    const Index entry = quad ? c / 2 : c;
    e.set(entry / m, entry % m, quad && c % 2 == 1 ? Residue{0, 1} : ring().one());
    cols.push_back(constraints(e));
  }
  const Index nrows = static_cast<Index>(cols.front().size());
  RingMatrix cmat(scalars_, nrows, ncoords);
  for (Index c = 0; c < ncoords; ++c)
    for (Index i = 0; i < nrows; ++i) cmat.set(i, c, cols[c][i]);
  const Kernel k = free_kernel(cmat);
  free_cols_ = k.free_cols;
  for (Index b = 0; b < k.basis.cols(); ++b) {
    RingMatrix x(ring(), m, m);
    for (Index i = 0; i < m * m; ++i) {
      const Residue v = quad ? Residue{k.basis(2 * i, b).a, k.basis(2 * i + 1, b).a} : k.basis(i, b);
      x.set(i / m, i % m, v);
    }
    basis_.push_back(std::move(x));
  }
  for (const auto& b : basis_) ad_basis_.push_back(ad(b));
}

std::vector<Residue> LieAlgebra::constraints(const RingMatrix& x) const {
  std::vector<Residue> out;
  auto push = [&](Residue v) {
    out.push_back({v.a, 0});
    if (ring().is_quadratic()) out.push_back({v.b, 0});
  };
  const Index m = x.rows();
  switch (family().kind) {
    case FamilyKind::SL: push(trace(x)); break;
    case FamilyKind::SO:
    case FamilyKind::SU: {
      if (family().kind == FamilyKind::SU) push(trace(x));
      const RingMatrix& q = ctx_.form();
      const RingMatrix s = (family().kind == FamilyKind::SO ? transpose(x) : adjoint(x)) * q + q * x;
      for (Index i = 0; i < m; ++i)
        for (Index j = i; j < m; ++j) push(s(i, j));
      break;
    }
  }
  return out;
}

std::vector<Residue> LieAlgebra::flatten(const RingMatrix& x) const {
  std::vector<Residue> out;
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) {
      out.push_back({x(i, j).a, 0});
      if (ring().is_quadratic()) out.push_back({x(i, j).b, 0});
    }
  return out;
}

bool LieAlgebra::contains(const RingMatrix& x) const {
  if (!(x.ring() == ring()) || x.rows() != family().size() || !x.is_square()) return false;
  for (const Residue& v : constraints(x))
    if (!(v == Residue{})) return false;
  return true;
}

IntVector LieAlgebra::coordinates(const RingMatrix& x) const {
  if (!contains(x)) throw DomainError("matrix is not in the Lie algebra");
  const auto flat = flatten(x);
  IntVector out(dim());
  for (int k = 0; k < dim(); ++k) out(k) = flat[free_cols_[k]].a;
  return out;
}

RingMatrix LieAlgebra::element(const IntVector& coords) const {
  if (coords.size() != dim()) throw DomainError("coordinate vector has the wrong length");
  RingMatrix x(ring(), family().size(), family().size());
  for (int k = 0; k < dim(); ++k)
    if (coords(k) % scalars_.modulus() != 0) x = x + coords(k) * basis_[k];
  return x;
}

RingMatrix LieAlgebra::element_from_code(std::uint64_t code) const {
  IntVector c(dim());
  const auto mod = static_cast<std::uint64_t>(scalars_.modulus());
  for (int k = 0; k < dim(); ++k) {
    c(k) = static_cast<Int>(code % mod);
    code /= mod;
  }
  return element(c);
}

std::uint64_t LieAlgebra::size() const {
  return ipow_u(static_cast<std::uint64_t>(scalars_.modulus()), dim());
}

RingMatrix LieAlgebra::ad(const RingMatrix& x) const {
  RingMatrix out(scalars_, dim(), dim());
  for (int i = 0; i < dim(); ++i) {
    const IntVector c = coordinates(commutator(x, basis_[i]));
    for (int j = 0; j < dim(); ++j) out.set(j, i, {c(j), 0});
  }
  return out;
}

Residue LieAlgebra::killing(const RingMatrix& x, const RingMatrix& y) const { return trace(ad(x) * ad(y)); }

RingMatrix LieAlgebra::killing_gram() const {
  RingMatrix g(scalars_, dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) g.set(i, j, trace(ad_basis_[i] * ad_basis_[j]));
  return g;
}

bool LieAlgebra::killing_nondegenerate() const { return scalars_.is_unit(determinant(killing_gram())); }

bool is_nilpotent(const RingMatrix& x) { return power(x, static_cast<std::uint64_t>(x.rows())).is_zero(); }

bool is_semisimple(const RingMatrix& x) {
  require_field(x.ring(), "is_semisimple");
  return evaluate(radical(charpoly(x)), x).is_zero();
}

JordanParts jordan_decompose(const RingMatrix& x) {
  require_field(x.ring(), "jordan_decompose");
  // Newton iteration S <- S - f(S) f'(S)^{-1} for the separable f = rad(chi).
  const Polynomial f = radical(charpoly(x));
  const Polynomial df = f.derivative();
  RingMatrix s = x;
  for (int iter = 0; iter < 64; ++iter) {
    const RingMatrix fs = evaluate(f, s);
    if (fs.is_zero()) return {s, x - s};
    const auto inv = inverse(evaluate(df, s));
    if (!inv) throw DomainError("jordan_decompose: f'(S) is singular");
    s = s - fs * *inv;
  }
  throw DomainError("jordan_decompose did not converge");
}

std::string to_string(JordanKind kind) {
  switch (kind) {
    case JordanKind::Semisimple: return "semisimple";
    case JordanKind::Nilpotent: return "nilpotent";
    case JordanKind::Mixed: return "mixed";
  }
  return "?";
}

JordanData jordan_type(const RingMatrix& x, FamilyKind kind) {
  require_field(x.ring(), "jordan_type");
  JordanData jd;
  const Index m = x.rows();
  if (is_semisimple(x)) {
    jd.kind = JordanKind::Semisimple;
    const Polynomial chi = charpoly(x);
    while (jd.zero_multiplicity < chi.degree() && chi.coeff(jd.zero_multiplicity) == Residue{}) ++jd.zero_multiplicity;
    std::vector<int> nonzero;
    for (const auto& [g, mult] : squarefree_factorization(chi))
      for (const auto& [h, d] : distinct_degree_factorization(g)) {
        (void)d;
        // every root of h is one distinct eigenvalue of multiplicity mult
        for (int i = 0; i < h.degree(); ++i) jd.multiplicities.push_back(mult);
      }
    std::sort(jd.multiplicities.rbegin(), jd.multiplicities.rend());
    if (kind == FamilyKind::SO) {
      nonzero = jd.multiplicities;
      if (jd.zero_multiplicity > 0) nonzero.erase(std::find(nonzero.begin(), nonzero.end(), jd.zero_multiplicity));
      for (std::size_t i = 0; i + 1 < nonzero.size(); i += 2) jd.pair_multiplicities.push_back(nonzero[i]);
    }
    return jd;
  }
  if (is_nilpotent(x)) {
    jd.kind = JordanKind::Nilpotent;
    std::vector<Index> rk(m + 2, 0);
    rk[0] = m;
    RingMatrix pw = RingMatrix::identity(x.ring(), m);
    for (Index j = 1; j <= m; ++j) {
      pw = pw * x;
      rk[j] = rank(pw);
    }
    for (Index j = 1; j <= m; ++j) jd.block_counts.push_back(static_cast<int>(rk[j - 1] - 2 * rk[j] + rk[j + 1]));
    while (!jd.block_counts.empty() && jd.block_counts.back() == 0) jd.block_counts.pop_back();
    return jd;
  }
  throw DomainError("jordan_type needs a semisimple or nilpotent element");
}

int closed_form_dim(const GroupFamily& family, const JordanData& jd) {
  const bool so = family.kind == FamilyKind::SO;
  if (jd.kind == JordanKind::Semisimple) {
    int sum = 0;
    if (so) {
      for (int r : jd.pair_multiplicities) sum += r * r;
      return jd.zero_multiplicity * (jd.zero_multiplicity - 1) / 2 + sum;
    }
    for (int r : jd.multiplicities) sum += r * r;
    return sum - 1;
  }
  if (jd.kind == JordanKind::Nilpotent) {
    int squares = 0, tail = 0, odd = 0;
    for (std::size_t j = jd.block_counts.size(); j-- > 0;) {
      tail += jd.block_counts[j];
      squares += tail * tail;
      if (j % 2 == 0) odd += jd.block_counts[j];  // block size j+1 is odd
    }
    return so ? (squares - odd) / 2 : squares - 1;
  }
  throw DomainError("closed_form_dim needs a pure Jordan type");
}

int centralizer_dim(const LieAlgebra& alg, const RingMatrix& x) {
  require_field(alg.scalars(), "centralizer_dim");
  return alg.dim() - static_cast<int>(rank(alg.ad(x)));
}

std::uint64_t centralizer_count_exhaustive(const LieAlgebra& alg, const RingMatrix& x) {
  const Int mod = alg.scalars().modulus();
  const int d = alg.dim();
  std::vector<std::vector<Int>> w;
  for (const auto& b : alg.basis()) {
    const RingMatrix c = commutator(x, b);
    std::vector<Int> v;
    for (Index i = 0; i < c.rows(); ++i)
      for (Index j = 0; j < c.cols(); ++j) {
        v.push_back(c(i, j).a);
        if (alg.ring().is_quadratic()) v.push_back(c(i, j).b);
      }
    w.push_back(std::move(v));
  }
  const std::size_t len = w.empty() ? 0 : w[0].size();
  // Flat table of all sums sum_{i in [lo, hi)} y_i w_i, y in order of codes.
  auto sums = [&](int lo, int hi) {
    std::vector<Int> out(len, 0);
    for (int i = lo; i < hi; ++i) {
      const std::size_t rows = out.size() / len;
      std::vector<Int> next(rows * len * mod);
      for (std::size_t r = 0; r < rows; ++r)
        for (Int y = 0; y < mod; ++y) {
          Int* dst = &next[(r * mod + y) * len];
          const Int* src = &out[r * len];
          for (std::size_t k = 0; k < len; ++k) dst[k] = (src[k] + y * w[i][k]) % mod;
        }
      out = std::move(next);
    }
    return out;
  };
  const int h = d / 2;
  const auto left = sums(0, h);
  const auto right = sums(h, d);
  const std::size_t nl = len ? left.size() / len : 1, nr = len ? right.size() / len : 1;
  if (len == 0) return static_cast<std::uint64_t>(nl * nr);
  // Exact base-mod packing when the vectors fit in 64 bits.
  const bool packable = static_cast<double>(len) * std::log2(static_cast<double>(mod)) < 63.0;
  std::uint64_t count = 0;
  if (packable) {
    auto pack = [&](const Int* v, bool negate) {
      std::uint64_t key = 0;
      for (std::size_t k = 0; k < len; ++k)
        key = key * static_cast<std::uint64_t>(mod) + static_cast<std::uint64_t>(negate ? (mod - v[k]) % mod : v[k]);
      return key;
    };
    std::vector<std::uint64_t> keys(nl);
    for (std::size_t r = 0; r < nl; ++r) keys[r] = pack(&left[r * len], false);
    std::sort(keys.begin(), keys.end());
    for (std::size_t r = 0; r < nr; ++r) {
      const auto range = std::equal_range(keys.begin(), keys.end(), pack(&right[r * len], true));
      count += static_cast<std::uint64_t>(range.second - range.first);
    }
    return count;
  }
  std::vector<std::vector<Int>> keys(nl);
  for (std::size_t r = 0; r < nl; ++r) keys[r].assign(left.begin() + r * len, left.begin() + (r + 1) * len);
  std::sort(keys.begin(), keys.end());
  std::vector<Int> neg(len);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t k = 0; k < len; ++k) neg[k] = (mod - right[r * len + k]) % mod;
    const auto range = std::equal_range(keys.begin(), keys.end(), neg);
    count += static_cast<std::uint64_t>(range.second - range.first);
  }
  return count;
}

std::uint64_t centralizer_group_count(const GroupContext& ctx, const RingMatrix& x, BudgetMeter& meter) {
  if (!(x.ring() == ctx.ring())) throw RingMismatch("centralizer_group_count ring mismatch");
  std::uint64_t n = 0;
  enumerate(ctx, [&](const RingMatrix& g) {
    if (g * x == x * g) ++n;
  }, meter);
  return n;
}

CentralizerReport centralizer_report(const LieAlgebra& alg, const RingMatrix& x, bool count_group,
                                     BudgetMeter& meter) {
  CentralizerReport rep;
  rep.algebra_dim = centralizer_dim(alg, x);
  rep.bound_rhs = alg.family().dim() - 2 * alg.family().rep_exponent();
  const FamilyKind kind = alg.family().kind;
  const JordanParts parts = jordan_decompose(x);
  rep.jordan_semisimple_part = jordan_type(parts.semisimple, kind);
  rep.jordan_nilpotent_part = jordan_type(parts.nilpotent, kind);
  if (parts.nilpotent.is_zero()) {
    rep.jordan = rep.jordan_semisimple_part;
  } else if (parts.semisimple.is_zero()) {
    rep.jordan = rep.jordan_nilpotent_part;
  } else {
    rep.jordan.kind = JordanKind::Mixed;
  }
  if (rep.jordan.kind != JordanKind::Mixed) rep.closed_form_dim = closed_form_dim(alg.family(), rep.jordan);
  if (count_group) rep.group_count = centralizer_group_count(alg.context(), x, meter);
  return rep;
}

ClaimedMaxima claimed_maxima(const GroupFamily& family) {
  const int n = family.n;
  if (family.kind != FamilyKind::SO) return {n * n, n * n - 1};
  const int generic = n * (n + 1) / 2 - 2 * (n - 1);
  const int ss = n == 3 ? 4 : n == 5 ? 9 : generic;
  return {ss, generic};
}

ScanReport scan_inequality(const LieAlgebra& alg, BudgetMeter& meter, Shard shard, bool exhaustive_counts) {
  require_field(alg.scalars(), "scan_inequality");
  ScanReport rep;
  rep.algebra = alg.context().describe();
  rep.p = alg.context().p();
  rep.dim = alg.dim();
  rep.bound_rhs = alg.family().dim() - 2 * alg.family().rep_exponent();
  rep.claimed = claimed_maxima(alg.family());
  const std::uint64_t total = alg.size();
  const FamilyKind kind = alg.family().kind;
  const auto p = static_cast<std::uint64_t>(alg.scalars().modulus());
  for (std::uint64_t code = shard.begin(total); code < shard.end(total); ++code) {
    meter.charge();
    const RingMatrix x = alg.element_from_code(code);
    ++rep.scanned;
    const int cdim = centralizer_dim(alg, x);
    if (exhaustive_counts && centralizer_count_exhaustive(alg, x) != ipow_u(p, cdim)) ++rep.count_mismatches;
    const bool ss = is_semisimple(x);
    const bool nil = !ss && is_nilpotent(x);
    if (ss) ++rep.semisimple;
    if (nil) ++rep.nilpotent;
    if (!ss && !nil) ++rep.mixed;
    if (ss || nil) {
      if (closed_form_dim(alg.family(), jordan_type(x, kind)) != cdim) {
        ++rep.closed_form_mismatches;
        if (rep.closed_form_examples.size() < 5) rep.closed_form_examples.push_back(code);
      }
    }
    if (code == 0) continue;  // the zero element is excluded from the bound
    if (cdim > rep.max_dim) {
      rep.max_dim = cdim;
      rep.max_witness = code;
    }
    if (ss) rep.max_semisimple_dim = std::max(rep.max_semisimple_dim, cdim);
    if (nil) rep.max_nilpotent_dim = std::max(rep.max_nilpotent_dim, cdim);
    if (cdim > rep.bound_rhs) {
      ++rep.bound_violations;
      if (rep.bound_examples.size() < 5) rep.bound_examples.push_back(code);
    }
  }
  return rep;
}

ScanReport merge_scans(const std::vector<ScanReport>& parts) {
  if (parts.empty()) throw DomainError("merge_scans needs at least one part");
  ScanReport out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const ScanReport& s = parts[i];
    out.scanned += s.scanned;
    out.semisimple += s.semisimple;
    out.nilpotent += s.nilpotent;
    out.mixed += s.mixed;
    if (s.max_dim > out.max_dim) {
      out.max_dim = s.max_dim;
      out.max_witness = s.max_witness;
    }
    out.max_semisimple_dim = std::max(out.max_semisimple_dim, s.max_semisimple_dim);
    out.max_nilpotent_dim = std::max(out.max_nilpotent_dim, s.max_nilpotent_dim);
    out.count_mismatches += s.count_mismatches;
    out.closed_form_mismatches += s.closed_form_mismatches;
    out.bound_violations += s.bound_violations;
    for (auto c : s.closed_form_examples)
      if (out.closed_form_examples.size() < 5) out.closed_form_examples.push_back(c);
    for (auto c : s.bound_examples)
      if (out.bound_examples.size() < 5) out.bound_examples.push_back(c);
  }
  return out;
}

}  // namespace cgk
