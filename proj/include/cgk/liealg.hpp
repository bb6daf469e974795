#pragma once

// Lie algebras g(Z/p^k) of the group families, their Killing form, Jordan
// decomposition, Jordan types, centralizer dimensions and the closed-form
// centralizer dimension formulas.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cgk/budget.hpp"
#include "cgk/groupscheme.hpp"

namespace cgk {

/// g as a free Z/p^k-module inside the (n+1)x(n+1) matrices over the ring of
/// the context. Elements are stored as matrices; coordinates are taken in the
/// basis produced by solving the linearized group equations.
class LieAlgebra {
 public:
  explicit LieAlgebra(GroupContext ctx);

  const GroupContext& context() const { return ctx_; }
  const GroupFamily& family() const { return ctx_.family(); }
  /// Ring of the matrix entries (quadratic for SU).
  const ResidueRing& ring() const { return ctx_.ring(); }
  /// Ring of the coordinates, Z/p^k.
  const ResidueRing& scalars() const { return scalars_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<RingMatrix>& basis() const { return basis_; }

  /// Linearized equations: trace 0 (SL, SU), X^T Q + Q X = 0 (SO), X^* Q + Q X = 0 (SU).
  bool contains(const RingMatrix& x) const;
  /// Coordinates over Z/p^k; throws DomainError when x is not in g.
  IntVector coordinates(const RingMatrix& x) const;
  RingMatrix element(const IntVector& coords) const;
  /// Element whose coordinates are the base-p^k digits of code (lowest first).
  RingMatrix element_from_code(std::uint64_t code) const;
  /// Number of elements, p^{k dim}.
  std::uint64_t size() const;

  /// Matrix of ad x in the basis, over Z/p^k.
  RingMatrix ad(const RingMatrix& x) const;
  /// ad of the basis elements, cached.
  const std::vector<RingMatrix>& ad_basis() const { return ad_basis_; }
  /// B(x, y) = Tr(ad x ad y).
  Residue killing(const RingMatrix& x, const RingMatrix& y) const;
  RingMatrix killing_gram() const;
  /// Gram determinant of B is a unit of Z/p^k.
  bool killing_nondegenerate() const;

 private:
  std::vector<Residue> constraints(const RingMatrix& x) const;
  // Flattened Z/p^k coordinates of a full matrix.
  std::vector<Residue> flatten(const RingMatrix& x) const;

  GroupContext ctx_;
  ResidueRing scalars_;
  std::vector<RingMatrix> basis_;
  std::vector<Index> free_cols_;
  std::vector<RingMatrix> ad_basis_;
};

struct JordanParts {
  RingMatrix semisimple;
  RingMatrix nilpotent;
};

/// X = X_s + X_n over a field, both polynomials in X.
JordanParts jordan_decompose(const RingMatrix& x);

bool is_nilpotent(const RingMatrix& x);
/// Minimal polynomial squarefree (zero counts as semisimple).
bool is_semisimple(const RingMatrix& x);

enum class JordanKind { Semisimple, Nilpotent, Mixed };
std::string to_string(JordanKind kind);

struct JordanData {
  JordanKind kind = JordanKind::Semisimple;
  /// Semisimple: multiplicities of the distinct eigenvalues over the
  /// algebraic closure, decreasing, the zero eigenvalue included.
  std::vector<int> multiplicities;
  /// Semisimple: multiplicity of the eigenvalue 0.
  int zero_multiplicity = 0;
  /// Semisimple SO: multiplicities of the pairs (l, -l), decreasing.
  std::vector<int> pair_multiplicities;
  /// Nilpotent: block_counts[j-1] = number of Jordan blocks of size j.
  std::vector<int> block_counts;
};

/// Throws DomainError for mixed elements; decompose first.
JordanData jordan_type(const RingMatrix& x, FamilyKind kind);

/// The closed-form dim C_g(X) for the family; SU uses the SL formulas.
int closed_form_dim(const GroupFamily& family, const JordanData& jd);

/// dim g - rank(ad x) over the residue field.
int centralizer_dim(const LieAlgebra& alg, const RingMatrix& x);

/// Number of Y in g with [X, Y] = 0, by meet-in-the-middle over all
/// coefficient vectors of Y (no rank computation involved).
std::uint64_t centralizer_count_exhaustive(const LieAlgebra& alg, const RingMatrix& x);

/// |{g in G : g X = X g}| by filtering the enumeration.
std::uint64_t centralizer_group_count(const GroupContext& ctx, const RingMatrix& x, BudgetMeter& meter);

struct CentralizerReport {
  int algebra_dim = 0;
  std::optional<std::uint64_t> group_count;
  std::optional<int> closed_form_dim;
  int bound_rhs = 0;
  JordanData jordan;
  JordanData jordan_semisimple_part;
  JordanData jordan_nilpotent_part;
};

CentralizerReport centralizer_report(const LieAlgebra& alg, const RingMatrix& x, bool count_group,
                                     BudgetMeter& meter);

/// Largest dim C_g(X) over X != 0 predicted by the closed-form analysis:
/// semisimple and nilpotent separately.
struct ClaimedMaxima {
  int semisimple = 0;
  int nilpotent = 0;
};
ClaimedMaxima claimed_maxima(const GroupFamily& family);

struct ScanReport {
  std::string algebra;
  Int p = 0;
  int dim = 0;
  int bound_rhs = 0;
  std::uint64_t scanned = 0;
  std::uint64_t semisimple = 0;
  std::uint64_t nilpotent = 0;
  std::uint64_t mixed = 0;
  int max_dim = -1;
  std::uint64_t max_witness = 0;  // coefficient code of the first maximiser
  int max_semisimple_dim = -1;
  int max_nilpotent_dim = -1;
  ClaimedMaxima claimed;
  /// Elements where |C_g(X)| != p^{dim C_g(X)}.
  std::uint64_t count_mismatches = 0;
  /// Pure elements where the closed form disagrees.
  std::uint64_t closed_form_mismatches = 0;
  /// Nonzero elements with dim C_g(X) > dim G - 2e.
  std::uint64_t bound_violations = 0;
  std::vector<std::uint64_t> closed_form_examples;  // first few codes
  std::vector<std::uint64_t> bound_examples;

  bool counts_ok() const { return count_mismatches == 0; }
  bool closed_forms_ok() const { return closed_form_mismatches == 0; }
  bool bound_ok() const { return bound_violations == 0; }
};

/// Scans every X in g(F_p) (or the shard's block of coefficient codes).
/// Charged one unit per element. Shard reports merge with merge_scans.
ScanReport scan_inequality(const LieAlgebra& alg, BudgetMeter& meter, Shard shard = {},
                           bool exhaustive_counts = true);
ScanReport merge_scans(const std::vector<ScanReport>& parts);

}  // namespace cgk
