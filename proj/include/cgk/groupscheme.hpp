#pragma once

// Finite groups G(Z/p^r) for SL_{n+1}, SO(Q) and SU(Q): membership,
// column-by-column enumeration, orders via the kernel filtration, reduction
// maps, congruence kernels and the CRT factorization of V(q).

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cgk/budget.hpp"
#include "cgk/ringalg.hpp"

namespace cgk {

enum class FamilyKind { SL, SO, SU };

std::string to_string(FamilyKind kind);
FamilyKind parse_family_kind(const std::string& text);

/// Matrix size n+1. `form` is an integer (n+1)x(n+1) symmetric matrix; it is
/// the quadratic form for SO and the Hermitian form for SU (integer entries
/// are fixed by conjugation). Ignored for SL.
struct GroupFamily {
  FamilyKind kind = FamilyKind::SL;
  int n = 1;
  IntMatrix form;

  static GroupFamily SL(int n);
  static GroupFamily SO(int n, IntMatrix form = IntMatrix());
  static GroupFamily SU(int n, IntMatrix form = IntMatrix());

  int size() const { return n + 1; }
  /// F_p-dimension of the Lie algebra: n(n+2) for SL and SU, n(n+1)/2 for SO.
  int dim() const;
  /// e(G): SO with n < 6 gives 1, SO with n >= 6 gives n - 2, SL and SU give n.
  int rep_exponent() const;
  bool uses_quadratic_ring() const { return kind == FamilyKind::SU; }
  std::string describe() const;

  friend bool operator==(const GroupFamily& x, const GroupFamily& y) {
    return x.kind == y.kind && x.n == y.n && x.form == y.form;
  }
};

/// Exact integer determinant of the form matrix.
Int form_determinant(const GroupFamily& family);

/// Primes excluded for the family: 2; 3 for SO with n+1 >= 7; divisors of
/// n+1 for SL and SU; divisors of n-1 for SO; divisors of 2 det Q.
std::vector<Int> bad_primes(const GroupFamily& family);
bool is_bad_prime(const GroupFamily& family, Int p);

class GroupContext {
 public:
  /// Binds the family to Z/p^r (or the unramified quadratic ring for SU).
  /// Throws BadPrime unless allow_bad_primes.
  GroupContext(GroupFamily family, Int p, int r = 1, bool allow_bad_primes = false);

  const GroupFamily& family() const { return family_; }
  const ResidueRing& ring() const { return ring_; }
  Int p() const { return ring_.p(); }
  int r() const { return ring_.r(); }
  bool bad_prime() const { return bad_; }
  /// Form matrix read in the ring.
  const RingMatrix& form() const { return form_; }
  /// Same family at exponent l (still flagged bad if the prime is bad).
  GroupContext at_exponent(int l) const;
  std::string describe() const;

 private:
  GroupFamily family_;
  ResidueRing ring_;
  RingMatrix form_;
  bool bad_;
};

bool contains(const GroupContext& ctx, const RingMatrix& m);

/// A matrix checked to satisfy the group equations.
class GroupElement {
 public:
  /// Throws DomainError when m is not in the group.
  GroupElement(const GroupContext& ctx, RingMatrix m);

  const RingMatrix& matrix() const { return m_; }
  const ResidueRing& ring() const { return m_.ring(); }

  friend GroupElement operator*(const GroupElement& x, const GroupElement& y);
  friend bool operator==(const GroupElement& x, const GroupElement& y) { return x.m_ == y.m_; }

 private:
  struct Trusted {};
  GroupElement(Trusted, RingMatrix m) : m_(std::move(m)) {}
  friend GroupElement inverse(const GroupElement& g);
  friend GroupElement reduce(const GroupElement& g, int l);

  RingMatrix m_;
};

GroupElement inverse(const GroupElement& g);

using ElementVisitor = std::function<void(const RingMatrix&)>;

/// Calls visit on every group element exactly once, in a fixed order.
/// The shard restricts the first column to a contiguous block of its
/// candidate codes; concatenating shards in index order gives the serial
/// order. The meter is charged once per candidate column.
void enumerate(const GroupContext& ctx, const ElementVisitor& visit, BudgetMeter& meter,
               Shard shard = {});
std::vector<RingMatrix> elements(const GroupContext& ctx, BudgetMeter& meter, Shard shard = {});
std::uint64_t enumerate_count(const GroupContext& ctx, BudgetMeter& meter, Shard shard = {});

/// |G(Z/p^r)| = |G(F_p)| p^{(r-1) dim}. The field level is enumerated.
std::uint64_t order(const GroupContext& ctx, BudgetMeter& meter);

/// Elements g = I + p^l Y of the kernel of reduction to exponent l, by
/// scanning every Y over Z/p^{r-l}.
void enumerate_kernel(const GroupContext& ctx, int l, const ElementVisitor& visit, BudgetMeter& meter);
std::uint64_t kernel_count(const GroupContext& ctx, int l, BudgetMeter& meter);

/// Entrywise reduction to exponent l.
GroupElement reduce(const GroupElement& g, int l);

/// X = (g - I)/p^l over Z/p^{r-l}; needs g = I mod p^l and 2l >= r.
RingMatrix kernel_log(const GroupContext& ctx, const RingMatrix& g, int l);
/// I + p^l X read in the ring of ctx; X lives over Z/p^{r-l}.
RingMatrix kernel_exp(const GroupContext& ctx, const RingMatrix& x, int l);

struct CongruenceLevel {
  Int q = 1;
  std::vector<std::pair<Int, int>> factors;  // increasing primes

  static CongruenceLevel of(Int q);
  bool square_free() const;
};

/// SL_{n+1}(Z/q) for arbitrary q >= 1, by direct scan of all matrices.
std::uint64_t sl_order_composite(int n, Int q, BudgetMeter& meter);

/// V(q) = prod_j |G(Z/p_j^{r_j})|. Throws BadPrime on a bad prime unless allowed.
std::uint64_t index_V(const GroupFamily& family, const CongruenceLevel& level, BudgetMeter& meter,
                      bool allow_bad_primes = false);

struct WittDiagnostic {
  int witt_index = 0;
  /// "SO" (odd size), "SO+" (split) or "SO-" (non-split).
  std::string label;
  bool split = false;
};

/// Witt index of the form Q mod p for an SO family, p odd and not dividing det Q.
WittDiagnostic witt_index(const GroupFamily& family, Int p);

}  // namespace cgk
