#pragma once

// The exponents e(G) and eta(G), characters of the abelian congruence kernel
// labelled by Lie algebra elements, coadjoint orbits and the lower bounds on
// dimensions of new representations of G(Z/q).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cgk/budget.hpp"
#include "cgk/groupscheme.hpp"
#include "cgk/liealg.hpp"
#include "cgk/rational.hpp"

namespace cgk {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

struct GapConstants {
  FamilyKind kind = FamilyKind::SO;
  int n = 0;
  Rational rho;
  int dim = 0;
  int e = 0;
  Rational eta;
  /// "SO n<6", "SO n>=6" or "SU".
  std::string branch;
};

/// SO(n,1) needs n >= 2, SU(n,1) needs n >= 1. SL_{n+1} is the split form of
/// SU(n,1) and gets the SU constants.
GapConstants gap_constants(FamilyKind kind, int n);

/// Exponent of chi_X(Y) = exp(2 pi i B(X,Y) / p^k), i.e. B(X,Y) in Z/p^k.
Int character_value(const LieAlgebra& alg, const RingMatrix& x, const RingMatrix& y);

/// Coefficient code of an element of g, base p^k digits lowest first.
std::uint64_t element_code(const LieAlgebra& alg, const RingMatrix& x);

/// All group elements of ctx with their inverses, enumerated once.
struct GroupTable {
  std::vector<RingMatrix> elements;
  std::vector<RingMatrix> inverses;

  static GroupTable of(const GroupContext& ctx, BudgetMeter& meter);
};

/// Size of {g^{-1} X g : g in G(Z/p^k)}; alg and the table share the ring.
std::uint64_t coadjoint_orbit(const LieAlgebra& alg, const GroupTable& group, const RingMatrix& x,
                              BudgetMeter& meter);

struct OrbitResult {
  Int p = 0;
  int r = 0;
  int k = 0;
  /// "enumerated" when the orbits at level p^k were computed, else "analytic".
  std::string branch;
  /// Smallest coadjoint orbit over X in g(Z/p^k) with X != 0 mod p.
  std::optional<std::uint64_t> min_orbit;
  std::optional<RingMatrix> orbit_witness;
  std::uint64_t orbit_count = 0;
  /// Orbit sizes add up to the number of X != 0 mod p and divide |G(Z/p^k)|.
  bool partition_exact = false;
  bool sizes_divide_order = false;
  std::uint64_t group_order_k = 0;

  /// min over X != 0 in g(F_p) of |G(F_p)| |g(F_p)|^{k-1} / (|C_G(X)| |C_g(X)|^{k-1}).
  BigInt formula_bound;
  std::optional<RingMatrix> formula_witness;
  std::uint64_t witness_group_centralizer = 0;
  int witness_centralizer_dim = 0;
  /// |C_G(X)| |orbit(X)| = |G(F_p)| for every field-level orbit.
  bool orbit_stabilizer_ok = false;

  /// p^{2re} with e = e(G); min_orbit^3 >= this is the exact form of min_orbit >= p^{2re/3}.
  BigInt prime_power_target;

  bool formula_bound_holds() const;
  bool prime_power_bound_holds() const;
};

/// Orbit bound for new representations of G(Z/p^r), r >= 2, k = floor(r/2).
/// The orbit scan at level p^k is given orbit_budget units; if that is not
/// enough it is skipped and the result is labelled "analytic". The field-level
/// centralizer scan is charged to meter.
OrbitResult min_new_orbit(const GroupFamily& family, Int p, int r, BudgetMeter& meter,
                          std::optional<std::uint64_t> orbit_budget = std::nullopt,
                          bool allow_bad_primes = false);

/// Landazuri-Seitz style constant reported next to every analytic bound.
Rational landazuri_seitz_constant();

struct RepFactor {
  Int p = 0;
  int r = 1;
  /// e for r = 1, 2 floor(r/2) e otherwise.
  int exponent = 0;
  /// The weaker 2re/3 of the statement, as an exact rational.
  Rational statement_exponent;
  /// c p^exponent.
  BigRational analytic;
  std::optional<std::uint64_t> orbit_bound;
  /// "prime" (r = 1), "enumerated" or "analytic".
  std::string branch;
  BigRational value;
};

struct RepBound {
  std::vector<RepFactor> factors;
  BigRational value;
};

/// Product over q = prod p^r of max(orbit bound, c p^{2ke}); per-prime breakdown kept.
RepBound new_rep_dim_lower(const GroupFamily& family, const CongruenceLevel& level, BudgetMeter& meter,
                           std::optional<std::uint64_t> orbit_budget = std::nullopt);

struct MultiplicityBound {
  Rational eta;
  bool square_free = false;
  /// eta - epsilon, or (3/2) eta - epsilon for square-free q.
  Rational exponent;
  std::uint64_t index = 0;  // V(q)
  double log_bound = 0;     // exponent * log V(q)
};

/// m(lambda, Gamma(q)) >~ V(q)^{exponent}; epsilon > 0.
MultiplicityBound multiplicity_lower(const GroupFamily& family, const CongruenceLevel& level,
                                     const Rational& epsilon, BudgetMeter& meter,
                                     bool allow_bad_primes = false);

}  // namespace cgk
