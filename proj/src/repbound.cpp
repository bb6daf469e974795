#include "cgk/repbound.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "cgk/errors.hpp"

namespace cgk {

namespace {

BigInt big_pow(Int base, int e) {
  BigInt out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

bool nonzero_mod_p(const IntVector& coords, Int p) {
  for (Index i = 0; i < coords.size(); ++i)
    if (coords(i) % p != 0) return true;
  return false;
}

BigRational to_big(const Rational& x) { return BigRational(BigInt(x.numerator()), BigInt(x.denominator())); }

}  // namespace

GapConstants gap_constants(FamilyKind kind, int n) {
  GapConstants g;
  g.kind = kind;
  g.n = n;
  if (kind == FamilyKind::SO) {
    if (n < 2) throw DomainError("SO(n,1) needs n >= 2");
    g.rho = Rational(n - 1, 2);
    g.dim = n * (n + 1) / 2;
    if (n < 6) {
      g.eta = Rational(4, 3 * n * (n + 1));
      g.e = 1;
      g.branch = "SO n<6";
    } else {
      g.eta = Rational(4 * (n - 2), 3 * n * (n + 1));
      g.e = n - 2;
      g.branch = "SO n>=6";
    }
  } else {
    if (n < 1) throw DomainError("SU(n,1) needs n >= 1");
    g.rho = Rational(n, 2);
    g.dim = n * (n + 2);
    g.eta = Rational(2, 3 * (n + 2));
    g.e = n;
    g.branch = "SU";
  }
  if (Rational(3, 2) * g.eta * g.dim != Rational(g.e)) throw Error("e != (3/2) eta dim for " + g.branch);
  return g;
}

Int character_value(const LieAlgebra& alg, const RingMatrix& x, const RingMatrix& y) {
  if (!(x.ring() == alg.ring()) || !(y.ring() == alg.ring())) throw RingMismatch("character_value: ring mismatch");
  return alg.killing(x, y).a;
}

std::uint64_t element_code(const LieAlgebra& alg, const RingMatrix& x) {
  const IntVector c = alg.coordinates(x);
  const auto mod = static_cast<std::uint64_t>(alg.scalars().modulus());
  std::uint64_t code = 0;
  for (Index i = c.size(); i-- > 0;) code = code * mod + static_cast<std::uint64_t>(c(i));
  return code;
}

GroupTable GroupTable::of(const GroupContext& ctx, BudgetMeter& meter) {
  GroupTable t;
  t.elements = cgk::elements(ctx, meter);
  t.inverses.reserve(t.elements.size());
  for (const auto& g : t.elements) t.inverses.push_back(*inverse(g));
  return t;
}

namespace {

// Codes of the orbit of x, charged one unit per group element.
std::unordered_set<std::uint64_t> orbit_codes(const LieAlgebra& alg, const GroupTable& group, const RingMatrix& x,
                                              BudgetMeter& meter) {
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t i = 0; i < group.elements.size(); ++i) {
    meter.charge();
    seen.insert(element_code(alg, group.inverses[i] * x * group.elements[i]));
  }
  return seen;
}

std::uint64_t group_centralizer(const GroupTable& group, const RingMatrix& x, BudgetMeter& meter) {
  std::uint64_t n = 0;
  for (const auto& g : group.elements) {
    meter.charge();
    if (g * x == x * g) ++n;
  }
  return n;
}

}  // namespace

std::uint64_t coadjoint_orbit(const LieAlgebra& alg, const GroupTable& group, const RingMatrix& x,
                              BudgetMeter& meter) {
  if (!group.elements.empty() && !(group.elements.front().ring() == alg.ring()))
    throw RingMismatch("coadjoint_orbit: group and algebra rings differ");
  return orbit_codes(alg, group, x, meter).size();
}

bool OrbitResult::formula_bound_holds() const { return min_orbit && BigInt(*min_orbit) >= formula_bound; }

bool OrbitResult::prime_power_bound_holds() const {
  if (!min_orbit) return false;
  const BigInt m = *min_orbit;
  return m * m * m >= prime_power_target;
}

OrbitResult min_new_orbit(const GroupFamily& family, Int p, int r, BudgetMeter& meter,
                          std::optional<std::uint64_t> orbit_budget, bool allow_bad_primes) {
  if (r < 2) throw DomainError("min_new_orbit needs r >= 2; level p is the prime branch");
  OrbitResult res;
  res.p = p;
  res.r = r;
  res.k = r / 2;
  res.prime_power_target = big_pow(p, 2 * r * family.rep_exponent());

  // Field level: orbits of G(F_p) on g(F_p) \ {0}, with |C_G(X)| counted directly.
  const GroupContext field(family, p, 1, allow_bad_primes);
  const LieAlgebra g1(field);
  const GroupTable t1 = GroupTable::of(field, meter);
  const std::uint64_t order1 = t1.elements.size();
  std::unordered_set<std::uint64_t> visited;
  bool first = true;
  res.orbit_stabilizer_ok = true;
  for (std::uint64_t code = 1; code < g1.size(); ++code) {
    if (visited.count(code)) continue;
    const RingMatrix x = g1.element_from_code(code);
    const auto orb = orbit_codes(g1, t1, x, meter);
    visited.insert(orb.begin(), orb.end());
    const std::uint64_t cg = group_centralizer(t1, x, meter);
    if (cg * orb.size() != order1) res.orbit_stabilizer_ok = false;
    const int cdim = centralizer_dim(g1, x);
    const BigInt bound = BigInt(order1) * big_pow(p, g1.dim() * (res.k - 1)) /
                         (BigInt(cg) * big_pow(p, cdim * (res.k - 1)));
    if (first || bound < res.formula_bound) {
      res.formula_bound = bound;
      res.formula_witness = x;
      res.witness_group_centralizer = cg;
      res.witness_centralizer_dim = cdim;
      first = false;
    }
  }

  // Level p^k: orbits on X != 0 mod p.
  BudgetMeter sub(orbit_budget.value_or(meter.limit() > meter.used() ? meter.limit() - meter.used() : 0));
  try {
    const GroupContext level(family, p, res.k, allow_bad_primes);
    const LieAlgebra gk(level);
    const GroupTable tk = GroupTable::of(level, sub);
    res.group_order_k = tk.elements.size();
    visited.clear();
    std::uint64_t admissible = 0, covered = 0;
    bool divide = true;
    for (std::uint64_t code = 0; code < gk.size(); ++code) {
      const RingMatrix x = gk.element_from_code(code);
      if (!nonzero_mod_p(gk.coordinates(x), p)) continue;
      ++admissible;
      if (visited.count(code)) continue;
      const auto orb = orbit_codes(gk, tk, x, sub);
      visited.insert(orb.begin(), orb.end());
      covered += orb.size();
      ++res.orbit_count;
      if (res.group_order_k % orb.size() != 0) divide = false;
      if (!res.min_orbit || orb.size() < *res.min_orbit) {
        res.min_orbit = orb.size();
        res.orbit_witness = x;
      }
    }
    res.partition_exact = covered == admissible && visited.size() == admissible;
    res.sizes_divide_order = divide;
    res.branch = "enumerated";
    meter.charge(sub.used());
  } catch (const BudgetExceeded&) {
    res.min_orbit.reset();
    res.orbit_witness.reset();
    res.orbit_count = 0;
    res.branch = "analytic";
  }
  return res;
}

Rational landazuri_seitz_constant() { return Rational(1, 2); }

RepBound new_rep_dim_lower(const GroupFamily& family, const CongruenceLevel& level, BudgetMeter& meter,
                           std::optional<std::uint64_t> orbit_budget) {
  const int e = family.rep_exponent();
  const BigRational c = to_big(landazuri_seitz_constant());
  RepBound out;
  out.value = 1;
  for (const auto& [p, r] : level.factors) {
    if (is_bad_prime(family, p)) throw BadPrime("prime " + std::to_string(p) + " is bad for " + family.describe());
    RepFactor f;
    f.p = p;
    f.r = r;
    f.exponent = r == 1 ? e : 2 * (r / 2) * e;
    f.statement_exponent = Rational(2 * r * e, 3);
    f.analytic = c * BigRational(big_pow(p, f.exponent));
    f.branch = r == 1 ? "prime" : "analytic";
    f.value = f.analytic;
    if (r >= 2) {
      const OrbitResult orb = min_new_orbit(family, p, r, meter, orbit_budget);
      if (orb.min_orbit) {
        f.orbit_bound = orb.min_orbit;
        const BigRational m(BigInt(*orb.min_orbit));
        if (m >= f.analytic) {
          f.value = m;
          f.branch = "enumerated";
        }
      }
    }
    out.value *= f.value;
    out.factors.push_back(std::move(f));
  }
  return out;
}

MultiplicityBound multiplicity_lower(const GroupFamily& family, const CongruenceLevel& level,
                                     const Rational& epsilon, BudgetMeter& meter, bool allow_bad_primes) {
  if (epsilon <= Rational(0)) throw DomainError("multiplicity_lower needs epsilon > 0");
  const GapConstants gc = gap_constants(family.kind, family.n);
  MultiplicityBound m;
  m.eta = gc.eta;
  m.square_free = level.square_free();
  m.exponent = (m.square_free ? Rational(3, 2) * gc.eta : gc.eta) - epsilon;
  m.index = index_V(family, level, meter, allow_bad_primes);
  m.log_bound = to_double(m.exponent) * std::log(static_cast<double>(m.index));
  return m;
}

}  // namespace cgk
