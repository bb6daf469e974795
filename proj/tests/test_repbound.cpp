#include <array>
#include <map>
#include <random>
#include <set>

#include "cgk/errors.hpp"
#include "cgk/repbound.hpp"
#include "doctest.h"

using namespace cgk;

namespace {

BudgetMeter big_meter() { return BudgetMeter(1ULL << 40); }

RingMatrix random_element(const LieAlgebra& alg, std::mt19937_64& rng) {
  std::uniform_int_distribution<Int> d(0, alg.scalars().modulus() - 1);
  IntVector c(alg.dim());
  for (int i = 0; i < alg.dim(); ++i) c(i) = d(rng);
  return alg.element(c);
}

using Mat2 = std::array<Int, 4>;

Mat2 mul2(const Mat2& x, const Mat2& y, Int q) {
  return {(x[0] * y[0] + x[1] * y[2]) % q, (x[0] * y[1] + x[1] * y[3]) % q, (x[2] * y[0] + x[3] * y[2]) % q,
          (x[2] * y[1] + x[3] * y[3]) % q};
}

// SL_2(Z/q) and its orbits on trace-zero matrices by plain integer arithmetic.
std::vector<Mat2> sl2_brute(Int q) {
  std::vector<Mat2> out;
  for (Int a = 0; a < q; ++a)
    for (Int b = 0; b < q; ++b)
      for (Int c = 0; c < q; ++c)
        for (Int d = 0; d < q; ++d)
          if (((a * d - b * c) % q + q) % q == 1 % q) out.push_back({a, b, c, d});
  return out;
}

Mat2 inv2(const Mat2& g, Int q) { return {g[3], (q - g[1]) % q, (q - g[2]) % q, g[0]}; }

std::map<std::size_t, int> sl2_orbit_histogram(Int p, Int q) {
  const auto group = sl2_brute(q);
  std::set<Mat2> seen;
  std::map<std::size_t, int> hist;
  for (Int a = 0; a < q; ++a)
    for (Int b = 0; b < q; ++b)
      for (Int c = 0; c < q; ++c) {
        const Mat2 x{a, b, c, (q - a) % q};
        if (a % p == 0 && b % p == 0 && c % p == 0) continue;
        if (seen.count(x)) continue;
        std::set<Mat2> orb;
        for (const auto& g : group) orb.insert(mul2(mul2(inv2(g, q), x, q), g, q));
        seen.insert(orb.begin(), orb.end());
        ++hist[orb.size()];
      }
  return hist;
}

}  // namespace

TEST_CASE("gap constants follow the branch table") {
  const auto so2 = gap_constants(FamilyKind::SO, 2);
  CHECK(so2.eta == Rational(2, 9));
  CHECK(so2.e == 1);
  CHECK(so2.rho == Rational(1, 2));
  CHECK(so2.dim == 3);
  const auto so5 = gap_constants(FamilyKind::SO, 5);
  CHECK(so5.eta == Rational(4, 90));
  CHECK(so5.e == 1);
  const auto so6 = gap_constants(FamilyKind::SO, 6);
  CHECK(so6.eta == Rational(8, 63));
  CHECK(so6.e == 4);
  CHECK(so6.branch == "SO n>=6");
  const auto su3 = gap_constants(FamilyKind::SU, 3);
  CHECK(su3.eta == Rational(2, 15));
  CHECK(su3.e == 3);
  CHECK(su3.rho == Rational(3, 2));
  const auto sl1 = gap_constants(FamilyKind::SL, 1);
  CHECK(sl1.e == 1);
  CHECK(sl1.eta == Rational(2, 9));
  for (int n = 2; n <= 12; ++n) {
    const auto g = gap_constants(FamilyKind::SO, n);
    CHECK(Rational(3, 2) * g.eta * g.dim == Rational(g.e));
    CHECK(g.e == GroupFamily::SO(n).rep_exponent());
  }
  for (int n = 1; n <= 8; ++n) {
    const auto g = gap_constants(FamilyKind::SU, n);
    CHECK(Rational(3, 2) * g.eta * g.dim == Rational(g.e));
    CHECK(g.eta == Rational(2, 3 * (n + 2)));
  }
  CHECK_THROWS_AS(gap_constants(FamilyKind::SO, 1), DomainError);
  CHECK_THROWS_AS(gap_constants(FamilyKind::SU, 0), DomainError);
}

TEST_CASE("character values are bilinear and separate labels") {
  const LieAlgebra alg(GroupContext(GroupFamily::SL(1), 3, 2));
  std::mt19937_64 rng(11);
  const RingMatrix zero = RingMatrix::zero(alg.ring(), 2);
  for (int t = 0; t < 30; ++t) {
    const auto x = random_element(alg, rng);
    const auto y = random_element(alg, rng);
    const auto y2 = random_element(alg, rng);
    CHECK(character_value(alg, zero, y) == 0);
    CHECK(character_value(alg, x, y + y2) == (character_value(alg, x, y) + character_value(alg, x, y2)) % 9);
  }
  // Trivial on p^{k-1} g exactly when X = 0 mod p.
  for (std::uint64_t code = 0; code < alg.size(); ++code) {
    const auto x = alg.element_from_code(code);
    bool trivial = true;
    bool separated = false;
    for (std::uint64_t c2 = 0; c2 < alg.size(); ++c2) {
      const auto y = alg.element_from_code(c2);
      if (character_value(alg, x, Int{3} * y) != 0) trivial = false;
      if (character_value(alg, x, y) != 0) separated = true;
    }
    const IntVector c = alg.coordinates(x);
    const bool zero_mod_p = c(0) % 3 == 0 && c(1) % 3 == 0 && c(2) % 3 == 0;
    CHECK(trivial == zero_mod_p);
    if (!zero_mod_p) CHECK(separated);
  }
  const LieAlgebra other(GroupContext(GroupFamily::SL(1), 5, 1));
  CHECK_THROWS_AS(character_value(alg, other.basis()[0], alg.basis()[0]), RingMismatch);
}

TEST_CASE("coadjoint orbits on sl2 match orbit-stabilizer") {
  auto meter = big_meter();
  const GroupContext ctx(GroupFamily::SL(1), 3, 1);
  const LieAlgebra alg(ctx);
  const auto table = GroupTable::of(ctx, meter);
  REQUIRE(table.elements.size() == 24);
  CHECK(coadjoint_orbit(alg, table, RingMatrix::zero(alg.ring(), 2), meter) == 1);
  IntMatrix e(2, 2);
  e << 0, 1, 0, 0;
  const RingMatrix nil(alg.ring(), e);
  std::uint64_t stab = 0;
  for (const auto& g : table.elements)
    if (g * nil == nil * g) ++stab;
  CHECK(stab == 6);
  CHECK(coadjoint_orbit(alg, table, nil, meter) == 24 / stab);
  for (std::uint64_t code = 0; code < alg.size(); ++code)
    CHECK(24 % coadjoint_orbit(alg, table, alg.element_from_code(code), meter) == 0);
}

TEST_CASE("min new orbit for SL2 at small levels") {
  auto meter = big_meter();
  const auto f = GroupFamily::SL(1);
  const auto r32 = min_new_orbit(f, 3, 2, meter);
  CHECK(r32.branch == "enumerated");
  CHECK(r32.k == 1);
  CHECK(*r32.min_orbit == 4);
  CHECK(r32.formula_bound == 4);
  CHECK(r32.witness_group_centralizer == 6);
  CHECK(r32.orbit_stabilizer_ok);
  CHECK(r32.partition_exact);
  CHECK(r32.sizes_divide_order);
  CHECK(r32.formula_bound_holds());
  // 4^3 = 64 < 3^4 = 81.
  CHECK(r32.prime_power_target == 81);
  CHECK_FALSE(r32.prime_power_bound_holds());

  const auto r52 = min_new_orbit(f, 5, 2, meter);
  CHECK(*r52.min_orbit == 12);
  CHECK(r52.formula_bound == 12);
  CHECK(r52.witness_group_centralizer == 10);
  CHECK(r52.prime_power_bound_holds());

  const auto r33 = min_new_orbit(f, 3, 3, meter);
  CHECK(r33.k == 1);
  CHECK(r33.formula_bound == r32.formula_bound);
  CHECK(*r33.min_orbit == 4);
  CHECK_FALSE(r33.prime_power_bound_holds());

  CHECK_THROWS_AS(min_new_orbit(f, 3, 1, meter), DomainError);
  CHECK_THROWS_AS(min_new_orbit(f, 2, 2, meter), BadPrime);
}

TEST_CASE("orbits at level 9 agree with a plain integer scan") {
  auto meter = big_meter();
  const auto res = min_new_orbit(GroupFamily::SL(1), 3, 4, meter);
  REQUIRE(res.branch == "enumerated");
  CHECK(res.k == 2);
  CHECK(res.group_order_k == 648);
  // 24 * 27 / (6 * 3).
  CHECK(res.formula_bound == 36);
  CHECK(res.formula_bound_holds());
  CHECK(res.partition_exact);
  CHECK(res.sizes_divide_order);
  const auto hist = sl2_orbit_histogram(3, 9);
  CHECK(*res.min_orbit == hist.begin()->first);
  int orbits = 0;
  for (const auto& [size, count] : hist) orbits += count;
  CHECK(res.orbit_count == static_cast<std::uint64_t>(orbits));
}

TEST_CASE("orbit bound in other families") {
  auto meter = big_meter();
  const auto so = min_new_orbit(GroupFamily::SO(2), 3, 2, meter);
  CHECK(so.partition_exact);
  CHECK(so.orbit_stabilizer_ok);
  CHECK(so.formula_bound_holds());
  const auto su = min_new_orbit(GroupFamily::SU(1), 3, 2, meter);
  CHECK(su.partition_exact);
  CHECK(su.orbit_stabilizer_ok);
  CHECK(su.formula_bound_holds());
  CHECK(*su.min_orbit == 4);
}

TEST_CASE("orbit scan falls back to the analytic label on budget") {
  auto meter = big_meter();
  const auto res = min_new_orbit(GroupFamily::SL(1), 3, 4, meter, 100);
  CHECK(res.branch == "analytic");
  CHECK_FALSE(res.min_orbit.has_value());
  CHECK(res.formula_bound == 36);
}

TEST_CASE("new representation bound is multiplicative") {
  auto meter = big_meter();
  const auto f = GroupFamily::SL(1);
  const auto b5 = new_rep_dim_lower(f, CongruenceLevel::of(5), meter);
  REQUIRE(b5.factors.size() == 1);
  CHECK(b5.factors[0].branch == "prime");
  CHECK(b5.factors[0].exponent == 1);
  CHECK(b5.value == BigRational(5, 2));
  const auto b9 = new_rep_dim_lower(f, CongruenceLevel::of(9), meter);
  CHECK(b9.factors[0].exponent == 2);
  CHECK(*b9.factors[0].orbit_bound == 4);
  CHECK(b9.value == BigRational(9, 2));
  CHECK(b9.factors[0].branch == "analytic");
  const auto b27 = new_rep_dim_lower(f, CongruenceLevel::of(27), meter);
  CHECK(b27.factors[0].exponent == 2);
  CHECK(b27.factors[0].statement_exponent == Rational(2));
  const auto b45 = new_rep_dim_lower(f, CongruenceLevel::of(45), meter);
  CHECK(b45.value == b9.value * b5.value);
  const auto b15 = new_rep_dim_lower(f, CongruenceLevel::of(15), meter);
  CHECK(b15.value == new_rep_dim_lower(f, CongruenceLevel::of(3), meter).value * b5.value);
  const auto b81 = new_rep_dim_lower(f, CongruenceLevel::of(81), meter);
  CHECK(b81.factors[0].exponent == 4);
  CHECK(b81.factors[0].orbit_bound.has_value());
  CHECK_THROWS_AS(new_rep_dim_lower(f, CongruenceLevel::of(6), meter), BadPrime);
}

TEST_CASE("multiplicity exponent") {
  auto meter = big_meter();
  const auto so = GroupFamily::SO(2);
  const auto eta = gap_constants(FamilyKind::SO, 2).eta;
  const auto sq = multiplicity_lower(so, CongruenceLevel::of(15), Rational(1, 100), meter);
  CHECK(sq.square_free);
  CHECK(sq.exponent == Rational(1, 3) - Rational(1, 100));
  CHECK(sq.index == 24ULL * 120ULL);
  const auto non = multiplicity_lower(so, CongruenceLevel::of(9), eta, meter);
  CHECK_FALSE(non.square_free);
  CHECK(non.exponent == Rational(0));
  CHECK(non.log_bound == 0.0);
  CHECK_THROWS_AS(multiplicity_lower(so, CongruenceLevel::of(5), Rational(0), meter), DomainError);
}
