#include <random>

#include "cgk/errors.hpp"
#include "cgk/liealg.hpp"
#include "doctest.h"

using namespace cgk;

namespace {

RingMatrix mat(const ResidueRing& ring, std::initializer_list<std::initializer_list<Int>> rows) {
  const auto m = static_cast<Index>(rows.size());
  IntMatrix e(m, m);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (Int v : row) e(i, j++) = v;
    ++i;
  }
  return {ring, e};
}

RingMatrix random_element(const LieAlgebra& alg, std::mt19937_64& rng) {
  std::uniform_int_distribution<Int> d(0, alg.scalars().modulus() - 1);
  IntVector c(alg.dim());
  for (int i = 0; i < alg.dim(); ++i) c(i) = d(rng);
  return alg.element(c);
}

RingMatrix random_matrix(const ResidueRing& ring, Index m, std::mt19937_64& rng) {
  std::uniform_int_distribution<Int> d(0, ring.modulus() - 1);
  IntMatrix e(m, m);
  for (Index i = 0; i < m * m; ++i) e(i / m, i % m) = d(rng);
  return {ring, e};
}

LieAlgebra alg(GroupFamily fam, Int p, int k = 1) { return LieAlgebra(GroupContext(std::move(fam), p, k, true)); }

}  // namespace

TEST_CASE("algebra_basis") {
  CHECK(alg(GroupFamily::SL(1), 5).dim() == 3);
  CHECK(alg(GroupFamily::SO(3), 3).dim() == 6);
  CHECK(alg(GroupFamily::SU(1), 3).dim() == 3);
  for (int n = 1; n <= 3; ++n) {
    CHECK(alg(GroupFamily::SL(n), 5).dim() == n * (n + 2));
    CHECK(alg(GroupFamily::SU(n), 5).dim() == n * (n + 2));
  }
  for (int n = 2; n <= 5; ++n) CHECK(alg(GroupFamily::SO(n), 7).dim() == n * (n + 1) / 2);
  // basis over Z/p^k, and the coordinates round trip
  const auto a = alg(GroupFamily::SO(2), 3, 2);
  CHECK(a.dim() == 3);
  std::mt19937_64 rng(1);
  for (int s = 0; s < 20; ++s) {
    const auto x = random_element(a, rng);
    CHECK(a.contains(x));
    CHECK(a.element(a.coordinates(x)) == x);
  }
  CHECK_THROWS_AS(a.coordinates(RingMatrix::identity(a.ring(), 3)), DomainError);
}

TEST_CASE("killing_form") {
  const auto sl2 = alg(GroupFamily::SL(1), 5);
  const auto& r = sl2.ring();
  const auto h = mat(r, {{1, 0}, {0, 4}});
  CHECK(sl2.killing(h, RingMatrix::zero(r, 2)) == Residue{});
  CHECK(sl2.killing(h, h) == r.from_int(8));
  // explicit ad oracle in the basis (E, H, F): ad H = diag(2, 0, -2)
  const auto e = mat(r, {{0, 1}, {0, 0}});
  const auto f = mat(r, {{0, 0}, {1, 0}});
  CHECK(commutator(h, e) == Int{2} * e);
  CHECK(commutator(h, f) == Int{-2} * f);
  CHECK(sl2.killing(e, f) == r.from_int(4));

  std::mt19937_64 rng(2);
  for (int s = 0; s < 100; ++s) {
    const auto x = random_element(sl2, rng), y = random_element(sl2, rng);
    CHECK(sl2.killing(x, y) == r.mul(r.from_int(4), trace(x * y)));  // B = 4 Tr(XY) on sl_2
  }
  const auto sl3 = alg(GroupFamily::SL(2), 5);
  for (int s = 0; s < 100; ++s) {
    const auto x = random_element(sl3, rng), y = random_element(sl3, rng), z = random_element(sl3, rng);
    CHECK(sl3.killing(x, y) == sl3.killing(y, x));
    CHECK(sl3.scalars().add(sl3.killing(commutator(z, x), y), sl3.killing(x, commutator(z, y))) == Residue{});
  }
  const auto g = sl3.killing_gram();
  CHECK(transpose(g) == g);
}

TEST_CASE("killing_nondegenerate") {
  CHECK(alg(GroupFamily::SL(1), 5, 2).killing_nondegenerate());
  const bool bad = alg(GroupFamily::SL(1), 2, 2).killing_nondegenerate();
  MESSAGE("sl2 over Z/4 Killing nondegenerate: " << bad);
  struct Case {
    GroupFamily fam;
    Int p;
  };
  for (const auto& c : std::vector<Case>{{GroupFamily::SL(1), 5}, {GroupFamily::SL(1), 7},
                                         {GroupFamily::SL(2), 5}, {GroupFamily::SL(2), 7},
                                         {GroupFamily::SO(2), 3}, {GroupFamily::SO(2), 5},
                                         {GroupFamily::SO(2), 7}, {GroupFamily::SO(4), 5},
                                         {GroupFamily::SO(4), 7}, {GroupFamily::SU(1), 3},
                                         {GroupFamily::SU(2), 5}}) {
    const bool base = alg(c.fam, c.p, 1).killing_nondegenerate();
    CHECK(base);
    for (int k = 2; k <= 3; ++k) CHECK(alg(c.fam, c.p, k).killing_nondegenerate() == base);
  }
  // so_5 has Killing form 3 Tr(XY), identically zero mod 3
  CHECK_FALSE(alg(GroupFamily::SO(4), 3).killing_nondegenerate());
  CHECK(is_bad_prime(GroupFamily::SO(4), 3));
}

TEST_CASE("jordan_decompose") {
  const auto f5 = ResidueRing::prime_field(5);
  const auto nil = mat(f5, {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  auto parts = jordan_decompose(nil);
  CHECK(parts.semisimple.is_zero());
  CHECK(parts.nilpotent == nil);
  const auto diag = mat(f5, {{1, 0, 0}, {0, 2, 0}, {0, 0, 2}});
  parts = jordan_decompose(diag);
  CHECK(parts.semisimple == diag);
  CHECK(parts.nilpotent.is_zero());

  const auto mixed = mat(f5, {{3, 1, 0}, {0, 3, 0}, {0, 0, 4}});
  std::mt19937_64 rng(3);
  for (const auto& ring : {f5, ResidueRing::prime_field(3), ResidueRing::prime_field(2), ResidueRing::quadratic(3)}) {
    for (int s = 0; s < 30; ++s) {
      auto pm = random_matrix(ring, 3, rng);
      while (!inverse(pm)) pm = random_matrix(ring, 3, rng);
      const RingMatrix x = ring == f5 ? *inverse(pm) * mixed * pm : random_matrix(ring, 4, rng);
      parts = jordan_decompose(x);
      CHECK(parts.semisimple + parts.nilpotent == x);
      CHECK(commutator(parts.semisimple, parts.nilpotent).is_zero());
      CHECK(is_semisimple(parts.semisimple));
      CHECK(is_nilpotent(parts.nilpotent));
    }
  }
}

TEST_CASE("jordan_decompose is the unique commuting split") {
  // every split X = S + N with S semisimple, N nilpotent, [S, N] = 0, by scanning S
  for (const auto& [ring, m] : std::vector<std::pair<ResidueRing, Index>>{{ResidueRing::prime_field(3), 2},
                                                                           {ResidueRing::prime_field(2), 3}}) {
    const Int q = ring.modulus();
    Int total = 1;
    for (Index i = 0; i < m * m; ++i) total *= q;
    auto decode = [&](Int code) {
      IntMatrix e(m, m);
      for (Index i = 0; i < m * m; ++i) {
        e(i / m, i % m) = code % q;
        code /= q;
      }
      return RingMatrix(ring, e);
    };
    std::vector<RingMatrix> all, semisimple;
    for (Int c = 0; c < total; ++c) {
      all.push_back(decode(c));
      if (is_semisimple(all.back())) semisimple.push_back(all.back());
    }
    const std::size_t step = m == 2 ? 1 : 8;
    for (std::size_t i = 0; i < all.size(); i += step) {
      const auto& x = all[i];
      int splits = 0;
      for (const auto& s : semisimple) {
        const auto n = x - s;
        if (is_nilpotent(n) && commutator(s, n).is_zero()) {
          ++splits;
          CHECK(s == jordan_decompose(x).semisimple);
        }
      }
      CHECK(splits == 1);
    }
  }
}

TEST_CASE("jordan_type") {
  const auto f7 = ResidueRing::prime_field(7);
  auto jd = jordan_type(RingMatrix::zero(f7, 3), FamilyKind::SL);
  CHECK(jd.kind == JordanKind::Semisimple);
  CHECK(jd.multiplicities == std::vector<int>{3});
  CHECK(jd.zero_multiplicity == 3);

  jd = jordan_type(mat(f7, {{0, 1}, {0, 0}}), FamilyKind::SL);
  CHECK(jd.kind == JordanKind::Nilpotent);
  CHECK(jd.block_counts == std::vector<int>{0, 1});

  jd = jordan_type(mat(f7, {{1, 0, 0}, {0, 1, 0}, {0, 0, 5}}), FamilyKind::SL);
  CHECK(jd.multiplicities == std::vector<int>{2, 1});

  // x^2 - 2 is irreducible over F_5: two conjugate eigenvalues in F_25
  jd = jordan_type(mat(ResidueRing::prime_field(5), {{0, 1}, {2, 0}}), FamilyKind::SL);
  CHECK(jd.multiplicities == std::vector<int>{1, 1});

  // so_3: rotation generator has eigenvalues 0, +-sqrt(-1)
  const auto f3 = ResidueRing::prime_field(3);
  jd = jordan_type(mat(f3, {{0, 1, 0}, {2, 0, 0}, {0, 0, 0}}), FamilyKind::SO);
  CHECK(jd.zero_multiplicity == 1);
  CHECK(jd.pair_multiplicities == std::vector<int>{1});

  CHECK_THROWS_AS(jordan_type(mat(f7, {{1, 1}, {0, 1}}), FamilyKind::SL), DomainError);
}

TEST_CASE("centralizer_dim") {
  const auto sl2 = alg(GroupFamily::SL(1), 5);
  CHECK(centralizer_dim(sl2, RingMatrix::zero(sl2.ring(), 2)) == 3);
  CHECK(centralizer_dim(sl2, mat(sl2.ring(), {{1, 0}, {0, 4}})) == 1);
  const auto sl3 = alg(GroupFamily::SL(2), 5);
  const auto reg = mat(sl3.ring(), {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  CHECK(centralizer_dim(sl3, reg) == 2);
  CHECK(closed_form_dim(sl3.family(), jordan_type(reg, FamilyKind::SL)) == 2);
  CHECK(centralizer_count_exhaustive(sl3, reg) == 25);
}

TEST_CASE("closed_form_dim") {
  for (int n = 1; n <= 5; ++n) {
    const auto sl = GroupFamily::SL(n);
    JordanData ss{JordanKind::Semisimple, {n, 1}, 0, {}, {}};
    CHECK(closed_form_dim(sl, ss) == n * n);
    // r_1 = n-1, r_2 = 1: tails (n, 1) give n^2 + 1 - 1
    JordanData nil{JordanKind::Nilpotent, {}, 0, {}, {n - 1, 1}};
    CHECK(closed_form_dim(sl, nil) == n * n);
  }
  // measured: a rank-one nilpotent in sl_3(F_5) has a 4-dimensional centralizer
  const auto sl3 = alg(GroupFamily::SL(2), 5);
  const auto e13 = mat(sl3.ring(), {{0, 0, 1}, {0, 0, 0}, {0, 0, 0}});
  CHECK(jordan_type(e13, FamilyKind::SL).block_counts == std::vector<int>{1, 1});
  CHECK(centralizer_dim(sl3, e13) == 4);
  for (int n = 2; n <= 9; ++n) {
    const auto so = GroupFamily::SO(n);
    for (int r1 = 1; 2 * r1 <= n + 1; ++r1) {
      const int r0 = n + 1 - 2 * r1;
      JordanData ss{JordanKind::Semisimple, {}, r0, {r1}, {}};
      CHECK(closed_form_dim(so, ss) == n * (n + 1) / 2 + r1 * (3 * r1 - 2 * n - 1));
    }
    // r_1 = n-2, r_3 = 1
    if (n >= 2) {
      JordanData nil{JordanKind::Nilpotent, {}, 0, {}, {n - 2, 0, 1}};
      CHECK(closed_form_dim(so, nil) == n * (n + 1) / 2 - 2 * (n - 1));
    }
  }
  CHECK_THROWS_AS(closed_form_dim(GroupFamily::SL(1), JordanData{JordanKind::Mixed, {}, 0, {}, {}}), DomainError);
}

TEST_CASE("centralizer_group_count") {
  auto meter = BudgetMeter(kDefaultBudget);
  const GroupContext ctx(GroupFamily::SL(1), 5);
  CHECK(centralizer_group_count(ctx, RingMatrix::zero(ctx.ring(), 2), meter) == 120);
  CHECK(centralizer_group_count(ctx, mat(ctx.ring(), {{1, 0}, {0, 4}}), meter) == 4);

  // sl_2(F_3): |C_G(X)| <= 4^dim p^{dim - 2e}, and |C_G|/p^{dim C} <= 4^rank
  const auto sl2 = alg(GroupFamily::SL(1), 3);
  for (std::uint64_t c = 1; c < sl2.size(); ++c) {
    const auto x = sl2.element_from_code(c);
    const auto rep = centralizer_report(sl2, x, true, meter);
    REQUIRE(rep.group_count.has_value());
    CHECK(*rep.group_count <= 64 * 3);
    CHECK(*rep.group_count <= 4 * static_cast<std::uint64_t>(std::pow(3, rep.algebra_dim)));
  }
}

TEST_CASE("scan_inequality") {
  auto meter = BudgetMeter(kDefaultBudget);
  auto sl23 = scan_inequality(alg(GroupFamily::SL(1), 3), meter);
  CHECK(sl23.scanned == 27);
  CHECK(sl23.max_dim == 1);
  CHECK(sl23.bound_rhs == 1);
  CHECK(sl23.counts_ok());
  CHECK(sl23.closed_forms_ok());
  CHECK(sl23.bound_ok());

  auto sl32 = scan_inequality(alg(GroupFamily::SL(2), 2), meter);
  CHECK(sl32.scanned == 256);
  CHECK(sl32.max_dim == 4);
  CHECK(sl32.counts_ok());
  CHECK(sl32.bound_ok());

  for (const auto& a : {alg(GroupFamily::SL(1), 5), alg(GroupFamily::SO(2), 3), alg(GroupFamily::SO(3), 3),
                        alg(GroupFamily::SU(1), 3), alg(GroupFamily::SU(1), 5)}) {
    CAPTURE(a.context().describe());
    const auto rep = scan_inequality(a, meter);
    CHECK(rep.counts_ok());
    CHECK(rep.closed_forms_ok());
    CHECK(rep.bound_ok());
    CHECK(rep.max_semisimple_dim <= rep.claimed.semisimple);
  }

  // sl_2(F_2): the central identity and the regular nilpotent break the bound
  const auto sl22 = scan_inequality(alg(GroupFamily::SL(1), 2), meter);
  CHECK(sl22.counts_ok());
  CHECK(sl22.max_dim == 3);
  CHECK_FALSE(sl22.bound_ok());
}

TEST_CASE("sharded scans merge to the serial report") {
  auto meter = BudgetMeter(kDefaultBudget);
  const auto a = alg(GroupFamily::SO(3), 3);
  const auto serial = scan_inequality(a, meter);
  std::vector<ScanReport> parts;
  for (unsigned i = 0; i < 8; ++i) parts.push_back(scan_inequality(a, meter, Shard{i, 8}));
  const auto merged = merge_scans(parts);
  CHECK(merged.scanned == serial.scanned);
  CHECK(merged.max_dim == serial.max_dim);
  CHECK(merged.max_witness == serial.max_witness);
  CHECK(merged.semisimple == serial.semisimple);
  CHECK(merged.nilpotent == serial.nilpotent);
  CHECK(merged.mixed == serial.mixed);
  CHECK(merged.closed_form_examples == serial.closed_form_examples);
}
