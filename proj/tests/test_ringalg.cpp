#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "cgk/errors.hpp"
#include "cgk/polynomial.hpp"
#include "cgk/ringalg.hpp"
#include "doctest.h"

using namespace cgk;
using boost::multiprecision::cpp_int;

namespace {

RingMatrix mat(const ResidueRing& ring, std::initializer_list<std::initializer_list<Int>> rows) {
  const auto m = static_cast<Index>(rows.size());
  const auto n = static_cast<Index>(rows.begin()->size());
  IntMatrix e(m, n);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (Int v : row) e(i, j++) = v;
    ++i;
  }
  return {ring, e};
}

RingMatrix random_matrix(const ResidueRing& ring, Index m, Index n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Int> d(0, ring.modulus() - 1);
  IntMatrix re(m, n), im(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      re(i, j) = d(rng);
      im(i, j) = ring.is_quadratic() ? d(rng) : 0;
    }
  return {ring, re, ring.is_quadratic() ? im : IntMatrix()};
}

// Triple loop with big integers, reduced once at the end.
RingMatrix naive_product(const RingMatrix& x, const RingMatrix& y) {
  const ResidueRing& ring = x.ring();
  RingMatrix out(ring, x.rows(), y.cols());
  const cpp_int mod = ring.modulus();
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < y.cols(); ++j) {
      cpp_int a = 0, b = 0;
      for (Index k = 0; k < x.cols(); ++k) {
        const Residue u = x(i, k), v = y(k, j);
        const cpp_int tt = cpp_int(u.b) * v.b;  // coefficient of t^2
        a += cpp_int(u.a) * v.a - tt * ring.c0();
        b += cpp_int(u.a) * v.b + cpp_int(u.b) * v.a - tt * ring.c1();
      }
      a %= mod;
      b %= mod;
      if (a < 0) a += mod;
      if (b < 0) b += mod;
      out.set(i, j, {static_cast<Int>(a), static_cast<Int>(b)});
    }
  return out;
}

Int ipow(Int b, int e) {
  Int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Number of v in F^n with a v = 0, by scanning every vector.
Int exhaustive_kernel_count(const RingMatrix& a) {
  const ResidueRing& ring = a.ring();
  const Int q = ring.size();
  const Index n = a.cols();
  Int total = 1;
  for (Index i = 0; i < n; ++i) total *= q;
  Int count = 0;
  for (Int code = 0; code < total; ++code) {
    RingMatrix v(ring, n, 1);
    Int c = code;
    for (Index i = 0; i < n; ++i) {
      const Int digit = c % q;
      c /= q;
      v.set(i, 0, {digit % ring.modulus(), digit / ring.modulus()});
    }
    if ((a * v).is_zero()) ++count;
  }
  return count;
}

int log_base(Int x, Int q) {
  int e = 0;
  while (x > 1) {
    REQUIRE(x % q == 0);
    x /= q;
    ++e;
  }
  return e;
}

}  // namespace

TEST_CASE("ring construction and metadata") {
  const auto z9 = ResidueRing::integers(3, 2);
  CHECK(z9.modulus() == 9);
  CHECK(z9.kind() == RingKind::LocalRing);
  CHECK(ResidueRing::prime_field(5).kind() == RingKind::PrimeField);
  CHECK_THROWS_AS(ResidueRing::integers(9, 1), DomainError);
  CHECK_THROWS_AS(ResidueRing::integers(1, 1), DomainError);

  // lexicographically least irreducible t^2 + c1 t + c0, ordered by (c1, c0)
  const auto f9 = ResidueRing::quadratic(3);
  CHECK(f9.c1() == 0);
  CHECK(f9.c0() == 1);
  const auto f4 = ResidueRing::quadratic(2);
  CHECK(f4.c1() == 1);
  CHECK(f4.c0() == 1);
  const auto f25 = ResidueRing::quadratic(5);
  CHECK(f25.c1() == 0);
  CHECK(f25.c0() == 2);
  CHECK(f25.size() == 25);
  for (Int p : {2, 3, 5, 7, 11, 13}) {
    const auto r = ResidueRing::quadratic(p);
    for (Int x = 0; x < p; ++x) CHECK((x * x + r.c1() * x + r.c0()) % p != 0);
  }
}

TEST_CASE("ring operations agree with big-integer recompute") {
  std::mt19937_64 rng(17);
  for (const auto& ring : {ResidueRing::integers(3, 2), ResidueRing::integers(2, 5), ResidueRing::prime_field(7),
                           ResidueRing::integers(997, 3), ResidueRing::quadratic(3), ResidueRing::quadratic(5, 2),
                           ResidueRing::quadratic(1009)}) {
    std::uniform_int_distribution<Int> d(0, ring.modulus() - 1);
    const cpp_int mod = ring.modulus();
    for (int s = 0; s < 1000; ++s) {
      const Residue x{d(rng), ring.is_quadratic() ? d(rng) : 0};
      const Residue y{d(rng), ring.is_quadratic() ? d(rng) : 0};
      auto canon = [&](cpp_int v) {
        v %= mod;
        if (v < 0) v += mod;
        return static_cast<Int>(v);
      };
      const Residue sum = ring.add(x, y);
      CHECK(sum.a == canon(cpp_int(x.a) + y.a));
      CHECK(sum.b == canon(cpp_int(x.b) + y.b));
      const Residue diff = ring.sub(x, y);
      CHECK(diff.a == canon(cpp_int(x.a) - y.a));
      const cpp_int tt = cpp_int(x.b) * y.b;
      const Residue prod = ring.mul(x, y);
      CHECK(prod.a == canon(cpp_int(x.a) * y.a - tt * ring.c0()));
      CHECK(prod.b == canon(cpp_int(x.a) * y.b + cpp_int(x.b) * y.a - tt * ring.c1()));
      if (auto inv = ring.inverse(x)) {
        CHECK(ring.mul(*inv, x) == ring.one());
      } else {
        CHECK(ring.valuation(x) >= 1);
      }
    }
  }
}

TEST_CASE("mat_mul") {
  const auto z4 = ResidueRing::integers(2, 2);
  CHECK(RingMatrix::identity(z4, 3) * RingMatrix::identity(z4, 3) == RingMatrix::identity(z4, 3));

  const auto f3 = ResidueRing::prime_field(3);
  CHECK(mat(f3, {{1, 1}, {0, 1}}) * mat(f3, {{1, 0}, {1, 1}}) == mat(f3, {{2, 1}, {1, 1}}));

  std::mt19937_64 rng(5);
  for (const auto& ring : {ResidueRing::integers(3, 2), ResidueRing::quadratic(3), ResidueRing::quadratic(7, 2)}) {
    for (int s = 0; s < 50; ++s) {
      const auto a = random_matrix(ring, 4, 4, rng);
      const auto b = random_matrix(ring, 4, 4, rng);
      const auto c = random_matrix(ring, 4, 4, rng);
      CHECK(a * b == naive_product(a, b));
      CHECK((a * b) * c == a * (b * c));
    }
  }

  CHECK_THROWS_AS(RingMatrix::identity(z4, 2) * RingMatrix::identity(f3, 2), RingMismatch);
  CHECK_THROWS_AS(RingMatrix::identity(z4, 2) + RingMatrix::identity(f3, 2), RingMismatch);
}

TEST_CASE("mat_inverse") {
  const auto z8 = ResidueRing::integers(2, 3);
  CHECK(*inverse(RingMatrix::identity(z8, 3)) == RingMatrix::identity(z8, 3));

  const auto z4 = ResidueRing::integers(2, 2);
  const auto a = mat(z4, {{1, 1}, {0, 1}});
  const auto inv = inverse(a);
  REQUIRE(inv.has_value());
  CHECK(*inv == mat(z4, {{1, 3}, {0, 1}}));
  CHECK((a * *inv).is_identity());

  CHECK_FALSE(inverse(mat(z4, {{2, 0}, {0, 2}})).has_value());

  std::mt19937_64 rng(11);
  for (const auto& ring : {ResidueRing::integers(3, 2), ResidueRing::integers(2, 3), ResidueRing::quadratic(3),
                           ResidueRing::prime_field(5)}) {
    for (int s = 0; s < 200; ++s) {
      const auto m = random_matrix(ring, 3, 3, rng);
      const auto det = determinant(m);
      const auto mi = inverse(m);
      CHECK(mi.has_value() == ring.is_unit(det));
      if (mi) {
        CHECK((*mi * m).is_identity());
        CHECK((m * *mi).is_identity());
      }
    }
  }
}

TEST_CASE("determinant matches cofactor expansion") {
  std::mt19937_64 rng(23);
  for (const auto& ring : {ResidueRing::integers(3, 3), ResidueRing::integers(2, 4), ResidueRing::prime_field(7),
                           ResidueRing::quadratic(3, 2)}) {
    for (Index m = 1; m <= 5; ++m) {
      for (int s = 0; s < 40; ++s) {
        const auto x = random_matrix(ring, m, m, rng);
        CHECK(determinant(x) == determinant_cofactor(x));
      }
    }
    // non-unit-heavy matrices exercise the valuation pivoting
    const auto p = ring.p();
    for (int s = 0; s < 40; ++s) {
      const auto x = Int(p) * random_matrix(ring, 4, 4, rng) + random_matrix(ring, 4, 1, rng) * random_matrix(ring, 1, 4, rng);
      CHECK(determinant(x) == determinant_cofactor(x));
    }
  }
}

TEST_CASE("solve_kernel") {
  const auto f5 = ResidueRing::prime_field(5);
  auto k0 = solve_kernel(RingMatrix::zero(f5, 3));
  CHECK(k0.rank == 0);
  CHECK(k0.basis.cols() == 3);
  auto k1 = solve_kernel(RingMatrix::identity(f5, 3));
  CHECK(k1.rank == 3);
  CHECK(k1.basis.cols() == 0);

  CHECK_THROWS_AS(solve_kernel(RingMatrix::identity(ResidueRing::integers(3, 2), 2)), NotAField);

  std::mt19937_64 rng(3);
  const auto f3 = ResidueRing::prime_field(3);
  for (int s = 0; s < 30; ++s) {
    // low-rank products make nontrivial kernels common
    const auto a = random_matrix(f3, 4, 2, rng) * random_matrix(f3, 2, 4, rng);
    const auto k = solve_kernel(a);
    CHECK(k.rank + k.basis.cols() == 4);
    CHECK((a * k.basis).is_zero());
    CHECK(k.basis.cols() == log_base(exhaustive_kernel_count(a), 3));
  }

  const auto f9 = ResidueRing::quadratic(3);
  for (int s = 0; s < 10; ++s) {
    const auto a = random_matrix(f9, 3, 1, rng) * random_matrix(f9, 1, 3, rng);
    const auto k = solve_kernel(a);
    CHECK((a * k.basis).is_zero());
    CHECK(k.basis.cols() == log_base(exhaustive_kernel_count(a), 9));
  }
}

TEST_CASE("solve_kernel nullity equals exhaustive count for every small matrix") {
  for (Int p : {2, 3}) {
    const auto field = ResidueRing::prime_field(p);
    for (Index m = 1; m <= 3; ++m) {
      const Int total = ipow(p, static_cast<int>(m * m));
      for (Int code = 0; code < total; ++code) {
        IntMatrix e(m, m);
        Int c = code;
        for (Index i = 0; i < m * m; ++i) {
          e(i / m, i % m) = c % p;
          c /= p;
        }
        const RingMatrix a(field, e);
        const Index nullity = m - rank(a);
        REQUIRE(ipow(p, static_cast<int>(nullity)) == exhaustive_kernel_count(a));
      }
    }
  }
}

TEST_CASE("free_kernel over a local ring") {
  const auto z9 = ResidueRing::integers(3, 2);
  // x0 + x1 + x2 = 0 over Z/9
  const auto k = free_kernel(mat(z9, {{1, 1, 1}}));
  CHECK(k.rank == 1);
  CHECK(k.basis.cols() == 2);
  CHECK((mat(z9, {{1, 1, 1}}) * k.basis).is_zero());
  // 3 x0 = 0 has a non-free solution module
  CHECK_THROWS_AS(free_kernel(mat(z9, {{3, 0}})), DomainError);
}

TEST_CASE("frobenius") {
  const auto f9 = ResidueRing::quadratic(3);
  for (Int a = 0; a < 3; ++a) CHECK(frobenius(RingElement(f9, Residue{a, 0})) == RingElement(f9, Residue{a, 0}));

  const RingElement t(f9, Residue{0, 1});
  CHECK(t * t == RingElement(f9, Int{-1}));
  CHECK(frobenius(t) == -t);
  CHECK(frobenius(t) == RingElement(f9, f9.pow(t.value(), 3)));

  const auto f25 = ResidueRing::quadratic(5);
  int fixed = 0;
  for (Int a = 0; a < 5; ++a)
    for (Int b = 0; b < 5; ++b) {
      const RingElement x(f25, Residue{a, b});
      CHECK(frobenius(frobenius(x)) == x);
      CHECK(frobenius(x) == RingElement(f25, f25.pow(x.value(), 5)));
      if (frobenius(x) == x) ++fixed;
    }
  CHECK(fixed == 5);

  CHECK_THROWS_AS(frobenius(RingElement(ResidueRing::prime_field(3), Int{1})), DomainError);
}

TEST_CASE("reduce and lift exponent") {
  const auto z4 = ResidueRing::integers(2, 2);
  const auto g = mat(z4, {{1, 2}, {0, 1}});
  CHECK(reduce_exponent(g, 2) == g);
  CHECK(reduce_exponent(g, 1).is_identity());
  CHECK(lift_exponent(reduce_exponent(g, 1), 2).is_identity());
  CHECK_THROWS_AS(reduce_exponent(g, 3), DomainError);
}

TEST_CASE("characteristic polynomial") {
  std::mt19937_64 rng(29);
  for (const auto& ring : {ResidueRing::prime_field(5), ResidueRing::prime_field(2), ResidueRing::quadratic(3),
                           ResidueRing::integers(3, 2)}) {
    for (Index m = 1; m <= 5; ++m) {
      for (int s = 0; s < 10; ++s) {
        const auto a = random_matrix(ring, m, m, rng);
        const auto chi = charpoly(a);
        CHECK(chi.degree() == m);
        CHECK(evaluate(chi, a).is_zero());  // Cayley-Hamilton
        for (Int c = 0; c < std::min<Int>(ring.modulus(), 9); ++c) {
          const Residue cr = ring.from_int(c);
          const auto shifted = cr * RingMatrix::identity(ring, m) - a;
          CHECK(chi.evaluate(cr) == determinant_cofactor(shifted));
        }
      }
    }
  }
}

TEST_CASE("squarefree and distinct-degree factorization") {
  const auto f5 = ResidueRing::prime_field(5);
  const auto x = Polynomial::monomial(f5, 1);
  const auto one = Polynomial::constant(f5, f5.one());
  const auto xm1 = x - one;
  const auto xp1 = x + one;
  auto sff = squarefree_factorization(xm1 * xm1 * xp1);
  REQUIRE(sff.size() == 2);
  CHECK(sff[0].first == xp1);
  CHECK(sff[0].second == 1);
  CHECK(sff[1].first == xm1);
  CHECK(sff[1].second == 2);

  // x^3 - 1 = (x - 1)^3 over F_3 has zero derivative
  const auto f3 = ResidueRing::prime_field(3);
  const auto x3 = Polynomial::monomial(f3, 3) - Polynomial::constant(f3, f3.one());
  sff = squarefree_factorization(x3);
  REQUIRE(sff.size() == 1);
  CHECK(sff[0].second == 3);
  CHECK(sff[0].first.degree() == 1);
  CHECK(radical(x3).degree() == 1);

  // x^9 - x over F_3: all monic irreducibles of degree 1 and 2
  const auto x9 = Polynomial::monomial(f3, 9) - Polynomial::monomial(f3, 1);
  const auto ddf = distinct_degree_factorization(x9);
  REQUIRE(ddf.size() == 2);
  CHECK(ddf[0].second == 1);
  CHECK(ddf[0].first.degree() == 3);
  CHECK(ddf[1].second == 2);
  CHECK(ddf[1].first.degree() == 6);

  // reconstruction property over F_9 and F_2
  std::mt19937_64 rng(31);
  for (const auto& ring : {ResidueRing::quadratic(3), ResidueRing::prime_field(2), ResidueRing::prime_field(7)}) {
    std::uniform_int_distribution<Int> d(0, ring.modulus() - 1);
    for (int s = 0; s < 40; ++s) {
      auto rand_poly = [&](int deg) {
        std::vector<Residue> c(deg + 1);
        for (auto& v : c) v = {d(rng), ring.is_quadratic() ? d(rng) : 0};
        c[deg] = ring.one();
        return Polynomial(ring, c);
      };
      const auto a = rand_poly(2), b = rand_poly(1), c = rand_poly(3);
      const auto f = a * a * b * c * c * c;
      Polynomial prod = Polynomial::constant(ring, ring.one());
      for (const auto& [g, m] : squarefree_factorization(f)) {
        CHECK(gcd(g, g.derivative()).is_one());
        for (int i = 0; i < m; ++i) prod = prod * g;
      }
      CHECK(prod == f);
      Polynomial dprod = Polynomial::constant(ring, ring.one());
      const auto rad = radical(f);
      for (const auto& [g, deg] : distinct_degree_factorization(rad)) {
        CHECK(g.degree() % deg == 0);
        dprod = dprod * g;
      }
      CHECK(dprod == rad);
    }
  }
}

TEST_CASE("solve_affine") {
  const auto z9 = ResidueRing::integers(3, 2);
  // x0 + 3 x1 + x2 = 4, x1 + x2 = 2 over Z/9
  RingMatrix a(z9, 2, 3), b(z9, 2, 1);
  a.set(0, 0, {1, 0});
  a.set(0, 1, {3, 0});
  a.set(0, 2, {1, 0});
  a.set(1, 1, {1, 0});
  a.set(1, 2, {1, 0});
  b.set(0, 0, {4, 0});
  b.set(1, 0, {2, 0});
  const auto sol = solve_affine(a, b);
  REQUIRE(sol.has_value());
  CHECK(a * sol->particular == b);
  CHECK(sol->homogeneous.basis.cols() == 1);
  CHECK((a * sol->homogeneous.basis).is_zero());
  // dependent rows mod 3
  RingMatrix d(z9, 2, 2), e(z9, 2, 1);
  d.set(0, 0, {1, 0});
  d.set(1, 0, {1, 0});
  d.set(1, 1, {3, 0});
  CHECK_FALSE(solve_affine(d, e).has_value());
}
