#include "cgk/hypcount.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cgk/errors.hpp"
#include "cgk/groupscheme.hpp"

namespace cgk {

namespace {

// x, y with a x + b y = gcd(a, b) >= 0.
Int ext_gcd(Int a, Int b, Int& x, Int& y) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const Int qt = old_r / r;
    old_r -= qt * r;
    std::swap(old_r, r);
    old_s -= qt * s;
    std::swap(old_s, s);
    old_t -= qt * t;
    std::swap(old_t, t);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

Int isqrt(Int n) {
  if (n <= 0) return 0;
  auto s = static_cast<Int>(std::sqrt(static_cast<double>(n)));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  return s;
}

Int norm2_limit(double radius) {
  if (!(radius >= 0)) throw DomainError("radius must be nonnegative");
  return static_cast<Int>(std::floor(radius * radius + 1e-9));
}

}  // namespace

void enumerate_by_norm2(Int max_norm2, const LatticeVisitor& visit, BudgetMeter& meter, Shard shard) {
  if (max_norm2 < 0) throw DomainError("norm bound must be nonnegative");
  const Int r2 = max_norm2;
  const Int radius = isqrt(r2);
  const auto span = static_cast<std::uint64_t>(2 * radius + 1);
  const Int a_lo = -radius + static_cast<Int>(shard.begin(span));
  const Int a_hi = -radius + static_cast<Int>(shard.end(span));
  for (Int a = a_lo; a < a_hi; ++a) {
    const Int bmax = isqrt(r2 - a * a);
    for (Int b = -bmax; b <= bmax; ++b) {
      meter.charge();
      Int x = 0, y = 0;
      if (ext_gcd(a, b, x, y) != 1) continue;
      // a d - b c = 1 along (c, d) = (-y, x) + t (a, b).
      const Int c0 = -y, d0 = x;
      const Int rest = r2 - a * a - b * b;
      const Int w = a * a + b * b;
      const double center = -static_cast<double>(c0 * a + d0 * b) / static_cast<double>(w);
      const double cc = static_cast<double>(c0 * c0 + d0 * d0);
      const double disc = center * center - (cc - static_cast<double>(rest)) / static_cast<double>(w);
      if (disc < -1e-9) continue;
      const double half = std::sqrt(std::max(disc, 0.0));
      const auto t_lo = static_cast<Int>(std::floor(center - half)) - 1;
      const auto t_hi = static_cast<Int>(std::ceil(center + half)) + 1;
      for (Int t = t_lo; t <= t_hi; ++t) {
        const Int c = c0 + t * a, d = d0 + t * b;
        if (c * c + d * d <= rest) visit(Mat2{a, b, c, d});
      }
    }
  }
}

void enumerate_by_norm(double radius, const LatticeVisitor& visit, BudgetMeter& meter, Shard shard) {
  enumerate_by_norm2(norm2_limit(radius), visit, meter, shard);
}

std::vector<Mat2> brute_force_by_norm(double r) {
  std::vector<Mat2> out;
  const Int r2 = norm2_limit(r);
  const Int radius = isqrt(r2);
  for (Int a = -radius; a <= radius; ++a)
    for (Int b = -radius; b <= radius; ++b)
      for (Int c = -radius; c <= radius; ++c)
        for (Int d = -radius; d <= radius; ++d) {
          const Mat2 g{a, b, c, d};
          if (g.det() == 1 && g.norm2() <= r2) out.push_back(g);
        }
  return out;
}

double distance(const Eigen::Matrix2d& g) {
  const double h = g.squaredNorm() / 2.0;
  return h <= 1.0 ? 0.0 : std::acosh(h);
}

double distance(const Mat2& g) {
  const double h = static_cast<double>(g.norm2()) / 2.0;
  return h <= 1.0 ? 0.0 : std::acosh(h);
}

double max_distance(Int radius) {
  const double h = static_cast<double>(radius * radius) / 2.0;
  return h <= 1.0 ? 0.0 : std::acosh(h);
}

bool LatticeSpec::contains(const Mat2& g) const {
  if (q == 1) return true;
  return (g.a - 1) % q == 0 && g.b % q == 0 && g.c % q == 0 && (g.d - 1) % q == 0;
}

std::size_t tail_begin(std::size_t grid_size) { return grid_size - grid_size / 3; }

LinearFit fit_tail(const std::vector<double>& t, const std::vector<std::uint64_t>& n) {
  if (t.size() != n.size()) throw DomainError("fit_tail: grid and counts differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = tail_begin(t.size()); i < t.size(); ++i) {
    if (n[i] == 0) continue;
    xs.push_back(t[i]);
    ys.push_back(std::log(static_cast<double>(n[i])));
  }
  if (xs.size() < 6) throw DomainError("fit_tail needs at least 6 tail points with N > 0");
  const double k = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = xs.size();
  return f;
}

std::vector<double> distance_grid(Int radius, int points, double t_min) {
  const double t_max = max_distance(radius);
  if (points < 2 || t_max <= t_min) throw DomainError("distance grid needs >= 2 points and t_max > t_min");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = t_min + (t_max - t_min) * i / (points - 1);
  return grid;
}

std::vector<CountResult> count(const std::vector<LatticeSpec>& levels, Int radius, const std::vector<double>& grid,
                               const Rational& alpha, BudgetMeter& meter, unsigned shards) {
  if (grid.empty() || !std::is_sorted(grid.begin(), grid.end())) throw DomainError("grid must be nonempty and sorted");
  if (grid.back() > max_distance(radius) + 1e-12) throw DomainError("grid exceeds the enumerated radius");
  for (const auto& l : levels)
    if (l.q < 1) throw DomainError("level must be >= 1");
  // Norm limit of each grid point: |g|^2 <= 2 cosh T.
  std::vector<Int> limits;
  for (double t : grid) limits.push_back(static_cast<Int>(std::floor(2.0 * std::cosh(t) + 1e-9)));
  std::vector<std::vector<std::uint64_t>> bucket(levels.size(), std::vector<std::uint64_t>(grid.size(), 0));
  const LatticeVisitor visit = [&](const Mat2& g) {
    const auto it = std::lower_bound(limits.begin(), limits.end(), g.norm2());
    if (it == limits.end()) return;
    const auto k = static_cast<std::size_t>(it - limits.begin());
    for (std::size_t j = 0; j < levels.size(); ++j)
      if (levels[j].contains(g)) ++bucket[j][k];
  };
  for (unsigned s = 0; s < std::max(1u, shards); ++s) enumerate_by_norm2(radius * radius, visit, meter, Shard{s, std::max(1u, shards)});

  std::vector<CountResult> out;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    CountResult r;
    r.q = levels[j].q;
    r.radius = radius;
    r.t = grid;
    r.alpha = alpha;
    std::uint64_t acc = 0;
    for (auto v : bucket[j]) r.n.push_back(acc += v);
    r.index = r.q == 1 ? 1 : index_V(GroupFamily::SL(1), CongruenceLevel::of(r.q), meter, true);
    if (grid.size() - tail_begin(grid.size()) >= 6) {
      try {
        r.fit = fit_tail(r.t, r.n);
      } catch (const DomainError&) {
        r.fit = {};
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

double bound_curve(double t, double index, const Rational& alpha, const Rational& rho) {
  if (alpha <= Rational(0) || alpha > rho) throw DomainError("alpha must lie in (0, rho]");
  const double r2 = 2.0 * to_double(rho);
  return std::exp(r2 * t) / index + std::exp((r2 - to_double(alpha)) * t);
}

std::vector<MainTermCheck> main_term_ratios(const std::vector<CountResult>& results) {
  if (results.empty() || results[0].q != 1) throw DomainError("main_term_ratios needs the q = 1 count first");
  const auto& base = results[0];
  std::vector<MainTermCheck> out;
  for (std::size_t j = 1; j < results.size(); ++j) {
    const auto& r = results[j];
    MainTermCheck m;
    m.q = r.q;
    bool first = true;
    for (std::size_t i = tail_begin(r.t.size()); i < r.t.size(); ++i) {
      if (base.n[i] == 0) continue;
      const double ratio = static_cast<double>(r.n[i]) * static_cast<double>(r.index) / static_cast<double>(base.n[i]);
      m.min_ratio = first ? ratio : std::min(m.min_ratio, ratio);
      m.max_ratio = first ? ratio : std::max(m.max_ratio, ratio);
      first = false;
    }
    out.push_back(m);
  }
  return out;
}

DominationCheck one_constant_domination(const std::vector<CountResult>& results, const Rational& rho, double window) {
  DominationCheck d;
  d.window = window;
  std::vector<double> logs;
  std::vector<double> ratios;
  for (const auto& r : results)
    for (std::size_t i = tail_begin(r.t.size()); i < r.t.size(); ++i) {
      const double b = bound_curve(r.t[i], static_cast<double>(r.index), r.alpha, rho);
      const double ratio = static_cast<double>(r.n[i]) / b;
      ratios.push_back(ratio);
      logs.push_back(std::log(std::max(ratio, 1e-300)));
    }
  if (ratios.empty()) throw DomainError("one_constant_domination: no tail points");
  d.constant = std::exp(std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(logs.size()));
  d.min_ratio = *std::min_element(ratios.begin(), ratios.end()) / d.constant;
  d.max_ratio = *std::max_element(ratios.begin(), ratios.end()) / d.constant;
  return d;
}

}  // namespace cgk
