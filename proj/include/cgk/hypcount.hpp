#pragma once

// Lattice points of Gamma(q) in SL_2(Z) counted by hyperbolic distance in the
// upper half-plane (curvature -1, cosh d(gi, i) = |g|^2 / 2).

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cgk/budget.hpp"
#include "cgk/rational.hpp"
#include "cgk/ringalg.hpp"

namespace cgk {

struct Mat2 {
  Int a = 1, b = 0, c = 0, d = 1;

  Int norm2() const { return a * a + b * b + c * c + d * d; }
  Int det() const { return a * d - b * c; }
  friend bool operator==(const Mat2&, const Mat2&) = default;
  friend auto operator<=>(const Mat2&, const Mat2&) = default;
};

inline constexpr Int kDefaultMaxRadius = 2000;

using LatticeVisitor = std::function<void(const Mat2&)>;

/// Every g in SL_2(Z) with |g|^2 <= R^2 exactly once. For each coprime first
/// row (a, b) the second rows form the line (c0, d0) + t (a, b), which is cut
/// by the norm disc. The shard splits the range of a; one unit per (a, b).
void enumerate_by_norm2(Int max_norm2, const LatticeVisitor& visit, BudgetMeter& meter, Shard shard = {});
/// Same with max_norm2 = floor(R^2).
void enumerate_by_norm(double radius, const LatticeVisitor& visit, BudgetMeter& meter, Shard shard = {});

/// O(R^4) scan over all entries in [-R, R]; reference for small R.
std::vector<Mat2> brute_force_by_norm(double radius);

/// arccosh(|g|^2 / 2) for det g = 1; 0 on SO(2).
double distance(const Eigen::Matrix2d& g);
double distance(const Mat2& g);

/// Largest T with every point at distance <= T inside the radius.
double max_distance(Int radius);

struct LatticeSpec {
  Int q = 1;

  /// g = I mod q entrywise.
  bool contains(const Mat2& g) const;
};

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  std::size_t points = 0;
};

/// Index of the first grid point of the tail (top third of the grid).
std::size_t tail_begin(std::size_t grid_size);

/// OLS of log N against T over the top third of the grid; needs 6 tail points with N > 0.
LinearFit fit_tail(const std::vector<double>& t, const std::vector<std::uint64_t>& n);

struct CountResult {
  Int q = 1;
  Int radius = 0;
  std::vector<double> t;
  std::vector<std::uint64_t> n;
  std::uint64_t index = 1;  // V(q) = |SL_2(Z/q)|
  Rational alpha;
  LinearFit fit;
};

/// T_k evenly spaced on [t_min, max_distance(R)].
std::vector<double> distance_grid(Int radius, int points, double t_min = 2.0);

/// N(q, T) for each level on the common grid from one pass over the ball.
/// Grid points must not exceed max_distance(radius). Shards merge by addition.
std::vector<CountResult> count(const std::vector<LatticeSpec>& levels, Int radius, const std::vector<double>& grid,
                               const Rational& alpha, BudgetMeter& meter, unsigned shards = 1);

/// e^{2 rho T} / V + e^{(2 rho - alpha) T}; alpha in (0, rho].
double bound_curve(double t, double index, const Rational& alpha, const Rational& rho);

struct MainTermCheck {
  Int q = 1;
  double min_ratio = 0;  // of N(q,T) V(q) / N(1,T) over the tail
  double max_ratio = 0;
  bool within(double lo, double hi) const { return min_ratio >= lo && max_ratio <= hi; }
};

/// results[0] must be the level q = 1.
std::vector<MainTermCheck> main_term_ratios(const std::vector<CountResult>& results);

struct DominationCheck {
  /// exp of the mean of log(N / bound) over every tail point of every level.
  double constant = 0;
  /// Extremes of N / (constant * bound) over the tail points.
  double min_ratio = 0;
  double max_ratio = 0;
  double window = 2.5;
  bool holds() const { return max_ratio <= window; }
};

/// One constant for all levels: N(q,T) <= window * C * bound_curve(T, V(q)).
DominationCheck one_constant_domination(const std::vector<CountResult>& results, const Rational& rho,
                                        double window = 2.5);

}  // namespace cgk
