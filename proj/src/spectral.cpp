#include "cgk/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cgk/errors.hpp"

namespace cgk {

namespace {

using State = Eigen::Vector2d;

std::optional<std::int64_t> exact_isqrt(std::int64_t n) {
  if (n < 0) return std::nullopt;
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  if (s * s != n) return std::nullopt;
  return s;
}

std::optional<Rational> rational_sqrt(const Rational& x) {
  if (x < Rational(0)) return std::nullopt;
  const auto num = exact_isqrt(x.numerator());
  const auto den = exact_isqrt(x.denominator());
  if (!num || !den) return std::nullopt;
  return Rational(*num, *den);
}

double rho_of(int n) { return (n - 1) / 2.0; }

void check_dimension(int n) {
  if (n != 2 && n != 3) throw DomainError("spherical functions are implemented for n = 2, 3");
}

double eigenvalue(int n, double s, bool imaginary) {
  const double rho = rho_of(n);
  return imaginary ? rho * rho + s * s : rho * rho - s * s;
}

// Radial Laplace eigen-equation as a first-order system.
struct Radial {
  int n;
  double lambda;
  State operator()(double t, const State& y) const {
    return {y(1), -(n - 1) / std::tanh(t) * y(1) - lambda * y(0)};
  }
};

// Dormand-Prince 5(4) with FSAL and an I-controller.
class DormandPrince {
 public:
  DormandPrince(Radial f, SphericalOptions opt) : f_(f), opt_(opt) {}

  void advance(double& t, State& y, double t_end, double& h) const {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    State k1 = f_(t, y);
    while (t < t_end) {
      const bool last = t + h >= t_end;
      const double step = last ? t_end - t : h;
      const State k2 = f_(t + c2 * step, y + step * a21 * k1);
      const State k3 = f_(t + c3 * step, y + step * (a31 * k1 + a32 * k2));
      const State k4 = f_(t + c4 * step, y + step * (a41 * k1 + a42 * k2 + a43 * k3));
      const State k5 = f_(t + c5 * step, y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const State k6 = f_(t + step, y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const State y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const State k7 = f_(t + step, y_new);
      const State err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double norm = 0;
      for (int i = 0; i < 2; ++i) {
        const double scale = opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
        norm = std::max(norm, std::abs(err(i)) / scale);
      }
      const double factor = norm == 0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
      if (norm <= 1.0) {
        t = last ? t_end : t + step;
        y = y_new;
        k1 = k7;
        if (!last || factor < 1.0) h = step * factor;
      } else {
        h = step * factor;
        if (h < 1e-14) throw Error("spherical ODE step size underflow");
      }
    }
  }

 private:
  Radial f_;
  SphericalOptions opt_;
};

}  // namespace

Rational SpectralPoint::lambda() const {
  return imaginary ? rho * rho + value * value : rho * rho - value * value;
}

std::optional<SpectralPoint> SpectralPoint::from_lambda(const Rational& rho, const Rational& lambda) {
  const Rational d = rho * rho - lambda;
  if (d >= Rational(0)) {
    if (auto s = rational_sqrt(d)) return SpectralPoint{rho, *s, false};
  } else if (auto v = rational_sqrt(-d)) {
    return SpectralPoint{rho, *v, true};
  }
  return std::nullopt;
}

std::vector<double> spherical_profile(int n, double s, bool imaginary, const std::vector<double>& ts,
                                      SphericalOptions opt) {
  check_dimension(n);
  const double rho = rho_of(n);
  if (!imaginary && !(s > 0 && s <= rho)) throw DomainError("real s must lie in (0, rho]");
  if (!std::is_sorted(ts.begin(), ts.end()) || (!ts.empty() && (ts.front() < 0 || ts.back() > 30)))
    throw DomainError("t grid must be sorted inside [0, 30]");
  const double lambda = eigenvalue(n, s, imaginary);
  const Radial f{n, lambda};
  const DormandPrince solver(f, opt);
  const double t0 = opt.handoff;
  // phi = 1 - lambda t^2 / (2n): the first two terms of the even series at 0.
  State y{1.0 - lambda * t0 * t0 / (2.0 * n), -lambda * t0 / n};
  double t = t0;
  double h = 1e-3;
  std::vector<double> out;
  out.reserve(ts.size());
  for (double target : ts) {
    if (target <= t0) {
      out.push_back(1.0 - lambda * target * target / (2.0 * n));
      continue;
    }
    solver.advance(t, y, target, h);
    out.push_back(y(0));
  }
  return out;
}

double spherical_phi(int n, double s, double t, bool imaginary, SphericalOptions opt) {
  return spherical_profile(n, s, imaginary, {t}, opt).front();
}

double spherical_closed_form_h3(double s, double t, bool imaginary) {
  if (t == 0) return 1.0;
  if (imaginary) return s == 0 ? t / std::sinh(t) : std::sin(s * t) / (s * std::sinh(t));
  return std::sinh(s * t) / (s * std::sinh(t));
}

double spherical_laplace_h2(double s, double t, bool imaginary) {
  using boost::math::quadrature::gauss_kronrod;
  const double pi = boost::math::constants::pi<double>();
  const double ep = std::exp(t), em = std::exp(-t);
  auto integrand = [&](double theta) {
    // cosh t + sinh t cos theta without cancellation near theta = pi.
    const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
    const double x = ep * c * c + em * sn * sn;
    if (imaginary) return std::cos(s * std::log(x)) / std::sqrt(x);
    return std::pow(x, s - 0.5);
  };
  return gauss_kronrod<double, 61>::integrate(integrand, 0.0, pi, 20, 1e-14) / pi;
}

DecayProfile decay_profile(int n, double s, bool imaginary, SphericalOptions opt, double step) {
  DecayProfile d;
  d.n = n;
  d.s = s;
  d.imaginary = imaginary;
  const double rho = rho_of(n);
  if (!imaginary && !(s > 0 && s <= rho)) throw DomainError("decay_profile needs s in (0, rho]");
  const int points = static_cast<int>(std::lround((25.0 - 2.0) / step));
  for (int i = 0; i <= points; ++i) d.t.push_back(2.0 + (25.0 - 2.0) * i / points);
  d.phi = spherical_profile(n, s, imaginary, d.t, opt);
  for (std::size_t i = 0; i < d.t.size(); ++i) {
    const double t = d.t[i];
    d.ratio.push_back(imaginary ? std::abs(d.phi[i]) * std::exp(rho * t) / (1.0 + t)
                                : d.phi[i] * std::exp((rho - s) * t));
  }
  d.min_ratio = *std::min_element(d.ratio.begin(), d.ratio.end());
  d.max_ratio = *std::max_element(d.ratio.begin(), d.ratio.end());
  return d;
}

MultiplicityUpper multiplicity_upper(const Rational& s, std::uint64_t index, const Rational& alpha, const Rational& rho) {
  if (!(s > Rational(0) && s < rho)) throw DomainError("multiplicity_upper needs 0 < s < rho");
  if (alpha <= Rational(0)) throw DomainError("alpha must be positive");
  MultiplicityUpper m;
  m.exponent = (rho - s) / alpha;
  m.bound = std::pow(static_cast<double>(index), to_double(m.exponent));
  return m;
}

GapReport gap_report(FamilyKind kind, int n, const Rational& alpha, const Rational& epsilon) {
  GapReport g;
  g.constants = gap_constants(kind, n);
  const Rational rho = g.constants.rho;
  if (!(alpha > Rational(0) && alpha <= rho)) throw DomainError("alpha must lie in (0, rho]");
  if (epsilon < Rational(0)) throw DomainError("epsilon must be nonnegative");
  g.alpha = alpha;
  g.epsilon = epsilon;
  g.crossing = rho - g.constants.eta * alpha;
  g.threshold = g.crossing + epsilon;
  g.excluded_nonempty = g.constants.eta * alpha > epsilon;
  g.exponent_at_crossing = multiplicity_upper(g.crossing, 1, alpha, rho).exponent;
  return g;
}

QuotedAlpha quoted_alpha(FamilyKind kind, int n) {
  const GapConstants c = gap_constants(kind, n);
  if (kind == FamilyKind::SO) {
    if (n == 2) return {Rational(25, 64), "known bound for SO(2,1)"};
    return {Rational(25, 32), "known bound for SO(n,1), n >= 3"};
  }
  return {std::min(Rational(1), c.rho), "Ramanujan conjecture value min(1, rho)"};
}

}  // namespace cgk
