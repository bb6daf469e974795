#pragma once

// Spherical functions on real hyperbolic n-space from the radial eigen-ODE,
// their decay, and the exact spectral-gap calculator.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cgk/groupscheme.hpp"
#include "cgk/rational.hpp"
#include "cgk/repbound.hpp"

namespace cgk {

/// s in (0, rho] or s = i v (imaginary = true, value = v).
struct SpectralPoint {
  Rational rho;
  Rational value;
  bool imaginary = false;

  /// rho^2 - s^2, recomputed on every call.
  Rational lambda() const;
  /// The point with eigenvalue lambda, when rho^2 - lambda is +- a rational square.
  static std::optional<SpectralPoint> from_lambda(const Rational& rho, const Rational& lambda);
};

struct SphericalOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-300;
  /// Series start: phi = 1 - lambda t^2 / (2n) up to this t.
  double handoff = 1e-3;
};

/// phi_s(t) at every t of a sorted grid in [0, 30]; n in {2, 3}.
/// lambda = rho^2 - s^2 with rho = (n-1)/2, s^2 = -v^2 for imaginary s.
std::vector<double> spherical_profile(int n, double s, bool imaginary, const std::vector<double>& ts,
                                      SphericalOptions opt = {});
double spherical_phi(int n, double s, double t, bool imaginary = false, SphericalOptions opt = {});

/// Oracles: sinh(s t) / (s sinh t) on H^3, and P_{s-1/2}(cosh t) on H^2 from
/// its Laplace integral by adaptive quadrature.
double spherical_closed_form_h3(double s, double t, bool imaginary = false);
double spherical_laplace_h2(double s, double t, bool imaginary = false);

struct DecayProfile {
  int n = 0;
  double s = 0;
  bool imaginary = false;
  /// phi_s(t) e^{(rho - s) t} over t in [2, 25], or |phi_s(t)| e^{rho t} / (1 + t) for imaginary s.
  double min_ratio = 0;
  double max_ratio = 0;
  double band() const { return max_ratio / min_ratio; }
  std::vector<double> t;
  std::vector<double> phi;
  std::vector<double> ratio;
};

DecayProfile decay_profile(int n, double s, bool imaginary = false, SphericalOptions opt = {}, double step = 0.05);

struct MultiplicityUpper {
  /// (rho - s) / alpha.
  Rational exponent;
  double bound = 0;  // V(q)^exponent
};

/// m(lambda_s, Gamma(q)) <~ V(q)^{(rho - s)/alpha} for 0 < s < rho.
MultiplicityUpper multiplicity_upper(const Rational& s, std::uint64_t index, const Rational& alpha,
                                     const Rational& rho);

struct GapReport {
  GapConstants constants;
  Rational alpha;
  Rational epsilon;
  /// rho - eta alpha: where (rho - s)/alpha = eta.
  Rational crossing;
  /// New spectrum lies in i R u [0, threshold]; threshold = crossing + epsilon.
  Rational threshold;
  /// (threshold, rho), nonempty iff eta alpha > epsilon.
  bool excluded_nonempty = false;
  /// multiplicity_upper exponent at the crossing point; equals eta.
  Rational exponent_at_crossing;
  /// q_0 of the statement is not effective.
  bool asymptotic_only = true;
};

GapReport gap_report(FamilyKind kind, int n, const Rational& alpha, const Rational& epsilon);

struct QuotedAlpha {
  Rational alpha;
  std::string source;
};

/// 25/64 for SO(2,1) and 25/32 for SO(n,1), n >= 3 (known bounds); min(1, rho)
/// for SU(n,1) from the Ramanujan conjecture, labelled as such.
QuotedAlpha quoted_alpha(FamilyKind kind, int n);

}  // namespace cgk
