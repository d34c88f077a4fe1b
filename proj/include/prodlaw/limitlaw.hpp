#pragma once

#include <array>
#include <complex>
#include <optional>

namespace prodlaw {

using cd = std::complex<double>;

// Limiting spectral law of a normalized product of m independent iid-entry
// factors with per-factor scales multiplying to sigma. The radial part of the
// law on the disc of radius sigma has cdf min(1, (r/sigma)^(2/m)).
struct LimitLawParams {
  int m = 1;
  double sigma = 1.0;

  void validate() const;
};

// Density of the limit law at w. Rotation invariant; returns +inf at w = 0
// when m >= 2 (the density has an integrable pole there) and 0 outside the
// closed disc of radius sigma.
double limit_density(const LimitLawParams& p, cd w);

// P(|w| <= r) under the limit law.
double radial_cdf(const LimitLawParams& p, double r);

// Inverse of radial_cdf on [0, 1].
double radial_quantile(const LimitLawParams& p, double prob);

// The two-factor resolvent cubic in D at spectral parameter alpha and probe
// radius z_mod = |z|:
//   D^3 + 2 D^2 + ((alpha + 1 - |z|^2)/alpha) D + 1/alpha = 0.
// roots are unordered; branch is set only by stieltjes_branch selection.
// max_residual is the worst |cubic(r)| / (1 + |r|^3) over the three roots,
// a meaningful certificate away from the tiny-|alpha| regime where the monic
// coefficients themselves overflow the working precision.
struct StieltjesSolution {
  cd alpha;
  double z_mod;
  std::array<cd, 3> roots;
  std::optional<cd> branch;
  double max_residual;
};

StieltjesSolution solve_cubic(cd alpha, double z_mod);

// The root that continues analytically to -1/alpha as |alpha| -> inf:
// tracked from a starting height where the candidates are well separated,
// descending in Im(alpha) and keeping the nearest root at each step, with
// step halving whenever the choice is ambiguous. Requires Im(alpha) > 0.
// Throws ConvergenceError if a halved step underflows.
cd stieltjes_branch(cd alpha, double z_mod);

// Support [x1, x2] of the squared singular value law at probe radius z_mod;
// x1 = 0 is reported for z_mod <= 1, and z_mod = 0 returns the analytic
// limit [0, 4].
struct SupportInterval {
  double x1;
  double x2;
  double z_mod;
};

SupportInterval support_endpoints(double z_mod);

// Density approximant (1/pi) Im stieltjes_branch(x + i*y_eps, z_mod),
// clamped at 0. y_eps must lie in [1e-9, 1e-2].
double nu_density(double x, double z_mod, double y_eps = 1e-6);

// Total mass and log moment of nu(., z_mod) by adaptive quadrature over the
// support with sqrt substitutions at both edges; abs_tol is the quadrature
// target. The lower edge is cut off at max(x1, 1e-8) where ln(x) is
// integrably singular; the cutoff error is quantified in tests by halving.
double nu_mass(double z_mod, double abs_tol = 1e-8, double y_eps = 1e-6);
double nu_log_integral(double z_mod, double abs_tol = 1e-8, double y_eps = 1e-6);

// Radial derivative limit of the log moment in the real direction at
// z = s + it: 2s inside the closed unit disc, 2s/(s^2+t^2) outside. The two
// clauses agree on the circle.
double g_limit(double s, double t);

// Central difference in s (step h) of the quadrature log moment, minus
// g_limit(s, t). Requires | |z| - 1 | >= 0.1 so the difference quotient never
// straddles the circle.
double log_potential_check(double s, double t, double h = 1e-3);

}  // namespace prodlaw
