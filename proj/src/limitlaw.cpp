#include "prodlaw/limitlaw.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "prodlaw/linalg.hpp"

namespace prodlaw {

void LimitLawParams::validate() const {
  if (m < 1) throw std::invalid_argument("limit law: m must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("limit law: sigma must be positive and finite");
  }
}

double limit_density(const LimitLawParams& p, cd w) {
  p.validate();
  const double r = std::abs(w);
  if (r > p.sigma) return 0.0;
  if (r == 0.0 && p.m >= 2) return std::numeric_limits<double>::infinity();
  const double inv_m = 1.0 / static_cast<double>(p.m);
  return inv_m / std::numbers::pi * std::pow(p.sigma, -2.0 * inv_m) *
         std::pow(r, 2.0 * inv_m - 2.0);
}

double radial_cdf(const LimitLawParams& p, double r) {
  p.validate();
  if (!(r >= 0.0)) throw std::invalid_argument("radial_cdf: radius must be >= 0");
  if (r >= p.sigma) return 1.0;
  return std::pow(r / p.sigma, 2.0 / static_cast<double>(p.m));
}

double radial_quantile(const LimitLawParams& p, double prob) {
  p.validate();
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw std::invalid_argument("radial_quantile: probability must be in [0, 1]");
  }
  return p.sigma * std::pow(prob, static_cast<double>(p.m) / 2.0);
}

namespace {

cd polish_root(cd alpha, double z_sq, cd d) {
  // Newton on the alpha-scaled cubic, whose coefficients stay O(|alpha|+1)
  // where the monic ones blow up.
  const cd lin = alpha + (1.0 - z_sq);
  for (int it = 0; it < 6; ++it) {
    const cd f = ((alpha * d + 2.0 * alpha) * d + lin) * d + 1.0;
    const cd fp = (3.0 * alpha * d + 4.0 * alpha) * d + lin;
    if (fp == cd(0.0, 0.0)) break;
    const cd step = f / fp;
    d -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(d))) break;
  }
  return d;
}

}  // namespace

StieltjesSolution solve_cubic(cd alpha, double z_mod) {
  if (!(z_mod >= 0.0)) throw std::invalid_argument("solve_cubic: z_mod must be >= 0");
  if (alpha == cd(0.0, 0.0) || !std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("solve_cubic: alpha must be nonzero and finite");
  }
  const double z_sq = z_mod * z_mod;
  // monic form D^3 + 2 D^2 + b D + c
  const cd b = (alpha + (1.0 - z_sq)) / alpha;
  const cd c = 1.0 / alpha;
  // depressed via D = t - 2/3
  const cd p = b - 4.0 / 3.0;
  const cd q = 16.0 / 27.0 - 2.0 * b / 3.0 + c;
  std::array<cd, 3> roots;
  const cd sq = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  cd u3 = -q / 2.0 + sq;
  if (std::abs(-q / 2.0 - sq) > std::abs(u3)) u3 = -q / 2.0 - sq;
  if (u3 == cd(0.0, 0.0)) {
    roots = {cd(-2.0 / 3.0, 0.0), cd(-2.0 / 3.0, 0.0), cd(-2.0 / 3.0, 0.0)};
  } else {
    const cd u = std::pow(u3, 1.0 / 3.0);
    const cd v = -p / (3.0 * u);
    const cd omega(-0.5, 0.5 * std::sqrt(3.0));
    const cd omegac = std::conj(omega);
    roots = {u + v - 2.0 / 3.0, u * omega + v * omegac - 2.0 / 3.0,
             u * omegac + v * omega - 2.0 / 3.0};
  }
  for (cd& r : roots) r = polish_root(alpha, z_sq, r);

  double res = 0.0;
  for (const cd& r : roots) {
    const cd fr = ((r + 2.0) * r + b) * r + c;
    const double rr = std::abs(r);
    res = std::max(res, std::abs(fr) / (1.0 + rr * rr * rr));
  }

  return StieltjesSolution{alpha, z_mod, roots, std::nullopt, res};
}

namespace {

struct Tracked {
  cd root;
  double d0;     // distance from the previous iterate
  double gap;    // distance to the runner-up candidate
  double split;  // distance between the two nearest candidates
};

Tracked pick_nearest(const std::array<cd, 3>& roots, cd prev) {
  std::array<double, 3> d;
  for (int i = 0; i < 3; ++i) d[i] = std::abs(roots[i] - prev);
  int i0 = 0;
  for (int i = 1; i < 3; ++i)
    if (d[i] < d[i0]) i0 = i;
  int i1 = (i0 == 0) ? 1 : 0;
  for (int i = 0; i < 3; ++i)
    if (i != i0 && d[i] < d[i1]) i1 = i;
  return Tracked{roots[i0], d[i0], d[i1], std::abs(roots[i0] - roots[i1])};
}

}  // namespace

cd stieltjes_branch(cd alpha, double z_mod) {
  if (!(z_mod >= 0.0)) throw std::invalid_argument("stieltjes_branch: z_mod must be >= 0");
  if (!(alpha.imag() > 0.0)) {
    throw std::invalid_argument("stieltjes_branch: Im(alpha) must be > 0");
  }
  const double x_re = alpha.real();
  const double y_target = alpha.imag();
  const double y0 = std::max({32.0, 8.0 * std::abs(alpha), 8.0 * (1.0 + z_mod * z_mod)});
  if (y_target >= y0) {
    const auto s = solve_cubic(alpha, z_mod);
    return pick_nearest(s.roots, -1.0 / alpha).root;
  }

  cd cur = pick_nearest(solve_cubic(cd(x_re, y0), z_mod).roots, -1.0 / cd(x_re, y0)).root;
  double y = y0;
  while (y > y_target) {
    double y_next = std::max(0.65 * y, y_target);
    // close the last sliver instead of creeping toward the target forever
    if (y_next - y_target < 1e-9) y_next = y_target;
    for (;;) {
      const auto s = solve_cubic(cd(x_re, y_next), z_mod);
      const Tracked t = pick_nearest(s.roots, cur);
      const bool clear = t.gap >= 2.0 * t.d0;
      const bool merged = t.split <= 1e-8 * (1.0 + std::abs(t.root));
      if (clear || merged) {
        cur = t.root;
        y = y_next;
        break;
      }
      const double y_half = 0.5 * (y + y_next);
      if (y_half <= y_next || y - y_next <= 1e-13 * std::max(1.0, y)) {
        throw ConvergenceError("stieltjes_branch: root tracking became ambiguous near alpha=(" +
                               std::to_string(x_re) + "," + std::to_string(y_next) + ")");
      }
      y_next = y_half;
    }
  }
  return cur;
}

SupportInterval support_endpoints(double z_mod) {
  if (!(z_mod >= 0.0)) throw std::invalid_argument("support_endpoints: z_mod must be >= 0");
  if (z_mod == 0.0) return {0.0, 4.0, 0.0};
  const double w = z_mod * z_mod;
  // (1+8w)^(3/2) - 1, kept subtraction-free for small w
  const double e = std::expm1(1.5 * std::log1p(8.0 * w));
  const double x2 = (8.0 * w * w + 20.0 * w + e) / (8.0 * w);
  double x1 = 0.0;
  if (w >= 1.0) x1 = std::max(0.0, (8.0 * w * w + 20.0 * w - 2.0 - e) / (8.0 * w));
  return {x1, x2, z_mod};
}

double nu_density(double x, double z_mod, double y_eps) {
  if (!(y_eps >= 1e-9 && y_eps <= 1e-2)) {
    throw std::invalid_argument("nu_density: y_eps must be in [1e-9, 1e-2]");
  }
  const cd d = stieltjes_branch(cd(x, y_eps), z_mod);
  return std::max(0.0, d.imag() / std::numbers::pi);
}

namespace {

double simpson_slice(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double fm, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_slice(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson_slice(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_slice(f, a, fa, b, fb, fm, whole, tol, 36);
}

// Integral of g(x) nu(dx, z) with sqrt substitutions absorbing the edge
// behavior on both sides.
double nu_weighted_integral(double z_mod, const std::function<double(double)>& g,
                            double abs_tol, double y_eps) {
  const SupportInterval sup = support_endpoints(z_mod);
  const double lo = std::max(sup.x1, 1e-8);
  const double hi = sup.x2;
  if (hi <= lo) return 0.0;
  const double mid = 0.5 * (lo + hi);
  const auto fx = [&](double x) { return g(x) * nu_density(x, z_mod, y_eps); };
  const auto lower = [&](double u) {
    const double x = lo + u * u;
    return fx(x) * 2.0 * u;
  };
  const auto upper = [&](double v) {
    const double x = hi - v * v;
    return fx(x) * 2.0 * v;
  };
  return adaptive_simpson(lower, 0.0, std::sqrt(mid - lo), 0.5 * abs_tol) +
         adaptive_simpson(upper, 0.0, std::sqrt(hi - mid), 0.5 * abs_tol);
}

}  // namespace

double nu_mass(double z_mod, double abs_tol, double y_eps) {
  return nu_weighted_integral(z_mod, [](double) { return 1.0; }, abs_tol, y_eps);
}

double nu_log_integral(double z_mod, double abs_tol, double y_eps) {
  return nu_weighted_integral(z_mod, [](double x) { return std::log(x); }, abs_tol, y_eps);
}

double g_limit(double s, double t) {
  const double w = s * s + t * t;
  return w > 1.0 ? 2.0 * s / w : 2.0 * s;
}

double log_potential_check(double s, double t, double h) {
  if (!(h > 0.0 && h < 0.05)) {
    throw std::invalid_argument("log_potential_check: step must be in (0, 0.05)");
  }
  const double r = std::hypot(s, t);
  if (std::abs(r - 1.0) < 0.1) {
    throw std::invalid_argument("log_potential_check: probe must keep ||z|-1| >= 0.1");
  }
  const double lp = nu_log_integral(std::hypot(s + h, t));
  const double lm = nu_log_integral(std::hypot(s - h, t));
  return (lp - lm) / (2.0 * h) - g_limit(s, t);
}

}  // namespace prodlaw
