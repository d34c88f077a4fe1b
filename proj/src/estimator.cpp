#include "prodlaw/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "prodlaw/ensemble.hpp"

namespace prodlaw {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values)
    : sorted_(std::move(values)) {
  if (sorted_.empty()) {
    throw std::invalid_argument("EmpiricalDistribution: sample must be nonempty");
  }
  for (double v : sorted_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("EmpiricalDistribution: sample must be finite");
    }
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::cdf_left(double x) const {
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

EmpiricalDistribution esd_radii(const SpectralSample& eigs) {
  if (eigs.kind != SpectralKind::eigenvalues) {
    throw std::invalid_argument("esd_radii: sample must hold eigenvalues");
  }
  std::vector<double> r(eigs.values.size());
  for (std::size_t i = 0; i < eigs.values.size(); ++i) r[i] = std::abs(eigs.values[i]);
  return EmpiricalDistribution(std::move(r));
}

double ks_statistic(const EmpiricalDistribution& sample,
                    const std::function<double(double)>& reference_cdf) {
  const auto& xs = sample.sorted();
  const double n = static_cast<double>(xs.size());
  double stat = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double f = reference_cdf(xs[i]);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(j) / n;
    stat = std::max({stat, std::abs(below - f), std::abs(above - f)});
    i = j;
  }
  return stat;
}

AngularKs angular_ks(const SpectralSample& eigs, double zero_tol) {
  if (eigs.kind != SpectralKind::eigenvalues) {
    throw std::invalid_argument("angular_ks: sample must hold eigenvalues");
  }
  std::vector<double> u;
  u.reserve(eigs.values.size());
  std::size_t excluded = 0;
  for (const cd& v : eigs.values) {
    if (std::abs(v) <= zero_tol) {
      ++excluded;
      continue;
    }
    u.push_back(std::arg(v) / (2.0 * std::numbers::pi) + 0.5);
  }
  if (u.empty()) return {0.0, excluded};
  EmpiricalDistribution emp(std::move(u));
  const double stat =
      ks_statistic(emp, [](double x) { return std::clamp(x, 0.0, 1.0); });
  return {stat, excluded};
}

cd empirical_stieltjes(const SpectralSample& h_eigs, cd alpha) {
  if (h_eigs.values.empty()) {
    throw std::invalid_argument("empirical_stieltjes: sample must be nonempty");
  }
  if (!(alpha.imag() > 0.0)) {
    throw std::invalid_argument("empirical_stieltjes: Im(alpha) must be > 0");
  }
  cd sum(0.0, 0.0);
  for (const cd& x : h_eigs.values) sum += 1.0 / (cd(x.real(), 0.0) - alpha);
  return sum / static_cast<double>(h_eigs.values.size());
}

GTwoWays g_empirical_two_ways(const ComplexMatrix& y, cd z, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("g_empirical_two_ways: step must be positive and finite");
  }
  const SpectralSample eigs = eigenvalues(y);
  double min_dist = std::numeric_limits<double>::infinity();
  for (const cd& lam : eigs.values) min_dist = std::min(min_dist, std::abs(lam - z));
  if (min_dist <= 1e-6) {
    throw std::invalid_argument("g_empirical_two_ways: probe sits on the spectrum");
  }
  const double n = static_cast<double>(y.rows());

  const double lp = log_abs_det(y.shifted(z + cd(h, 0.0)));
  const double lm = log_abs_det(y.shifted(z - cd(h, 0.0)));
  if (!std::isfinite(lp) || !std::isfinite(lm)) {
    throw std::invalid_argument("g_empirical_two_ways: shifted matrix is singular at z +- h");
  }
  const double g_via_logdet = (lp - lm) / (2.0 * h * n);

  cd resolvent(0.0, 0.0);
  for (const cd& lam : eigs.values) resolvent += 1.0 / (lam - z);
  const double g_via_eigs = -2.0 * resolvent.real() / n;

  return {g_via_logdet, g_via_eigs, h};
}

namespace {

// One direction of the Levy band check at every jump of b: does
// a(x - e) - e <= b(x) <= a(x + e) + e hold for all x?
bool levy_band_holds(const EmpiricalDistribution& a, const EmpiricalDistribution& b, double e) {
  const auto& xs = b.sorted();
  std::size_t i = 0;
  const double n = static_cast<double>(xs.size());
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double below = static_cast<double>(i) / n;  // b(x-)
    const double above = static_cast<double>(j) / n;  // b(x)
    if (above > a.cdf(xs[i] + e) + e) return false;
    if (below < a.cdf_left(xs[i] - e) - e) return false;
    i = j;
  }
  return true;
}

}  // namespace

double levy_distance(const EmpiricalDistribution& f, const EmpiricalDistribution& g) {
  const auto feasible = [&](double e) {
    return levy_band_holds(f, g, e) && levy_band_holds(g, f, e);
  };
  double lo = 0.0, hi = 1.0;
  if (feasible(0.0)) return 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

namespace {

// Minimum-cost perfect matching on a square cost matrix (potentials method).
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

MultiplicityReport multiplicity_check(const std::vector<ComplexMatrix>& factors) {
  const int m = static_cast<int>(factors.size());
  if (m < 2) throw std::invalid_argument("multiplicity_check: needs at least two factors");
  const std::size_t nn = factors[0].rows();
  if (nn > 64) throw std::invalid_argument("multiplicity_check: n is capped at 64");

  const ComplexMatrix x = build_product(factors);
  const ComplexMatrix y = build_linearization(factors);
  const std::vector<cd> product_eigs = eigenvalues(x).values;
  const std::vector<cd> lin_eigs = eigenvalues(y).values;
  const double tolerance = 1e-6 * std::sqrt(x.frobenius_norm_sq());

  std::vector<cd> powered(lin_eigs.size());
  for (std::size_t i = 0; i < powered.size(); ++i) powered[i] = std::pow(lin_eigs[i], m);

  // greedy: largest powered values first, each grabbing the nearest target
  // with remaining capacity
  std::vector<std::size_t> order(powered.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(powered[a]) > std::abs(powered[b]);
  });
  std::vector<int> capacity(nn, m);
  double greedy_max = 0.0;
  for (std::size_t idx : order) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    for (std::size_t t = 0; t < nn; ++t) {
      if (capacity[t] == 0) continue;
      const double d = std::abs(powered[idx] - product_eigs[t]);
      if (d < best) {
        best = d;
        bi = t;
      }
    }
    --capacity[bi];
    greedy_max = std::max(greedy_max, best);
  }
  if (greedy_max <= tolerance) {
    return {greedy_max, tolerance, true, false};
  }

  // greedy can chain mistakes when clusters nearly touch; redo as an optimal
  // assignment against the capacity-expanded target list
  const std::size_t big = powered.size();
  std::vector<std::vector<double>> cost(big, std::vector<double>(big));
  for (std::size_t i = 0; i < big; ++i) {
    for (std::size_t j = 0; j < big; ++j) {
      cost[i][j] = std::abs(powered[i] - product_eigs[j / m]);
    }
  }
  const std::vector<int> match = min_cost_assignment(cost);
  double opt_max = 0.0;
  for (std::size_t i = 0; i < big; ++i) {
    opt_max = std::max(opt_max, cost[i][static_cast<std::size_t>(match[i])]);
  }
  const double dist = std::min(greedy_max, opt_max);
  return {dist, tolerance, dist <= tolerance, true};
}

double least_singular_probe(const ComplexMatrix& y, cd z) {
  if (std::abs(z) > kProbeRadiusBound) {
    throw std::invalid_argument("least_singular_probe: probe must satisfy |z| <= 10");
  }
  const SpectralSample sv = singular_values(y.shifted(z));
  return sv.values.back().real();
}

NormGrowth norm_growth_check(const ComplexMatrix& y, std::size_t block_n) {
  if (!y.square() || y.rows() == 0) {
    throw std::invalid_argument("norm_growth_check: matrix must be square and nonempty");
  }
  if (block_n == 0 || y.rows() % block_n != 0) {
    throw std::invalid_argument("norm_growth_check: block size must divide the dimension");
  }
  const double mn = static_cast<double>(y.rows());
  const double trace_avg = y.frobenius_norm_sq() / mn;
  const double threshold = 5.0 / std::sqrt(static_cast<double>(block_n));
  const double op_norm = singular_values(y).values.front().real();
  return {op_norm, trace_avg, threshold, std::abs(trace_avg - 1.0) > threshold};
}

}  // namespace prodlaw
