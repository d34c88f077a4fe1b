#include "prodlaw/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "prodlaw/ensemble.hpp"
#include "prodlaw/estimator.hpp"
#include "prodlaw/limitlaw.hpp"
#include "prodlaw/linalg.hpp"

namespace prodlaw {

namespace {

CheckResult make(std::string id, std::string label, double worst, double bound) {
  const bool pass = worst <= bound;
  return {std::move(id), std::move(label), worst, bound, pass};
}

// Roots of alpha*x^2 + alpha*x + 1, larger-magnitude one computed directly
// and the other recovered from the product 1/alpha.
std::array<cd, 2> quadratic_pair(cd alpha) {
  const cd q = std::sqrt(alpha * alpha - 4.0 * alpha);
  const cd u = -alpha + q;
  const cd v = -alpha - q;
  const cd w = (std::abs(u) >= std::abs(v)) ? u : v;
  return {w / (2.0 * alpha), 2.0 / w};
}

double best_triple_match(const std::array<cd, 3>& got, const std::array<cd, 3>& want) {
  std::array<int, 3> perm = {0, 1, 2};
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      worst = std::max(worst, std::abs(got[i] - want[static_cast<std::size_t>(perm[i])]));
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// At z = 0 the resolvent cubic factors as (D+1)(alpha D^2 + alpha D + 1), so
// its roots must be exactly -1 plus the quadratic's pair.
CheckResult cubic_factorization_at_zero() {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double r = 0.05 * std::pow(2000.0, k / 49.0);
    const cd alpha = std::polar(r, golden * k);
    const StieltjesSolution sol = solve_cubic(alpha, 0.0);
    const auto qp = quadratic_pair(alpha);
    const std::array<cd, 3> want = {cd(-1.0, 0.0), qp[0], qp[1]};
    worst = std::max(worst, best_triple_match(sol.roots, want));
  }
  return make("1a", "cubic roots at z=0 match the (D+1)(aD^2+aD+1) factorization", worst,
              1e-10);
}

// Marchenko-Pastur closed form, square root branch picked for Im > 0.
cd mp_transform(cd alpha) {
  const cd q = std::sqrt(alpha * alpha - 4.0 * alpha);
  const cd a = (-alpha + q) / (2.0 * alpha);
  const cd b = (-alpha - q) / (2.0 * alpha);
  return a.imag() > 0.0 ? a : b;
}

CheckResult branch_matches_mp() {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double re = -4.0 + 12.0 * i / 9.0;
    for (int j = 0; j < 10; ++j) {
      const double im = 1e-3 * std::pow(10.0, 4.0 * j / 9.0);
      const cd alpha(re, im);
      worst = std::max(worst, std::abs(stieltjes_branch(alpha, 0.0) - mp_transform(alpha)));
    }
  }
  return make("1b", "continued branch vs Marchenko-Pastur closed form at z=0", worst, 1e-10);
}

CheckResult support_endpoint_values() {
  const SupportInterval at_one = support_endpoints(1.0);
  const double exact_err = std::max(std::abs(at_one.x1), std::abs(at_one.x2 - 6.75));
  const double limit_err = std::abs(support_endpoints(1e-4).x2 - 4.0);
  const double worst = std::max(exact_err / 1e-12, limit_err / 1e-6);
  return make("1c", "support endpoints: (0, 6.75) at |z|=1, upper edge -> 4 (err/tol)", worst,
              1.0);
}

CheckResult log_potential_derivative() {
  constexpr std::array<std::array<double, 2>, 8> probes = {{{0.3, 0.2},
                                                            {1.5, 0.8},
                                                            {0.5, 0.4},
                                                            {-0.4, 0.3},
                                                            {1.3, -0.5},
                                                            {0.2, -0.6},
                                                            {-1.2, 0.9},
                                                            {0.7, 0.2}}};
  double worst = 0.0;
  for (const auto& p : probes) {
    worst = std::max(worst, std::abs(log_potential_check(p[0], p[1], 1e-3)));
  }
  return make("1d", "d/ds of the log potential equals g(s,t) at 8 probes", worst, 1e-2);
}

CheckResult g_route_agreement() {
  constexpr std::array<cd, 5> zs = {cd(1.6, 0.4), cd(-1.5, 0.35), cd(0.3, -1.7), cd(1.8, -0.2),
                                    cd(-0.4, 1.55)};
  double worst = 0.0;
  for (int m : {2, 3}) {
    EnsembleConfig cfg;
    cfg.m = m;
    cfg.n = 32;
    cfg.dist = Dist::complex_gaussian;
    cfg.seed = 424242;
    cfg.validate();
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<ComplexMatrix> factors;
      factors.reserve(static_cast<std::size_t>(m));
      for (int j = 1; j <= m; ++j) factors.push_back(sample_factor(cfg, j, trial));
      const ComplexMatrix y = build_linearization(factors);
      const GTwoWays g = g_empirical_two_ways(y, zs[static_cast<std::size_t>(trial)], 1e-4);
      worst = std::max(worst, std::abs(g.g_via_logdet - g.g_via_eigs));
    }
  }
  return make("1e", "g via log-determinant vs g via eigenvalues, 10 cases", worst, 1e-5);
}

CheckResult multiplicity_structure() {
  constexpr std::array<std::array<int, 2>, 6> cases = {
      {{2, 8}, {2, 32}, {3, 8}, {3, 16}, {4, 8}, {4, 16}}};
  constexpr std::array<Dist, 4> dists = {Dist::complex_gaussian, Dist::real_gaussian,
                                         Dist::rademacher, Dist::uniform_disc};
  double worst = 0.0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    EnsembleConfig cfg;
    cfg.m = cases[c][0];
    cfg.n = cases[c][1];
    cfg.dist = dists[c % dists.size()];
    cfg.seed = 777;
    cfg.validate();
    std::vector<ComplexMatrix> factors;
    factors.reserve(static_cast<std::size_t>(cfg.m));
    for (int j = 1; j <= cfg.m; ++j) factors.push_back(sample_factor(cfg, j, static_cast<int>(c)));
    worst = std::max(worst, multiplicity_check(factors).max_pair_dist);
  }
  return make("1f", "linearization spectrum powers to the product spectrum, m-fold", worst,
              1e-8);
}

CheckResult horn_majorization() {
  constexpr std::array<int, 5> sizes = {4, 8, 16, 32, 64};
  constexpr std::array<Dist, 4> dists = {Dist::complex_gaussian, Dist::real_gaussian,
                                         Dist::rademacher, Dist::uniform_disc};
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    EnsembleConfig cfg;
    cfg.m = 1 + i % 3;
    cfg.n = sizes[static_cast<std::size_t>(i) % sizes.size()];
    cfg.dist = dists[static_cast<std::size_t>(i) % dists.size()];
    cfg.seed = 31337;
    cfg.validate();
    std::vector<ComplexMatrix> factors;
    factors.reserve(static_cast<std::size_t>(cfg.m));
    for (int j = 1; j <= cfg.m; ++j) factors.push_back(sample_factor(cfg, j, i));
    const ComplexMatrix x = build_product(factors);

    std::vector<double> lam_sq;
    for (const cd& lam : eigenvalues(x).values) lam_sq.push_back(std::norm(lam));
    std::sort(lam_sq.begin(), lam_sq.end(), std::greater<>());
    const std::vector<double> sv = singular_values(x).reals();

    double lam_sum = 0.0, sv_sum = 0.0;
    for (std::size_t k = 0; k < lam_sq.size(); ++k) {
      lam_sum += lam_sq[k];
      sv_sum += sv[k] * sv[k];
      worst = std::max(worst, lam_sum - sv_sum);
    }
  }
  return make("1g", "eigenvalue moduli majorized by singular values, 100 matrices", worst,
              1e-8);
}

}  // namespace

std::vector<CheckResult> run_identity_suite() {
  return {cubic_factorization_at_zero(), branch_matches_mp(), support_endpoint_values(),
          log_potential_derivative(),    g_route_agreement(), multiplicity_structure(),
          horn_majorization()};
}

bool all_pass(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

}  // namespace prodlaw
