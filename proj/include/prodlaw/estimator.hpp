#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "prodlaw/complex_matrix.hpp"
#include "prodlaw/linalg.hpp"

namespace prodlaw {

// Sorted sample with right-continuous empirical cdf.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> values);

  double cdf(double x) const;
  double cdf_left(double x) const;  // left limit F(x-)
  const std::vector<double>& sorted() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

// Radial marginal |lambda_k| of an eigenvalue sample.
EmpiricalDistribution esd_radii(const SpectralSample& eigs);

// sup_x |F_n(x) - F(x)| against a continuous reference cdf, taking both sides
// of every empirical jump.
double ks_statistic(const EmpiricalDistribution& sample,
                    const std::function<double(double)>& reference_cdf);

// KS distance of arg(lambda)/(2 pi) + 1/2 against the uniform law on (0, 1].
// Eigenvalues with |lambda| <= zero_tol carry no angle and are left out, with
// the count surfaced.
struct AngularKs {
  double stat;
  std::size_t excluded;
};

AngularKs angular_ks(const SpectralSample& eigs, double zero_tol = 0.0);

// (1/count) sum 1/(x_k - alpha) over real spectral points; Im(alpha) must be
// positive, which bounds the result by 1/Im(alpha).
cd empirical_stieltjes(const SpectralSample& h_eigs, cd alpha);

// d/ds of (1/N) log|det(Y - z)|^2 at z = s + it, computed two independent
// ways: a central difference of the log determinant through the singular
// values, and the exact resolvent form -2 Re (1/N) sum 1/(lambda_k - z)
// through the eigenvalues. Requires z at distance > 1e-6 from spec(Y), and
// the shifted matrices at z +- h must stay numerically nonsingular.
struct GTwoWays {
  double g_via_logdet;
  double g_via_eigs;
  double h;
};

GTwoWays g_empirical_two_ways(const ComplexMatrix& y, cd z, double h = 1e-4);

// Levy metric between two empirical cdfs, by bisection on the feasibility of
// the band F(x-e)-e <= G(x) <= F(x+e)+e checked at every jump.
double levy_distance(const EmpiricalDistribution& f, const EmpiricalDistribution& g);

// Builds the product and the linearization of the given factors and matches
// the multiset {mu^m : mu in spec(linearization)} against spec(product), each
// product eigenvalue consumed exactly m times. Greedy nearest matching with
// an optimal-assignment fallback when the greedy bound is loose. pass holds
// when the worst pair distance is within 1e-6 of the product's Frobenius
// norm. Exact-arithmetic-scale check: m >= 2, n <= 64.
struct MultiplicityReport {
  double max_pair_dist;
  double tolerance;
  bool pass;
  bool used_hungarian;
};

MultiplicityReport multiplicity_check(const std::vector<ComplexMatrix>& factors);

// Smallest singular value of y - z. The probe point must stay in a fixed
// compact window, |z| <= 10.
inline constexpr double kProbeRadiusBound = 10.0;

double least_singular_probe(const ComplexMatrix& y, cd z);

// Largest singular value of y together with the mean squared singular value
// (1/(mn)) Tr(Y*Y), flagged when the latter drifts off its ensemble
// expectation of 1 by more than 5/sqrt(block_n).
struct NormGrowth {
  double op_norm;
  double trace_avg;
  double threshold;
  bool flagged;
};

NormGrowth norm_growth_check(const ComplexMatrix& y, std::size_t block_n);

}  // namespace prodlaw
