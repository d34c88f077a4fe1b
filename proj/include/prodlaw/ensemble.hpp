#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prodlaw/complex_matrix.hpp"
#include "prodlaw/rng.hpp"

namespace prodlaw {

// Entry laws, all standardized to mean 0 and unit variance:
//   complex_gaussian : (g1 + i*g2)/sqrt(2), g1, g2 independent N(0,1)
//   real_gaussian    : N(0,1)
//   rademacher       : +/-1 with equal probability
//   uniform_disc     : uniform on the disc of radius sqrt(2)
enum class Dist { complex_gaussian, real_gaussian, rademacher, uniform_disc };

Dist parse_dist(const std::string& tag);  // throws std::invalid_argument
const char* dist_tag(Dist d);

struct EnsembleConfig {
  int m = 1;
  int n = 0;
  Dist dist = Dist::complex_gaussian;
  std::vector<double> sigmas;  // empty means all ones, else exactly m positive entries
  std::uint64_t seed = 0;
  double moment_eta = 1.0;  // records the 2+eta moment assumption; metadata only

  void validate() const;  // throws std::invalid_argument
  double sigma(int j) const;  // per-factor scale, j in 1..m
  double sigma_product() const;
};

cd standardized_draw(Dist d, SubstreamRng& rng);

// n x n factor with iid entries sigma_j * xi / sqrt(n), fully determined by
// (seed, j, trial); j is 1-based
ComplexMatrix sample_factor(const EnsembleConfig& cfg, int j, int trial);

// left-to-right product X1 X2 ... Xm
ComplexMatrix build_product(const std::vector<ComplexMatrix>& factors);

// (mn) x (mn) cyclic block matrix: X_k in block (k, k+1) for k < m, X_m in
// block (m, 1), zeros elsewhere; plain X1 for m = 1
ComplexMatrix build_linearization(const std::vector<ComplexMatrix>& factors);

// entry-wise truncation at n^delta/sqrt(n) with plug-in recentering and
// variance rescaling per nonzero block; blocks with no clipped entry pass
// through unchanged, zero blocks stay exactly zero
ComplexMatrix truncate_rescale(const ComplexMatrix& Y, int n, double delta);

}  // namespace prodlaw
