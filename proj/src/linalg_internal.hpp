#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "prodlaw/complex_matrix.hpp"

// Shared Householder machinery for the two reductions. Conventions follow
// the standard elementary-reflector form H = I - tau*v*v', v[0] = 1, with
// beta = (H'x)[0] real.

namespace prodlaw::detail {

struct Reflector {
  cd tau;       // 0 means identity (column already in shape)
  double beta;  // new leading entry, real by construction
};

// Builds the reflector for x[0..len-1]; overwrites x[1..] with the tail of v.
inline Reflector make_reflector(cd* x, std::size_t len) {
  const cd alpha = x[0];
  double tail2 = 0.0;
  for (std::size_t i = 1; i < len; ++i) tail2 += std::norm(x[i]);
  if (tail2 == 0.0 && alpha.imag() == 0.0) {
    return {cd(0.0, 0.0), alpha.real()};
  }
  const double anorm = std::sqrt(std::norm(alpha) + tail2);
  const double beta = (alpha.real() >= 0.0) ? -anorm : anorm;
  const cd tau((beta - alpha.real()) / beta, -alpha.imag() / beta);
  const cd scale = 1.0 / (alpha - beta);
  for (std::size_t i = 1; i < len; ++i) x[i] *= scale;
  return {tau, beta};
}

// A[r0..r0+len-1][c0..c1-1] <- (I - tau v v*) * (same block); v[0] = 1
// implicit, vtail = v[1..len-1]. work must hold c1-c0 entries.
void apply_reflector_left(ComplexMatrix& a, std::size_t r0, std::size_t c0, std::size_t c1,
                          const cd* vtail, std::size_t len, cd tau, cd* work);

// A[r0..r1-1][c0..c0+len-1] <- (same block) * (I - tau v v*)
void apply_reflector_right(ComplexMatrix& a, std::size_t r0, std::size_t r1, std::size_t c0,
                           const cd* vtail, std::size_t len, cd tau,
                           std::vector<cd>& vconj_buf);

}  // namespace prodlaw::detail
