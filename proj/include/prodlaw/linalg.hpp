#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "prodlaw/complex_matrix.hpp"

namespace prodlaw {

enum class SpectralKind { eigenvalues, singular_values };

struct SpectralSample {
  SpectralKind kind = SpectralKind::eigenvalues;
  // eigenvalues: unordered complex; singular values: real parts, descending
  std::vector<cd> values;
  std::size_t dim = 0;
  int trial = -1;               // provenance: trial index when sampled in a run
  std::optional<cd> z_probe;    // provenance: shift for R = Y - zI derived samples

  std::vector<double> reals() const;
};

// QR/QL iteration exceeded its sweep budget (30 * dim); never silent.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All eigenvalues with algebraic multiplicity via unitary Hessenberg
// reduction + implicitly shifted QR with deflation. Returned values are exact
// eigenvalues of A+E with ||E|| <= c*dim*eps*||A||, c a small constant (~16).
SpectralSample eigenvalues(const ComplexMatrix& A);

// Real eigenvalues, ascending, via Householder tridiagonalization + implicit
// shift QL. Input must be Hermitian within 1e-12*||H|| (symmetrized
// internally). Values negative by at most 1e-10*||H|| are rounding noise on
// a PSD input and are clamped to 0; genuine negative eigenvalues pass
// through untouched.
SpectralSample hermitian_eigenvalues(const ComplexMatrix& H);

// Descending nonnegative singular values, computed as square roots of the
// eigenvalues of A*A. Squaring costs conditioning: values below ~1e-7
// relative to ||A|| are noise-level; acceptable for every use here.
SpectralSample singular_values(const ComplexMatrix& A);

// ln|det A|^2 = sum of ln(s_k^2); -infinity when any singular value is 0
double log_abs_det(const ComplexMatrix& A);

}  // namespace prodlaw
