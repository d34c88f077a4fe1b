#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "linalg_internal.hpp"
#include "prodlaw/kernels.hpp"
#include "prodlaw/linalg.hpp"

namespace prodlaw {

namespace {

double herm_deviation(const ComplexMatrix& h) {
  double dev = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = i; j < h.cols(); ++j) {
      dev = std::max(dev, std::abs(h(i, j) - std::conj(h(j, i))));
    }
  }
  return dev;
}

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form. Returns diagonal d and subdiagonal e (e[n-1] unused); the subdiagonal
// of the similar tridiagonal matrix is real up to a unitary diagonal phase,
// so |.| of the final entries is taken.
void tridiagonalize(ComplexMatrix& w, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = w.rows();
  const auto& ops = kernels::active();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  if (n == 1) {
    d[0] = w(0, 0).real();
    return;
  }
  std::vector<cd> hv(n), p(n), wk(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    for (std::size_t i = 0; i < len; ++i) hv[i] = w(k + 1 + i, k);
    const detail::Reflector rf = detail::make_reflector(hv.data(), len);
    w(k + 1, k) = rf.beta;
    w(k, k + 1) = rf.beta;
    for (std::size_t i = k + 2; i < n; ++i) {
      w(i, k) = 0.0;
      w(k, i) = 0.0;
    }
    if (rf.tau == cd(0.0, 0.0)) continue;
    hv[0] = 1.0;
    // B <- Q B Q* on the trailing block, as the rank-2 update
    // B - v w* - w v* with x = tau B v, w = x - (tau (x* v) / 2) v.
    for (std::size_t i = 0; i < len; ++i) {
      p[i] = rf.tau * ops.dotu(w.row(k + 1 + i) + k + 1, hv.data(), len);
    }
    cd kappa(0.0, 0.0);
    for (std::size_t i = 0; i < len; ++i) kappa += std::conj(p[i]) * hv[i];
    const cd half = 0.5 * rf.tau * kappa;
    for (std::size_t i = 0; i < len; ++i) wk[i] = p[i] - half * hv[i];
    for (std::size_t i = 0; i < len; ++i) {
      cd* row = w.row(k + 1 + i) + k + 1;
      for (std::size_t j = 0; j < len; ++j) {
        row[j] -= hv[i] * std::conj(wk[j]) + wk[i] * std::conj(hv[j]);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = w(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = std::abs(w(i + 1, i));
}

// Implicit-shift QL sweeps on a real symmetric tridiagonal matrix.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n < 2) return;
  const double eps = std::numeric_limits<double>::epsilon();
  const long budget = 30L * static_cast<long>(n);
  long sweeps = 0;
  for (std::size_t l = 0; l < n; ++l) {
    for (;;) {
      std::size_t m = l;
      while (m + 1 < n) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
        ++m;
      }
      if (m == l) break;
      if (++sweeps > budget) {
        throw ConvergenceError("tridiagonal ql iteration: no convergence in " +
                               std::to_string(budget) + " sweeps");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, pp = 0.0;
      bool underflow = false;
      for (std::size_t j = m; j-- > l;) {
        double f = s * e[j];
        const double b = c * e[j];
        r = std::hypot(f, g);
        e[j + 1] = r;
        if (r == 0.0) {
          d[j + 1] -= pp;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[j + 1] - pp;
        f = (d[j] - g) * s + 2.0 * c * b;
        pp = s * f;
        d[j + 1] = g + pp;
        g = c * f - b;
      }
      if (underflow) continue;
      d[l] -= pp;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

ComplexMatrix symmetrized(const ComplexMatrix& H) {
  if (!H.square()) throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");
  if (!H.all_finite()) throw std::invalid_argument("hermitian_eigenvalues: entries must be finite");
  const double scale = std::sqrt(H.frobenius_norm_sq());
  if (herm_deviation(H) > 1e-12 * std::max(scale, 1e-300)) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");
  }
  ComplexMatrix w(H.rows(), H.cols());
  for (std::size_t i = 0; i < H.rows(); ++i) {
    for (std::size_t j = 0; j < H.cols(); ++j) {
      w(i, j) = 0.5 * (H(i, j) + std::conj(H(j, i)));
    }
  }
  return w;
}

}  // namespace

SpectralSample hermitian_eigenvalues(const ComplexMatrix& H) {
  ComplexMatrix w = symmetrized(H);
  const double scale = std::sqrt(w.frobenius_norm_sq());
  std::vector<double> d, e;
  tridiagonalize(w, d, e);
  tridiag_ql(d, e);
  std::sort(d.begin(), d.end());
  const double noise = 1e-10 * scale;
  for (double& x : d) {
    if (x < 0.0 && x >= -noise) x = 0.0;
  }
  SpectralSample out;
  out.kind = SpectralKind::eigenvalues;
  out.dim = H.rows();
  out.values.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out.values[i] = cd(d[i], 0.0);
  return out;
}

SpectralSample singular_values(const ComplexMatrix& A) {
  if (!A.square()) throw std::invalid_argument("singular_values: matrix must be square");
  if (!A.all_finite()) throw std::invalid_argument("singular_values: entries must be finite");
  const ComplexMatrix gram = adjoint_times(A, A);
  SpectralSample eigs = hermitian_eigenvalues(gram);
  SpectralSample out;
  out.kind = SpectralKind::singular_values;
  out.dim = A.rows();
  out.values.resize(eigs.values.size());
  // eigs ascend; singular values are reported descending. The gram matrix is
  // PSD by construction, so anything still negative is rounding noise.
  const std::size_t n = eigs.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = cd(std::sqrt(std::max(0.0, eigs.values[n - 1 - i].real())), 0.0);
  }
  return out;
}

double log_abs_det(const ComplexMatrix& A) {
  const SpectralSample sv = singular_values(A);
  double sum = 0.0;
  // ascending accumulation keeps the small factors from being absorbed
  for (std::size_t i = sv.values.size(); i-- > 0;) {
    const double s = sv.values[i].real();
    if (s == 0.0) return -std::numeric_limits<double>::infinity();
    sum += std::log(s);
  }
  return 2.0 * sum;
}

}  // namespace prodlaw
