#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "linalg_internal.hpp"
#include "prodlaw/kernels.hpp"
#include "prodlaw/linalg.hpp"

namespace prodlaw {

std::vector<double> SpectralSample::reals() const {
  std::vector<double> r(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) r[i] = values[i].real();
  return r;
}

namespace detail {

void apply_reflector_left(ComplexMatrix& a, std::size_t r0, std::size_t c0, std::size_t c1,
                          const cd* vtail, std::size_t len, cd tau, cd* work) {
  if (tau == cd(0.0, 0.0) || c1 <= c0) return;
  const auto& ops = kernels::active();
  const std::size_t w = c1 - c0;
  // u = v* A over the block; v[0] = 1
  cd* u = work;
  const cd* first = a.row(r0) + c0;
  for (std::size_t j = 0; j < w; ++j) u[j] = first[j];
  for (std::size_t i = 1; i < len; ++i) {
    ops.axpy(std::conj(vtail[i - 1]), a.row(r0 + i) + c0, u, w);
  }
  // rows -= tau * v_i * u
  ops.axpy(-tau, u, a.row(r0) + c0, w);
  for (std::size_t i = 1; i < len; ++i) {
    ops.axpy(-tau * vtail[i - 1], u, a.row(r0 + i) + c0, w);
  }
}

void apply_reflector_right(ComplexMatrix& a, std::size_t r0, std::size_t r1, std::size_t c0,
                           const cd* vtail, std::size_t len, cd tau,
                           std::vector<cd>& vconj_buf) {
  if (tau == cd(0.0, 0.0) || r1 <= r0) return;
  const auto& ops = kernels::active();
  vconj_buf.resize(len > 1 ? len - 1 : 0);
  for (std::size_t i = 1; i < len; ++i) vconj_buf[i - 1] = std::conj(vtail[i - 1]);
  for (std::size_t i = r0; i < r1; ++i) {
    cd* row = a.row(i) + c0;
    cd wi = row[0];
    if (len > 1) wi += ops.dotu(row + 1, vtail, len - 1);
    const cd f = -tau * wi;
    row[0] += f;
    if (len > 1) ops.axpy(f, vconj_buf.data(), row + 1, len - 1);
  }
}

}  // namespace detail

namespace {

using detail::Reflector;

// Unitary similarity reduction to upper Hessenberg form, in place.
void hessenberg_reduce(ComplexMatrix& a) {
  const std::size_t n = a.rows();
  if (n < 3) return;
  std::vector<cd> hv(n), work(n), vconj;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    for (std::size_t i = 0; i < len; ++i) hv[i] = a(k + 1 + i, k);
    const Reflector rf = detail::make_reflector(hv.data(), len);
    if (rf.tau == cd(0.0, 0.0)) continue;
    a(k + 1, k) = rf.beta;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    // Q = I - conj(tau) v v* from the left, Q* from the right
    detail::apply_reflector_left(a, k + 1, k + 1, n, hv.data() + 1, len, std::conj(rf.tau),
                                 work.data());
    detail::apply_reflector_right(a, 0, n, k + 1, hv.data() + 1, len, rf.tau, vconj);
  }
}

// Eigenvalues of [[a, b], [c, d]] via the half-trace form.
std::pair<cd, cd> eig2x2(cd a, cd b, cd c, cd d) {
  const cd p = 0.5 * (a - d);
  const cd q = std::sqrt(p * p + b * c);
  return {d + p + q, d + p - q};
}

// Rotation [c, s; -conj(s), c] with real c zeroing b in (a; b).
void make_givens(cd a, cd b, double& c, cd& s) {
  if (b == cd(0.0, 0.0)) {
    c = 1.0;
    s = cd(0.0, 0.0);
    return;
  }
  if (a == cd(0.0, 0.0)) {
    c = 0.0;
    s = std::conj(b) / std::abs(b);
    return;
  }
  const double na = std::abs(a);
  const double nr = std::hypot(na, std::abs(b));
  c = na / nr;
  s = (a / na) * std::conj(b) / nr;
}

// Implicitly shifted QR on an upper Hessenberg matrix; eigenvalues only, so
// rotations stay inside the active window.
std::vector<cd> qr_eigenvalues(ComplexMatrix& h) {
  const std::size_t n = h.rows();
  const double eps = std::numeric_limits<double>::epsilon();
  const double tiny = std::sqrt(h.frobenius_norm_sq()) * eps + 1e-300;
  const long budget = 30L * static_cast<long>(n);
  const auto& ops = kernels::active();

  std::vector<cd> eig(n);
  std::vector<double> cs(n);
  std::vector<cd> sn(n);

  long sweeps = 0;
  int stall = 0;
  std::size_t hi = n - 1;
  for (;;) {
    // deflate converged trailing blocks
    std::size_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      const double scale = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (sub <= eps * scale || sub <= tiny) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig[hi] = h(hi, hi);
      stall = 0;
      if (hi == 0) break;
      --hi;
      continue;
    }
    if (lo + 1 == hi) {
      auto [e1, e2] = eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
      eig[hi] = e1;
      eig[lo] = e2;
      stall = 0;
      if (lo == 0) break;
      hi = lo - 1;
      continue;
    }

    if (++sweeps > budget) {
      throw ConvergenceError("qr eigenvalue iteration: no convergence in " +
                             std::to_string(budget) + " sweeps");
    }

    // Wilkinson shift from the trailing 2x2; exceptional shift when stalled
    cd mu;
    if (++stall % 12 == 0) {
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      auto [e1, e2] = eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
      mu = (std::abs(e1 - h(hi, hi)) < std::abs(e2 - h(hi, hi))) ? e1 : e2;
    }

    for (std::size_t i = lo; i <= hi; ++i) h(i, i) -= mu;
    // QR by Givens sweeps down the subdiagonal, then RQ
    for (std::size_t k = lo; k < hi; ++k) {
      make_givens(h(k, k), h(k + 1, k), cs[k], sn[k]);
      ops.rot(h.row(k) + k, h.row(k + 1) + k, cs[k], sn[k], hi - k + 1);
      h(k + 1, k) = 0.0;
    }
    for (std::size_t k = lo; k < hi; ++k) {
      ops.rot_pair(&h(lo, k), n, cs[k], std::conj(sn[k]), k + 2 - lo);
    }
    for (std::size_t i = lo; i <= hi; ++i) h(i, i) += mu;
  }
  return eig;
}

}  // namespace

SpectralSample eigenvalues(const ComplexMatrix& A) {
  if (!A.square()) throw std::invalid_argument("eigenvalues: matrix must be square");
  if (!A.all_finite()) throw std::invalid_argument("eigenvalues: entries must be finite");
  SpectralSample out;
  out.kind = SpectralKind::eigenvalues;
  out.dim = A.rows();
  if (A.rows() == 1) {
    out.values = {A(0, 0)};
    return out;
  }
  ComplexMatrix h = A;
  hessenberg_reduce(h);
  out.values = qr_eigenvalues(h);
  return out;
}

}  // namespace prodlaw
