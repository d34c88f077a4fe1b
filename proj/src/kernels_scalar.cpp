#include "prodlaw/kernels.hpp"

// Reference kernels. Complex arithmetic is expanded into real ops so the hot
// loops never call the library's checked complex-multiply helpers; the
// accumulation order (plain left-to-right) is the reference semantics the
// SIMD variants are tested against.

namespace prodlaw::kernels {
namespace {

// complex<double> arrays are guaranteed addressable as double pairs
inline const double* flat(const cd* p) { return reinterpret_cast<const double*>(p); }
inline double* flat(cd* p) { return reinterpret_cast<double*>(p); }

void axpy_scalar(cd a, const cd* x, cd* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  const double* xs = flat(x);
  double* ys = flat(y);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    ys[2 * i] += ar * xr - ai * xi;
    ys[2 * i + 1] += ar * xi + ai * xr;
  }
}

void scal_scalar(cd a, cd* x, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  double* xs = flat(x);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    xs[2 * i] = ar * xr - ai * xi;
    xs[2 * i + 1] = ar * xi + ai * xr;
  }
}

cd dotu_scalar(const cd* x, const cd* y, std::size_t n) {
  const double* xs = flat(x);
  const double* ys = flat(y);
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    const double yr = ys[2 * i], yi = ys[2 * i + 1];
    sr += xr * yr - xi * yi;
    si += xr * yi + xi * yr;
  }
  return {sr, si};
}

cd dotc_scalar(const cd* x, const cd* y, std::size_t n) {
  const double* xs = flat(x);
  const double* ys = flat(y);
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    const double yr = ys[2 * i], yi = ys[2 * i + 1];
    sr += xr * yr + xi * yi;
    si += xr * yi - xi * yr;
  }
  return {sr, si};
}

double nrm2sq_scalar(const cd* x, std::size_t n) {
  const double* xs = flat(x);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += xs[2 * i] * xs[2 * i] + xs[2 * i + 1] * xs[2 * i + 1];
  }
  return s;
}

void rot_scalar(cd* x, cd* y, double c, cd s, std::size_t n) {
  const double sr = s.real(), si = s.imag();
  double* xs = flat(x);
  double* ys = flat(y);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    const double yr = ys[2 * i], yi = ys[2 * i + 1];
    xs[2 * i] = c * xr + sr * yr - si * yi;
    xs[2 * i + 1] = c * xi + sr * yi + si * yr;
    ys[2 * i] = c * yr - (sr * xr + si * xi);
    ys[2 * i + 1] = c * yi - (sr * xi - si * xr);
  }
}

void rot_pair_scalar(cd* p, std::size_t stride, double c, cd s, std::size_t nrows) {
  const double sr = s.real(), si = s.imag();
  for (std::size_t r = 0; r < nrows; ++r, p += stride) {
    double* q = flat(p);
    const double xr = q[0], xi = q[1];
    const double yr = q[2], yi = q[3];
    q[0] = c * xr + sr * yr - si * yi;
    q[1] = c * xi + sr * yi + si * yr;
    q[2] = c * yr - (sr * xr + si * xi);
    q[3] = c * yi - (sr * xi - si * xr);
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      "scalar",     axpy_scalar, scal_scalar,       dotu_scalar,
      dotc_scalar,  nrm2sq_scalar, rot_scalar,      rot_pair_scalar,
  };
  return ops;
}

}  // namespace prodlaw::kernels
