#include "prodlaw/kernels.hpp"

// AVX2+FMA kernels, two complex doubles per vector. Compiled with
// -mavx2 -mfma only for this file; the entry point checks CPU support at
// runtime so the rest of the binary stays runnable on baseline x86-64.

#if defined(PRODLAW_COMPILE_AVX2)

#include <immintrin.h>

namespace prodlaw::kernels {
namespace {

inline const double* flat(const cd* p) { return reinterpret_cast<const double*>(p); }
inline double* flat(cd* p) { return reinterpret_cast<double*>(p); }

// (a*b) per 128-bit lane: even slot re, odd slot im
inline __m256d cmul(__m256d a, __m256d b) {
  __m256d ar = _mm256_movedup_pd(a);
  __m256d ai = _mm256_unpackhi_pd(a, a);
  __m256d bs = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bs));
}

// conj(a)*b per lane
inline __m256d cmulc(__m256d a, __m256d b) {
  __m256d ar = _mm256_movedup_pd(a);
  __m256d ai = _mm256_unpackhi_pd(a, a);
  __m256d bs = _mm256_permute_pd(b, 0x5);
  return _mm256_fmsubadd_pd(ar, b, _mm256_mul_pd(ai, bs));
}

inline cd reduce_c(__m256d acc) {
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

void axpy_avx2(cd a, const cd* x, cd* y, std::size_t n) {
  const __m256d av = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(&a));
  const double* xs = flat(x);
  double* ys = flat(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(yv, cmul(av, xv)));
  }
  if (i < n) {
    const double ar = a.real(), ai = a.imag();
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    ys[2 * i] += ar * xr - ai * xi;
    ys[2 * i + 1] += ar * xi + ai * xr;
  }
}

void scal_avx2(cd a, cd* x, std::size_t n) {
  const __m256d av = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(&a));
  double* xs = flat(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    _mm256_storeu_pd(xs + 2 * i, cmul(av, xv));
  }
  if (i < n) {
    const double ar = a.real(), ai = a.imag();
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    xs[2 * i] = ar * xr - ai * xi;
    xs[2 * i + 1] = ar * xi + ai * xr;
  }
}

cd dotu_avx2(const cd* x, const cd* y, std::size_t n) {
  const double* xs = flat(x);
  const double* ys = flat(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    acc = _mm256_add_pd(acc, cmul(xv, yv));
  }
  cd s = reduce_c(acc);
  if (i < n) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    const double yr = ys[2 * i], yi = ys[2 * i + 1];
    s += cd(xr * yr - xi * yi, xr * yi + xi * yr);
  }
  return s;
}

cd dotc_avx2(const cd* x, const cd* y, std::size_t n) {
  const double* xs = flat(x);
  const double* ys = flat(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    acc = _mm256_add_pd(acc, cmulc(xv, yv));
  }
  cd s = reduce_c(acc);
  if (i < n) {
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    const double yr = ys[2 * i], yi = ys[2 * i + 1];
    s += cd(xr * yr + xi * yi, xr * yi - xi * yr);
  }
  return s;
}

double nrm2sq_avx2(const cd* x, std::size_t n) {
  const double* xs = flat(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  alignas(32) double out[4];
  _mm256_store_pd(out, acc);
  double s = (out[0] + out[1]) + (out[2] + out[3]);
  if (i < n) {
    s += xs[2 * i] * xs[2 * i] + xs[2 * i + 1] * xs[2 * i + 1];
  }
  return s;
}

void rot_avx2(cd* x, cd* y, double c, cd s, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d sv = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(&s));
  double* xs = flat(x);
  double* ys = flat(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    __m256d xn = _mm256_fmadd_pd(cv, xv, cmul(sv, yv));
    __m256d yn = _mm256_fmsub_pd(cv, yv, cmulc(sv, xv));
    _mm256_storeu_pd(xs + 2 * i, xn);
    _mm256_storeu_pd(ys + 2 * i, yn);
  }
  if (i < n) {
    const double sr = s.real(), si = s.imag();
    const double xr = xs[2 * i], xi = xs[2 * i + 1];
    const double yr = ys[2 * i], yi = ys[2 * i + 1];
    xs[2 * i] = c * xr + sr * yr - si * yi;
    xs[2 * i + 1] = c * xi + sr * yi + si * yr;
    ys[2 * i] = c * yr - (sr * xr + si * xi);
    ys[2 * i + 1] = c * yi - (sr * xi - si * xr);
  }
}

void rot_pair_avx2(cd* p, std::size_t stride, double c, cd s, std::size_t nrows) {
  const __m256d cv = _mm256_set1_pd(c);
  // low lane s, high lane -conj(s): one lane-wise cmul turns (y, x) into
  // (s*y, -conj(s)*x)
  const __m256d sv2 = _mm256_set_pd(s.imag(), -s.real(), s.imag(), s.real());
  for (std::size_t r = 0; r < nrows; ++r, p += stride) {
    double* q = flat(p);
    __m256d v = _mm256_loadu_pd(q);                    // (x, y)
    __m256d w = _mm256_permute2f128_pd(v, v, 0x01);    // (y, x)
    _mm256_storeu_pd(q, _mm256_fmadd_pd(cv, v, cmul(sv2, w)));
  }
}

}  // namespace

const Ops* avx2_ops() {
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) {
    return nullptr;
  }
  static const Ops ops = {
      "avx2",     axpy_avx2,   scal_avx2, dotu_avx2,
      dotc_avx2,  nrm2sq_avx2, rot_avx2,  rot_pair_avx2,
  };
  return &ops;
}

}  // namespace prodlaw::kernels

#else  // PRODLAW_COMPILE_AVX2

namespace prodlaw::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace prodlaw::kernels

#endif
