#pragma once

#include <complex>
#include <cstddef>

// Vector kernels over interleaved complex<double> storage. Two variants are
// compiled: a scalar reference, and on x86-64 an AVX2+FMA version in its own
// translation unit. active() resolves once per process (PRODLAW_KERNELS env
// override, else CPU detection), so a given build on a given machine always
// takes the same code path and results stay reproducible run to run.
//
// Reductions accumulate in a fixed order per variant; the two variants agree
// to rounding, not bitwise. The equivalence tests pin the bound.

namespace prodlaw::kernels {

using cd = std::complex<double>;

struct Ops {
  const char* name;
  // y[i] += a*x[i]
  void (*axpy)(cd a, const cd* x, cd* y, std::size_t n);
  // x[i] *= a
  void (*scal)(cd a, cd* x, std::size_t n);
  // sum of x[i]*y[i]
  cd (*dotu)(const cd* x, const cd* y, std::size_t n);
  // sum of conj(x[i])*y[i]
  cd (*dotc)(const cd* x, const cd* y, std::size_t n);
  // sum of |x[i]|^2
  double (*nrm2sq)(const cd* x, std::size_t n);
  // Givens pair on two contiguous rows, c real:
  //   x[i] <-  c*x[i] + s*y[i]
  //   y[i] <- -conj(s)*x_old[i] + c*y[i]
  void (*rot)(cd* x, cd* y, double c, cd s, std::size_t n);
  // same rotation applied to the adjacent element pair (p[0], p[1]) of each
  // of nrows rows; p advances by stride complex elements per row
  void (*rot_pair)(cd* p, std::size_t stride, double c, cd s, std::size_t nrows);
};

const Ops& scalar_ops();
const Ops* avx2_ops();   // null when not compiled in or the CPU lacks AVX2/FMA
const Ops& active();

}  // namespace prodlaw::kernels
