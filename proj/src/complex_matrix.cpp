#include "prodlaw/complex_matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "prodlaw/kernels.hpp"

namespace prodlaw {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cd(0.0, 0.0)) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      m(j, i) = std::conj((*this)(i, j));
    }
  }
  return m;
}

ComplexMatrix ComplexMatrix::shifted(cd z) const {
  if (!square()) throw std::invalid_argument("shifted: matrix must be square");
  ComplexMatrix m = *this;
  for (std::size_t i = 0; i < rows_; ++i) m(i, i) -= z;
  return m;
}

double ComplexMatrix::frobenius_norm_sq() const {
  return kernels::active().nrm2sq(data_.data(), data_.size());
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cd& v : data_) m = std::max(m, std::abs(v));
  return m;
}

cd ComplexMatrix::trace() const {
  if (!square()) throw std::invalid_argument("trace: matrix must be square");
  cd t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

bool ComplexMatrix::all_finite() const {
  for (const cd& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  const auto& ops = kernels::active();
  ComplexMatrix c(a.rows(), b.cols());
  // i-blocked so each row of b is reused across the block from cache
  const std::size_t iblk = 32;
  for (std::size_t i0 = 0; i0 < a.rows(); i0 += iblk) {
    const std::size_t i1 = std::min(i0 + iblk, a.rows());
    for (std::size_t k = 0; k < a.cols(); ++k) {
      for (std::size_t i = i0; i < i1; ++i) {
        const cd f = a(i, k);
        if (f.real() != 0.0 || f.imag() != 0.0) {
          ops.axpy(f, b.row(k), c.row(i), b.cols());
        }
      }
    }
  }
  return c;
}

ComplexMatrix adjoint_times(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("adjoint_times: dimension mismatch");
  const auto& ops = kernels::active();
  ComplexMatrix c(a.cols(), b.cols());
  const std::size_t iblk = 32;
  for (std::size_t i0 = 0; i0 < a.cols(); i0 += iblk) {
    const std::size_t i1 = std::min(i0 + iblk, a.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
      for (std::size_t i = i0; i < i1; ++i) {
        const cd f = std::conj(a(k, i));
        if (f.real() != 0.0 || f.imag() != 0.0) {
          ops.axpy(f, b.row(k), c.row(i), b.cols());
        }
      }
    }
  }
  return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

}  // namespace prodlaw
