#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace prodlaw {

using cd = std::complex<double>;

// Dense row-major complex matrix; the single carrier for ensemble factors,
// products, linearizations, shifted matrices R = Y - zI and Hermitian forms.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_ && rows_ > 0; }

  cd* row(std::size_t i) { return data_.data() + i * cols_; }
  const cd* row(std::size_t i) const { return data_.data() + i * cols_; }

  cd& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cd& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<cd>& data() { return data_; }
  const std::vector<cd>& data() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix shifted(cd z) const;  // this - z*I

  double frobenius_norm_sq() const;
  double max_abs() const;
  cd trace() const;
  bool all_finite() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cd> data_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
// adjoint(a) * b without forming the adjoint; used for Hermitian forms A*A
ComplexMatrix adjoint_times(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace prodlaw
