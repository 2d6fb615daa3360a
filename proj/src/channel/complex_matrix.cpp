// SPDX-License-Identifier: Apache-2.0
#include "irsmba/channel/complex_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "irsmba/error.hpp"

namespace irsmba {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, cplx fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) throw DimensionError("complex matrix dims must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DimensionError("complex matrix dims must be positive");
  if (data_.size() != rows * cols) throw DimensionError("complex matrix entry count does not match dims");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::hermitian() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  }
  return out;
}

double ComplexMatrix::frobenius_norm_sq() const {
  double s = 0.0;
  for (const cplx& v : data_) s += std::norm(v);
  return s;
}

double ComplexMatrix::frobenius_norm() const { return std::sqrt(frobenius_norm_sq()); }

cplx ComplexMatrix::trace() const {
  if (rows_ != cols_) throw DimensionError("trace of a non-square matrix");
  cplx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix add: dims differ");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix subtract: dims differ");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& v : data_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) {
    std::ostringstream msg;
    msg << "matrix product: " << a.rows_ << "x" << a.cols_ << " times " << b.rows_ << "x" << b.cols_;
    throw DimensionError(msg.str());
  }
  ComplexMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      const cplx* brow = b.data_.data() + k * b.cols_;
      cplx* orow = out.data_.data() + i * out.cols_;
      for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: dims differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

ComplexMatrix hermitian_inverse(const ComplexMatrix& a, double max_condition) {
  if (a.rows() != a.cols()) throw DimensionError("hermitian_inverse: matrix must be square");
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = a(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
  if (eig.info() != Eigen::Success) throw SingularMatrixError("hermitian_inverse: eigendecomposition failed");
  const Eigen::VectorXd& lam = eig.eigenvalues();  // ascending
  const double lo = lam(0), hi = lam(n - 1);
  if (!(lo > 0.0) || hi / lo > max_condition) {
    std::ostringstream msg;
    msg << "Gram matrix is singular or ill-conditioned (eigenvalues in [" << lo << ", " << hi
        << "], condition limit " << max_condition << ")";
    throw SingularMatrixError(msg.str());
  }
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  const Eigen::MatrixXcd inv = v * lam.cwiseInverse().asDiagonal() * v.adjoint();
  ComplexMatrix out(a.rows(), a.cols());
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = inv(r, c);
  }
  return out;
}

}  // namespace irsmba
