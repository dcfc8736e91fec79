// Copyright 2026 The qci Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qci/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace qci {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionError(
        "Matrix: entry count " + std::to_string(data_.size()) +
        " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw DimensionError("Matrix: ragged initializer list");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::zeros(std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::unit(std::size_t n, std::size_t i, std::size_t j) {
  Matrix m(n, n);
  m(i, j) = 1.0;
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      out(j, i) = std::conj((*this)(i, j));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::conjugate() const {
  Matrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

Complex Matrix::trace() const {
  Complex t = 0.0;
  const std::size_t n = std::min(rows_, cols_);
  for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
  return t;
}

Matrix Matrix::hermitian_part() const {
  require_square(*this, "hermitian_part");
  Matrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
  return out;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(Complex scalar) {
  for (auto& z : data_) z *= scalar;
  return *this;
}

Matrix& Matrix::operator*=(double scalar) {
  for (auto& z : data_) z *= scalar;
  return *this;
}

Matrix& Matrix::operator/=(double scalar) {
  for (auto& z : data_) z /= scalar;
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator-(Matrix m) { return m *= -1.0; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw DimensionError("matrix product: " + shape_string(lhs) + " * " +
                         shape_string(rhs));
  }
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Matrix operator*(Matrix m, Complex scalar) { return m *= scalar; }
Matrix operator*(Complex scalar, Matrix m) { return m *= scalar; }
Matrix operator*(Matrix m, double scalar) { return m *= scalar; }
Matrix operator*(double scalar, Matrix m) { return m *= scalar; }
Matrix operator/(Matrix m, double scalar) { return m /= scalar; }

CVector operator*(const Matrix& m, std::span<const Complex> v) {
  if (m.cols() != v.size()) {
    throw DimensionError("matrix-vector product: " + shape_string(m) +
                         " * vector of length " + std::to_string(v.size()));
  }
  CVector out(m.rows(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

Matrix outer(std::span<const Complex> v, std::span<const Complex> w) {
  Matrix out(v.size(), w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) out(i, j) = v[i] * std::conj(w[j]);
  return out;
}

Matrix projector(std::span<const Complex> v) { return outer(v, v); }

Complex dot(std::span<const Complex> v, std::span<const Complex> w) {
  if (v.size() != w.size()) throw DimensionError("dot: length mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += std::conj(v[i]) * w[i];
  return acc;
}

double vector_norm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

CVector normalized(std::span<const Complex> v) {
  const double n = vector_norm(v);
  CVector out(v.begin(), v.end());
  if (n > 0.0)
    for (auto& z : out) z /= n;
  return out;
}

CVector kron(std::span<const Complex> v, std::span<const Complex> w) {
  CVector out(v.size() * w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t p = 0; p < w.size(); ++p) out[i * w.size() + p] = v[i] * w[p];
  return out;
}

CVector column(const Matrix& m, std::size_t j) {
  CVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, j);
  return out;
}

void set_column(Matrix& m, std::size_t j, std::span<const Complex> v) {
  if (v.size() != m.rows()) throw DimensionError("set_column: length mismatch");
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = v[i];
}

CVector vectorize(const Matrix& m) {
  return CVector(m.entries().begin(), m.entries().end());
}

Matrix unvectorize(std::span<const Complex> v, std::size_t rows,
                   std::size_t cols) {
  return Matrix(rows, cols, CVector(v.begin(), v.end()));
}

double max_abs(const Matrix& m) {
  double best = 0.0;
  for (const auto& z : m.entries()) best = std::max(best, std::abs(z));
  return best;
}

double hermiticity_defect(const Matrix& m) {
  require_square(m, "hermiticity_defect");
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

bool is_hermitian(const Matrix& m, double rel_tol) {
  if (!m.is_square()) return false;
  return hermiticity_defect(m) <= rel_tol * max_abs(m);
}

void require_hermitian(const Matrix& m, const std::string& what) {
  require_square(m, what);
  if (!is_hermitian(m)) {
    throw NotHermitianError(what + ": matrix is not Hermitian (defect " +
                            std::to_string(hermiticity_defect(m)) + ")");
  }
}

void require_square(const Matrix& m, const std::string& what) {
  if (!m.is_square()) {
    throw DimensionError(what + ": expected a square matrix, got " +
                         shape_string(m));
  }
}

void require_same_shape(const Matrix& a, const Matrix& b,
                        const std::string& what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(what + ": shape mismatch " + shape_string(a) +
                         " vs " + shape_string(b));
  }
}

std::string shape_string(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace qci
