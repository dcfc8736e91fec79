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

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qci {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/** Raised when operand shapes do not fit together. */
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/** Raised when an operation requiring a Hermitian operand receives one that
 * fails the relative Hermiticity test. */
class NotHermitianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/** Raised when a positive semi-definite operand is required. */
class NotPsdError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Dense complex matrix, row-major.
 *
 * Sizes in this library stay at or below 16x16, so every operation is a
 * straightforward loop; no expression templates.
 */
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static Matrix zeros(std::size_t rows, std::size_t cols);
  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);
  /** Matrix unit E_ij of size n x n. */
  static Matrix unit(std::size_t n, std::size_t i, std::size_t j);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<Complex> entries() { return data_; }
  std::span<const Complex> entries() const { return data_; }

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conjugate() const;
  Complex trace() const;
  /** (M + M^dagger) / 2. */
  Matrix hermitian_part() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Complex scalar);
  Matrix& operator*=(double scalar);
  Matrix& operator/=(double scalar);

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix m);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(Matrix m, Complex scalar);
Matrix operator*(Complex scalar, Matrix m);
Matrix operator*(Matrix m, double scalar);
Matrix operator*(double scalar, Matrix m);
Matrix operator/(Matrix m, double scalar);

CVector operator*(const Matrix& m, std::span<const Complex> v);

/** |v><w| */
Matrix outer(std::span<const Complex> v, std::span<const Complex> w);
/** |v><v| */
Matrix projector(std::span<const Complex> v);

Complex dot(std::span<const Complex> v, std::span<const Complex> w);  // <v|w>
double vector_norm(std::span<const Complex> v);
CVector normalized(std::span<const Complex> v);
/** Tensor product of two vectors, index (i, p) -> i * w.size() + p. */
CVector kron(std::span<const Complex> v, std::span<const Complex> w);

/** Column j as a vector. */
CVector column(const Matrix& m, std::size_t j);
void set_column(Matrix& m, std::size_t j, std::span<const Complex> v);

/** Row-major flattening of an r x c matrix into an r*c vector. */
CVector vectorize(const Matrix& m);
Matrix unvectorize(std::span<const Complex> v, std::size_t rows,
                   std::size_t cols);

/** Largest |M_ij|. */
double max_abs(const Matrix& m);
/** max |M_ij - conj(M_ji)|. */
double hermiticity_defect(const Matrix& m);

/** Relative Hermiticity tolerance: defect <= tol * max entry magnitude. */
inline constexpr double kHermTol = 1e-9;

bool is_hermitian(const Matrix& m, double rel_tol = kHermTol);
/** Throws NotHermitianError if `m` fails is_hermitian. */
void require_hermitian(const Matrix& m, const std::string& what);
void require_square(const Matrix& m, const std::string& what);
void require_same_shape(const Matrix& a, const Matrix& b,
                        const std::string& what);

std::string shape_string(const Matrix& m);

}  // namespace qci
