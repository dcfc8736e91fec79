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

#include <cstddef>
#include <functional>
#include <vector>

#include "qci/matrix.hpp"

namespace qci {

/** Dimensions of the two tensor factors labelling a square matrix of side
 * d1 * d2. Tensor index (i, p) maps to i * d2 + p. */
struct BipartiteDims {
  std::size_t d1 = 0;
  std::size_t d2 = 0;

  std::size_t total() const { return d1 * d2; }
  BipartiteDims swapped() const { return {d2, d1}; }
  bool operator==(const BipartiteDims&) const = default;
};

enum class Factor { first, second };

/** Throws DimensionError unless `m` is square of side dims.total(). */
void require_dims(const Matrix& m, const BipartiteDims& dims,
                  const char* what);

Matrix tensor_product(const Matrix& a, const Matrix& b);

/** tr_1 returns a d2 x d2 matrix, tr_2 a d1 x d1 matrix. */
Matrix partial_trace(const Matrix& m, Factor which, const BipartiteDims& dims);

Matrix partial_transpose(const Matrix& m, Factor which,
                         const BipartiteDims& dims);

/** Reorders A (x) B into B (x) A; result is labelled by dims.swapped(). */
Matrix swap_factors(const Matrix& m, const BipartiteDims& dims);

struct EigenSystem {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k belongs to values[k]
};

/**
 * Hermitian eigendecomposition by cyclic complex Jacobi rotations.
 * Throws NotHermitianError for inputs failing the relative Hermiticity test.
 */
EigenSystem eigh(const Matrix& m);

struct SingularSystem {
  Matrix u;                     // rows x k, orthonormal columns
  std::vector<double> values;   // descending, k = min(rows, cols)
  Matrix v;                     // cols x k, orthonormal columns
};

/** One-sided Jacobi SVD, m = u * diag(values) * v^dagger. */
SingularSystem svd(const Matrix& m);
std::vector<double> singular_values(const Matrix& m);

/** Unitary factor W of the polar decomposition m = W P (m square). */
Matrix polar_unitary(const Matrix& m);

struct Norms {
  double trace_norm = 0.0;
  double operator_norm = 0.0;
  double frobenius = 0.0;
};

/** Spectral norms of a Hermitian matrix. */
Norms norms(const Matrix& m);
double trace_norm(const Matrix& m);
double operator_norm(const Matrix& m);
double frobenius_norm(const Matrix& m);

/** Hilbert-Schmidt inner product tr[A^dagger B]. */
Complex hs_inner(const Matrix& a, const Matrix& b);

/** Real inner product tr[A B] of two Hermitian matrices (A^dagger = A). */
double hermitian_inner(const Matrix& a, const Matrix& b);

/** f applied to the spectrum: V f(Lambda) V^dagger. */
Matrix spectral_apply(const EigenSystem& es, const std::function<double(double)>& f);
Matrix spectral_apply(const Matrix& m, const std::function<double(double)>& f);

double min_eigenvalue(const Matrix& m);

/** Positive semi-definiteness with tolerance scaled by max(1, ||M||_op). */
bool is_psd(const Matrix& m, double tol);

/** Positive and negative parts: m = pos - neg, both PSD with orthogonal
 * supports. */
std::pair<Matrix, Matrix> split_positive_negative(const Matrix& m);

/** Orthonormal basis of the n x n Hermitian matrices under tr[A B]:
 * E_ss, (E_st + E_ts)/sqrt2, i(E_ts - E_st)/sqrt2 for s < t. */
std::vector<Matrix> hermitian_basis(std::size_t n);

/** Matrix exponential exp(i H) of a Hermitian generator. */
Matrix expi_hermitian(const Matrix& h);

/** Unitarity defect ||U^dagger U - I||_op. */
double unitarity_defect(const Matrix& u);

/** Polishes an almost-unitary matrix with Newton-Schulz steps. */
Matrix reunitarize(const Matrix& u);

}  // namespace qci
