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
#include <span>
#include <vector>

#include "qci/linalg.hpp"
#include "qci/matrix.hpp"

namespace qci {

inline constexpr double kTpTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
/// Eigenvalues below kRankTol * (largest eigenvalue) count as zero.
inline constexpr double kRankTol = 1e-9;

/**
 * Operator-sum representation X -> sum_j V_j X V_j^dagger.
 * Every V_j is out_dim x in_dim and the list is never empty.
 */
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Matrix> ops);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  const std::vector<Matrix>& ops() const { return ops_; }

  /** ||sum_j V_j^dagger V_j - I||_op. */
  double tp_defect() const;
  bool trace_preserving(double tol = kTpTol) const { return tp_defect() <= tol; }

 private:
  std::size_t in_dim_ = 0;
  std::size_t out_dim_ = 0;
  std::vector<Matrix> ops_;
};

/**
 * Choi matrix in output (x) input order: C = sum_ij Phi(E_ij) (x) E_ij.
 * With this ordering Phi(X) = tr_2[C (I (x) X^T)] and the map is trace
 * preserving iff tr_1[C] = I.
 */
struct ChoiMatrix {
  Matrix matrix;
  BipartiteDims dims;  // d1 = output dimension, d2 = input dimension

  ChoiMatrix() = default;
  ChoiMatrix(Matrix m, BipartiteDims d);

  std::size_t out_dim() const { return dims.d1; }
  std::size_t in_dim() const { return dims.d2; }

  /** ||tr_1[C] - I||_op. */
  double tp_defect() const;
  bool trace_preserving(double tol = kTpTol) const { return tp_defect() <= tol; }
  bool completely_positive(double tol = kPsdTol) const;
};

struct HolevoPair {
  Matrix state;   // R_k, output state
  Matrix effect;  // F_k, PSD on the input space
};

/** Measure-and-prepare form rho -> sum_k R_k tr[F_k rho]. */
struct HolevoEnsemble {
  std::vector<HolevoPair> pairs;

  Matrix apply(const Matrix& x) const;
  /** ||sum_k F_k - I||_op. */
  double effect_defect() const;
  bool ebt(double tol = kTpTol) const { return effect_defect() <= tol; }
};

Matrix apply_kraus(const KrausChannel& ch, const Matrix& x);
ChoiMatrix choi_from_kraus(const KrausChannel& ch);
Matrix apply_choi(const ChoiMatrix& c, const Matrix& x);

/** Kraus operators from the eigenpairs above the relative rank tolerance;
 * throws NotPsdError when C has an eigenvalue below -kPsdTol * ||C||. */
KrausChannel kraus_from_choi(const ChoiMatrix& c);

/** Number of eigenvalues above kRankTol * (largest eigenvalue). */
std::size_t numerical_rank(const Matrix& psd);

struct PptDecision {
  bool accepted = false;
  double min_eigenvalue = 0.0;  // of the partial transpose
  CVector witness;              // eigenvector of that eigenvalue
};

/** Positive-partial-transpose test, exact for 2 (x) 2 Choi matrices. */
PptDecision ppt_test(const ChoiMatrix& c, double tol = kPsdTol);

/** EBT decision for qubit channels via the PPT criterion. Throws
 * DimensionError unless dims = (2, 2). */
PptDecision is_ebt_qubit(const ChoiMatrix& c);

/**
 * Choi matrix of X -> sum_k p_k U_k^dagger X U_k.
 * Throws std::invalid_argument for non-positive weights or members that are
 * not unitary within kTpTol.
 */
ChoiMatrix random_unitary_choi(std::span<const double> weights,
                               std::span<const Matrix> unitaries);

/** Choi matrix of the single conjugation X -> U X U^dagger. */
ChoiMatrix unitary_choi(const Matrix& u);

/** Holevo form of a channel whose Kraus operators all have rank one.
 * Throws std::invalid_argument naming the first operator of rank >= 2. */
HolevoEnsemble holevo_from_rank1(const KrausChannel& ch);

/** Second singular value relative to the first (0 for rank <= 1). */
double rank_one_defect(const Matrix& op);

/** Converts between this library's output (x) input Choi ordering and the
 * block form [[Phi(E_ij)]] = sum_ij E_ij (x) Phi(E_ij). */
Matrix to_block_choi(const ChoiMatrix& c);
ChoiMatrix from_block_choi(const Matrix& block, std::size_t in_dim,
                           std::size_t out_dim);

}  // namespace qci
