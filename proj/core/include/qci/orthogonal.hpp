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

// Explicit entanglement-breaking interpolation for families of pairwise
// Hilbert-Schmidt-orthogonal positive inputs.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qci/channel.hpp"
#include "qci/matrix.hpp"

namespace qci {

inline constexpr double kOrthTol = 1e-9;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kSpanTol = 1e-9;

/** Validation failure that names the offending member(s). */
class FamilyError : public std::invalid_argument {
 public:
  FamilyError(const std::string& what, std::size_t first,
              std::optional<std::size_t> second, double value)
      : std::invalid_argument(what),
        first_(first),
        second_(second),
        value_(value) {}

  std::size_t first() const { return first_; }
  std::optional<std::size_t> second() const { return second_; }
  /** The offending inner product or eigenvalue. */
  double value() const { return value_; }

 private:
  std::size_t first_;
  std::optional<std::size_t> second_;
  double value_;
};

/** Nonzero PSD matrices of one size, pairwise orthogonal under tr[A^dagger B]. */
class OrthogonalFamily {
 public:
  const std::vector<Matrix>& members() const { return members_; }
  std::size_t dim() const { return members_.front().rows(); }
  std::size_t size() const { return members_.size(); }

 private:
  friend OrthogonalFamily validate_family(std::vector<Matrix> members);
  std::vector<Matrix> members_;
};

/** Throws FamilyError for a non-PSD/zero member or a non-orthogonal pair
 * (indices are zero-based), DimensionError for mixed sizes. */
OrthogonalFamily validate_family(std::vector<Matrix> members);

/** Nonnegative n x m matrix D; row-stochastic when every row sums to one. */
struct TransportPlan {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> entries;  // row-major

  double operator()(std::size_t p, std::size_t q) const {
    return entries[p * m + q];
  }
  bool row_stochastic(double tol = 1e-12) const;
  /** a * D */
  std::vector<double> push_forward(std::span<const double> a) const;
};

/**
 * Rank-one plan D_pq = b_q / sum(a) with a * D = b.
 * Throws std::invalid_argument on negative entries, zero total mass, or
 * sum(a) != sum(b) beyond kTraceTol (relative).
 */
TransportPlan transport_plan(std::span<const double> a,
                             std::span<const double> b);

/**
 * Kraus operators (U F_j V)^dagger, F_j the matrix whose column j is
 * (sqrt(D_1j), ..., sqrt(D_nj)). Conjugation by them sends U diag(a) U^dagger
 * to V^dagger diag(a D) V. Columns of D that vanish are skipped.
 */
std::vector<Matrix> rank1_kraus(const Matrix& u, const Matrix& v,
                                const TransportPlan& d);

struct OrthogonalInterpolant {
  KrausChannel channel;
  /** C = sum_i B_i (x) A_i^T / <A_i, A_i>. */
  ChoiMatrix choi;
  bool all_rank_one = false;
};

/**
 * phi(X) = sum_i <A_i, X> / <A_i, A_i> * B_i, realised with rank-one Kraus
 * operators. Requires |A| = |B|, B_i PSD, tr A_i = tr B_i.
 */
OrthogonalInterpolant build_interpolator(const OrthogonalFamily& a,
                                         std::span<const Matrix> b);

struct EbtCertificate {
  bool identity_in_span = false;
  double span_residual = 0.0;  // ||I - P_span(I)||_F
  double tp_defect = 0.0;      // ||sum V^dagger V - I||_op
  bool rank_one = false;
  /** Identity in span, trace preserving and rank-one Kraus. */
  bool ebt = false;
};

EbtCertificate certify_ebt_on_span(const OrthogonalFamily& a,
                                   const KrausChannel& ch);

}  // namespace qci
