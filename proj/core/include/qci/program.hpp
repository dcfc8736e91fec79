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

// Interpolation programs over a cone of Choi matrices.
//
// For a fixed C the slack variables of the program are eliminated: the best
// P_i, Q_i are the positive and negative parts of Phi_C(X_i) - Y_i, and the
// best lambda is ||tr_1 C - I||_op. What remains is a convex function of C.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qci/channel.hpp"
#include "qci/cone.hpp"
#include "qci/engine.hpp"
#include "qci/matrix.hpp"

namespace qci {

struct InterpolationProblem {
  std::vector<Matrix> x;  // inputs, d x d
  std::vector<Matrix> y;  // targets, d' x d'

  std::size_t count() const { return x.size(); }
  std::size_t in_dim() const { return x.empty() ? 0 : x.front().rows(); }
  std::size_t out_dim() const { return y.empty() ? 0 : y.front().rows(); }
  /** Choi dimensions, output (x) input. */
  BipartiteDims choi_dims() const { return {out_dim(), in_dim()}; }

  /** Throws DimensionError / NotHermitianError on a malformed problem. */
  void validate() const;
};

enum class TpMode {
  penalty,  // w * lambda + sum ||r_i||_tr
  exact,    // sum ||r_i||_tr subject to tr_1 C = I
  none,     // sum ||r_i||_tr over completely positive maps only
};

std::string to_string(TpMode mode);
TpMode tp_mode_from_string(const std::string& s);

/** 10 * (d + sum_i ||Y_i||_tr). */
double default_w(const InterpolationProblem& problem);
/** 2 * d. */
double default_trace_cap(const InterpolationProblem& problem);

struct ProgramSpec {
  InterpolationProblem problem;
  ConeSpec cone;  // dims are taken from the problem
  TpMode tp_mode = TpMode::penalty;
  double w = 0.0;          // <= 0 selects default_w
  double trace_cap = 0.0;  // <= 0 selects default_trace_cap

  double effective_w() const;
  double effective_trace_cap() const;
  /** Validates problem and cone and checks w > 0, trace_cap > d. */
  void validate() const;
};

struct SlackPair {
  Matrix p;  // positive part of the residual
  Matrix q;  // negative part
};

struct ObjectiveValue {
  double value = 0.0;          // as defined by the TP mode
  double interpolation = 0.0;  // sum_i ||r_i||_tr
  double lambda = 0.0;         // ||tr_1 C - I||_op
  std::vector<Matrix> residuals;
  std::vector<SlackPair> slacks;
};

ObjectiveValue objective(const Matrix& c, const ProgramSpec& spec);

/** tr_2[C (I (x) X^T)] without building a ChoiMatrix. */
Matrix choi_action(const Matrix& c, const BipartiteDims& dims, const Matrix& x);

/**
 * The program as the engine sees it. In exact mode the engine minimises the
 * penalty form; TP is enforced on the result afterwards.
 */
ConeModel program_model(const ProgramSpec& spec);

/** sum_i |tr Y_i - tr X_i|, a lower bound on the value of any TP map. */
double trace_mismatch_bound(const InterpolationProblem& problem);

struct DualParams {
  std::size_t iterations_per_stage = 1500;
};

struct DualResult {
  /** Certified upper bound on Gamma: value of a feasible (H_i). */
  double gamma = 0.0;
  std::vector<Matrix> h;
  /** False when no strictly feasible point was available to restore
   * feasibility; gamma is then the penalised value and not a bound. */
  bool certified = false;
  double feasibility_defect = 0.0;  // -lambda_min(sum X_i (x) H_i)
};

/**
 * Gamma = inf sum_i tr[Y_i^T H_i] subject to sum_i X_i (x) H_i >= 0 and
 * ||H_i||_op <= 1. Accelerated projected gradient on a penalised, smoothed
 * form with eigenvalue clipping to [-1, 1], then a convex step towards a
 * strictly feasible point. -gamma is a lower bound on the CP value.
 */
DualResult gamma_dual(const InterpolationProblem& problem,
                      const DualParams& params = {});

struct WitnessResult {
  bool found = false;
  Matrix witness;           // A
  double value = 0.0;       // tr[A C]
  double pair_minimum = 0.0;  // min over searched product projections
  ProductPayload pair;      // minimising (R, S) pair as vectors
};

/**
 * Searches rank-one projection pairs for min tr[A (R (x) S)]. A negative
 * value is a violated pair: A is then not an entanglement witness.
 */
WitnessResult projection_pair_search(const Matrix& a, const BipartiteDims& dims,
                                     std::size_t restarts, std::uint64_t seed);

/**
 * Witness for an entangled Choi matrix from its partial transpose:
 * A = PT(|w><w|) for the bottom eigenvector w of PT(C). found is true when
 * tr[A C] < 0 and the pair search finds no violated projection pair.
 */
WitnessResult entanglement_witness(const ChoiMatrix& c, std::size_t restarts,
                                   std::uint64_t seed);

}  // namespace qci
