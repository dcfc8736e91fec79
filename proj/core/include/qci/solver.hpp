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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qci/channel.hpp"
#include "qci/cone.hpp"
#include "qci/engine.hpp"
#include "qci/program.hpp"

namespace qci {

inline constexpr double kFeasTol = 1e-6;

struct SolveParams {
  std::size_t max_iter = 200;
  double feas_tol = kFeasTol;
  StepRule step_rule = StepRule::fully_corrective;
  std::uint64_t seed = 0;
  /** Run the dual program for a lower bound when the value is above
   * feas_tol and the trace bound is not already decisive. */
  bool dual_bound = true;

  void validate() const;
};

enum class Verdict {
  yes,      // delta <= feas_tol with a constructive certificate
  no,       // a certified lower bound exceeds feas_tol
  unknown,  // neither
};

std::string to_string(Verdict v);

struct SolveReport {
  double delta = 0.0;          // objective in the program's TP mode
  double interpolation = 0.0;  // sum_i ||r_i||_tr
  double lambda = 0.0;         // ||tr_1 C - I||_op
  Matrix c;
  BipartiteDims dims;
  std::vector<Atom> atoms;
  std::vector<SlackPair> residuals;
  std::vector<double> history;  // nonincreasing
  std::size_t iterations = 0;
  bool converged = false;
  Verdict verdict = Verdict::unknown;
  double lower_bound = 0.0;  // best certified lower bound on delta
  std::optional<KrausChannel> channel;
  std::optional<HolevoEnsemble> ensemble;  // SEP cone, when solved
};

/**
 * Minimises the reduced objective over {C in cone, tr C <= trace_cap}.
 * If cone.dims is unset it is taken from the problem.
 */
SolveReport solve(ProgramSpec spec, const SolveParams& params = {});

/** Holevo form of a decomposition into product atoms (output (x) input):
 * R_k = a a^dagger, F_k = w (b b^dagger)^T. */
HolevoEnsemble ensemble_from_products(std::span<const Atom> atoms);

struct LpResult {
  bool feasible = false;
  std::size_t n = 0;  // rows of D
  std::size_t m = 0;  // columns of D
  std::vector<double> d;  // row-major n x m when feasible
  /** Farkas vector y over the equality rows with A^T y <= 0, b^T y > 0
   * when infeasible. Rows are ordered (pair i, column q) then row sums. */
  std::vector<double> certificate;
  double phase_one = 0.0;  // optimal sum of artificials
};

/**
 * Feasibility of a^i D = b^i (all i) over nonnegative n x m matrices D, with
 * unit row sums when `stochastic`. Dense phase-one simplex with Bland's rule.
 */
LpResult lp_oracle(const std::vector<std::vector<double>>& a_rows,
                   const std::vector<std::vector<double>>& b_rows,
                   bool stochastic = true);

struct PptOracleParams {
  TpMode tp_mode = TpMode::exact;
  double w = 0.0;  // <= 0 selects default_w
  std::size_t iterations = 4000;
  std::uint64_t seed = 0;
};

struct PptOracleResult {
  double delta = 0.0;
  Matrix c;
  double min_eigenvalue = 0.0;
  double min_pt_eigenvalue = 0.0;
};

/**
 * Minimises the same reduced objective over {C >= 0, PT(C) >= 0} for
 * qubit-to-qubit problems, where PPT equals separability. The returned C is
 * exactly in the constraint set, so delta is an achieved value.
 */
PptOracleResult ppt_constrained_oracle(const InterpolationProblem& problem,
                                       const PptOracleParams& params = {});

}  // namespace qci
