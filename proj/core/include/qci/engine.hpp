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

// Fully-corrective Frank-Wolfe over a trace-capped cone.
//
// Each outer iteration calls the cone's LMO on the gradient of a smoothed
// objective, re-optimises the weights of the active atoms, then refines all
// atom parameters with L-BFGS. When the objective is near zero a
// Levenberg-Marquardt polish on the linear measurements of the model tries to
// reach an exact zero, which is what a feasibility certificate needs.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qci/cone.hpp"
#include "qci/least_squares.hpp"
#include "qci/matrix.hpp"

namespace qci {

/** Convex objective over Choi matrices, as the engine sees it. */
struct ConeModel {
  /** Exact (possibly nonsmooth) value. */
  std::function<double(const Matrix&)> value;
  /** Smoothed value at parameter mu; fills the Hermitian gradient. */
  std::function<double(const Matrix&, double, Matrix&)> smoothed;
  /** Real linear measurements tr[M_m C] with targets t_m; the exact value is
   * zero iff every measurement hits its target. */
  std::vector<Matrix> measurements;
  std::vector<double> targets;
  /** Vectors the sought C annihilates. The polish asks every atom vector to
   * be orthogonal to them, which is linear where the fit itself is quadratic. */
  std::vector<CVector> kernel;
  double mu0 = 1.0;
  /** Smoothed value ignores mu (already smooth). */
  bool smooth = false;
};

enum class StepRule { fully_corrective, line_search };

struct EngineOptions {
  std::size_t max_iter = 200;
  double trace_cap = 1.0;
  double target = 0.0;      // stop once value <= target
  double polish_below = 0.0;  // attempt the least-squares polish below this
  StepRule step_rule = StepRule::fully_corrective;
  std::uint64_t seed = 0;
  std::size_t max_atoms = 50;
  std::size_t weight_steps = 200;
  std::size_t refine_steps = 30;
};

struct EngineResult {
  std::vector<Atom> atoms;
  Matrix c;
  double value = 0.0;
  std::vector<double> history;  // best value after each outer iteration
  std::size_t iterations = 0;
  bool converged = false;
};

EngineResult minimize_over_cone(const ConeModel& model, const ConeSpec& cone,
                                const EngineOptions& opt,
                                std::vector<Atom> start = {});

// Local coordinates of an atom. Weight and payload are folded into one
// unconstrained parameter vector (a scale c with weight c^2, or an
// unnormalised vector) so that every point of the chart stays in the cone.

std::size_t param_count(const Atom& atom, const ConeSpec& cone);

/** Adds d tr[G C(theta)] / d theta at theta = 0 into `out`. */
void accumulate_gradient(const Atom& atom, const ConeSpec& cone,
                         const Matrix& g, double* out);

/** Atom at local coordinates `delta`. */
Atom retract(const Atom& atom, const ConeSpec& cone, const double* delta);

/** Random payload of the cone with the given weight. */
Atom random_atom(const ConeSpec& cone, double weight, std::uint64_t seed,
                 std::uint64_t stream);

/**
 * Levenberg-Marquardt on the model's measurements starting from `atoms`,
 * padded with random atoms until the chart has at least twice as many
 * parameters as there are measurements. Returns the polished atoms and the
 * final measurement residual.
 */
std::pair<std::vector<Atom>, double> polish_atoms(std::vector<Atom> atoms,
                                                  const ConeModel& model,
                                                  const ConeSpec& cone,
                                                  double trace_cap,
                                                  std::uint64_t seed,
                                                  std::size_t max_iter = 100);

/** Euclidean projection onto {p >= 0, sum p <= cap}. */
void project_capped_simplex(std::span<double> p, double cap);

}  // namespace qci
