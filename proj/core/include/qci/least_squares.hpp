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

// Small dense real solvers used by the cone engine: a Cholesky solve,
// Levenberg-Marquardt with minimum-norm steps, and L-BFGS. Problems are
// described by callbacks over an opaque state that is moved by a retraction,
// so manifold-valued parameters (unitaries) fit without special cases.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace qci {

using RealVector = std::vector<double>;

/** Dense row-major real matrix, just enough for the normal equations. */
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
};

double dot(const RealVector& a, const RealVector& b);
double norm2(const RealVector& a);

/**
 * Solves A x = b for symmetric positive definite A in place of b.
 * Returns false if a pivot is not positive.
 */
bool cholesky_solve(RealMatrix a, RealVector& b);

/** J J^T for a rows x cols Jacobian. */
RealMatrix gram_rows(const RealMatrix& j);

struct LmOptions {
  std::size_t max_iter = 100;
  double tol = 1e-13;  // stop when ||r|| <= tol
  double stall = 1e-3; // stop when ||r|| shrinks by less than this ratio
                       // over stall_window accepted steps
  std::size_t stall_window = 8;
};

struct LmResult {
  double residual = 0.0;  // final ||r||
  std::size_t iterations = 0;
};

/**
 * Levenberg-Marquardt for underdetermined systems: the step solves
 * min ||delta||^2 subject to the damped linearisation,
 *   delta = -J^T (J J^T + mu I)^{-1} r.
 * `residual(x)` returns r, `jacobian(x)` returns J (rows = |r|),
 * `retract(x, delta)` returns the moved state.
 */
template <class State>
LmResult levenberg_marquardt(
    State& x, const std::function<RealVector(const State&)>& residual,
    const std::function<RealMatrix(const State&)>& jacobian,
    const std::function<State(const State&, const RealVector&)>& retract,
    const LmOptions& opt = {}) {
  RealVector r = residual(x);
  double rn = norm2(r);
  LmResult out{rn, 0};
  if (!std::isfinite(rn)) return out;
  double mu = -1.0;
  double nu = 2.0;
  std::vector<double> history{rn};
  for (std::size_t it = 0; it < opt.max_iter && rn > opt.tol; ++it) {
    out.iterations = it + 1;
    const RealMatrix j = jacobian(x);
    RealMatrix jj = gram_rows(j);
    if (mu < 0.0) {
      double diag = 0.0;
      for (std::size_t i = 0; i < jj.rows; ++i) diag = std::max(diag, jj(i, i));
      mu = 1e-6 * std::max(diag, 1e-300);
    }
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      RealMatrix damped = jj;
      for (std::size_t i = 0; i < damped.rows; ++i) damped(i, i) += mu;
      RealVector z = r;
      if (!cholesky_solve(damped, z)) {
        mu *= nu;
        nu *= 2.0;
        continue;
      }
      RealVector delta(j.cols, 0.0);
      for (std::size_t i = 0; i < j.rows; ++i)
        for (std::size_t k = 0; k < j.cols; ++k) delta[k] -= j(i, k) * z[i];
      State trial = retract(x, delta);
      RealVector rt = residual(trial);
      const double rtn = norm2(rt);
      // Predicted decrease of the linear model, J delta = -J J^T z.
      RealVector jd(j.rows, 0.0);
      for (std::size_t i = 0; i < j.rows; ++i)
        for (std::size_t k = 0; k < j.cols; ++k) jd[i] += j(i, k) * delta[k];
      double pred = 0.0;
      for (std::size_t i = 0; i < j.rows; ++i) {
        const double lin = r[i] + jd[i];
        pred += r[i] * r[i] - lin * lin;
      }
      const double actual = rn * rn - rtn * rtn;
      if (std::isfinite(rtn) && rtn < rn) {
        x = std::move(trial);
        r = std::move(rt);
        rn = rtn;
        accepted = true;
        const double rho = pred > 0.0 ? actual / pred : 0.0;
        const double t = 2.0 * rho - 1.0;
        mu *= std::max(1.0 / 3.0, 1.0 - t * t * t);
        nu = 2.0;
      } else {
        mu *= nu;
        nu *= 2.0;
      }
    }
    if (!accepted) break;
    history.push_back(rn);
    if (history.size() > opt.stall_window) {
      const double old = history[history.size() - 1 - opt.stall_window];
      if (rn > (1.0 - opt.stall) * old) break;
    }
  }
  out.residual = rn;
  return out;
}

struct LbfgsOptions {
  std::size_t max_iter = 50;
  std::size_t memory = 8;
  double grad_tol = 1e-12;
};

/**
 * L-BFGS with Armijo backtracking. `f(x, grad)` returns the value and fills
 * the gradient (infinite values reject a trial point). Curvature pairs are
 * kept in the local coordinates of the retraction, which is exact for flat
 * parameters and a first-order transport for the unitary charts.
 */
template <class State>
double lbfgs(State& x,
             const std::function<double(const State&, RealVector&)>& f,
             const std::function<State(const State&, const RealVector&)>& retract,
             const LbfgsOptions& opt = {}) {
  RealVector g;
  double fx = f(x, g);
  if (!std::isfinite(fx)) return fx;
  std::vector<RealVector> ss, ys;
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    if (norm2(g) <= opt.grad_tol) break;
    // Two-loop recursion.
    RealVector q = g;
    std::vector<double> alpha(ss.size());
    for (std::size_t k = ss.size(); k-- > 0;) {
      const double rho = 1.0 / dot(ys[k], ss[k]);
      alpha[k] = rho * dot(ss[k], q);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * ys[k][i];
    }
    double gamma = 1.0;
    if (!ss.empty()) gamma = dot(ss.back(), ys.back()) / dot(ys.back(), ys.back());
    for (auto& v : q) v *= gamma;
    for (std::size_t k = 0; k < ss.size(); ++k) {
      const double rho = 1.0 / dot(ys[k], ss[k]);
      const double beta = rho * dot(ys[k], q);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - beta) * ss[k][i];
    }
    RealVector dir(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) dir[i] = -q[i];
    double slope = dot(dir, g);
    if (!(slope < 0.0)) {
      // Not a descent direction: restart from steepest descent.
      ss.clear();
      ys.clear();
      for (std::size_t i = 0; i < g.size(); ++i) dir[i] = -g[i];
      slope = -dot(g, g);
      const double scale = 1.0 / std::max(1.0, norm2(g));
      for (auto& v : dir) v *= scale;
      slope *= scale;
    }
    double step = 1.0;
    bool moved = false;
    RealVector gt;
    State trial = x;
    double ft = fx;
    for (int tries = 0; tries < 40; ++tries) {
      RealVector d(dir.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = step * dir[i];
      trial = retract(x, d);
      ft = f(trial, gt);
      if (std::isfinite(ft) && ft <= fx + 1e-4 * step * slope) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    RealVector s(dir.size()), y(dir.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = step * dir[i];
      y[i] = gt[i] - g[i];
    }
    const bool improved = ft < fx;
    x = std::move(trial);
    const double prev = fx;
    fx = ft;
    g = std::move(gt);
    if (dot(s, y) > 1e-12 * norm2(s) * norm2(y)) {
      ss.push_back(std::move(s));
      ys.push_back(std::move(y));
      if (ss.size() > opt.memory) {
        ss.erase(ss.begin());
        ys.erase(ys.begin());
      }
    }
    if (!improved || prev - fx <= 1e-15 * std::max(1.0, std::abs(fx))) break;
  }
  return fx;
}

}  // namespace qci
