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

// Shared fixtures and independent oracles for the test binaries.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "qci/channel.hpp"
#include "qci/linalg.hpp"
#include "qci/matrix.hpp"
#include "qci/program.hpp"
#include "qci/random.hpp"

namespace qci::test {

using namespace std::complex_literals;

inline Matrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline Matrix pauli_y() { return {{0.0, -1.0i}, {1.0i, 0.0}}; }
inline Matrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

inline double max_diff(const Matrix& a, const Matrix& b) { return max_abs(a - b); }

// Eigen copies; used only as a reference implementation.
inline Eigen::MatrixXcd to_eigen(const Matrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline std::vector<double> eigen_spectrum(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(m));
  const auto& v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

inline double eigen_min_eigenvalue(const Matrix& m) { return eigen_spectrum(m).front(); }

inline double eigen_trace_norm(const Matrix& m) {
  double s = 0.0;
  for (double x : eigen_spectrum(m)) s += std::abs(x);
  return s;
}

// Naive index-loop tensor product, independent of the library's kernel.
inline Matrix naive_kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          out(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return out;
}

// sum_ij E_ij (x) E_ij, the unnormalised maximally entangled projector.
inline Matrix identity_choi(std::size_t d) {
  Matrix c(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) c(i * d + i, j * d + j) = 1.0;
  return c;
}

// Qubit identity-map data: X runs over the Hermitian basis, Y = X.
inline InterpolationProblem identity_data(std::size_t d = 2) {
  InterpolationProblem p;
  p.x = hermitian_basis(d);
  p.y = p.x;
  return p;
}

// Random measure-and-prepare channel rho -> sum_k R_k tr[F_k rho] with a
// complete POVM {F_k}. Built from an independent route: F_k = S^{-1/2} G_k
// S^{-1/2} for random PSD G_k with S = sum G_k.
inline HolevoEnsemble random_measure_prepare(Rng& rng, std::size_t d,
                                             std::size_t outcomes) {
  if (outcomes == 1) {
    // Replacement channel; a single rank-one G cannot be normalized to I.
    HolevoEnsemble e;
    e.pairs.push_back({random_state(rng, d, 1), Matrix::identity(d)});
    return e;
  }
  std::vector<Matrix> g;
  Matrix s = Matrix::zeros(d, d);
  for (std::size_t k = 0; k < outcomes; ++k) {
    g.push_back(random_state(rng, d, 1));
    s += g.back();
  }
  Matrix s_inv_half = spectral_apply(s, [](double x) { return 1.0 / std::sqrt(x); });
  HolevoEnsemble e;
  for (std::size_t k = 0; k < outcomes; ++k) {
    Matrix f = s_inv_half * g[k] * s_inv_half;
    e.pairs.push_back({random_state(rng, d, 1), f.hermitian_part()});
  }
  return e;
}

// Measure-and-prepare data: inputs are a random spanning set of states.
inline InterpolationProblem measure_prepare_data(Rng& rng, std::size_t d,
                                                 std::size_t count,
                                                 std::size_t outcomes) {
  HolevoEnsemble e = random_measure_prepare(rng, d, outcomes);
  InterpolationProblem p;
  for (std::size_t i = 0; i < count; ++i) {
    p.x.push_back(random_state(rng, d));
    p.y.push_back(e.apply(p.x.back()));
  }
  return p;
}

}  // namespace qci::test
