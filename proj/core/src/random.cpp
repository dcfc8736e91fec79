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

#include "qci/random.hpp"

#include <cmath>
#include <vector>

#include "qci/linalg.hpp"

namespace qci {

Rng make_rng(std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  for (std::uint64_t k : keys) {
    words.push_back(static_cast<std::uint32_t>(k & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

CVector random_complex_vector(Rng& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(n);
  for (auto& z : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  return v;
}

CVector random_unit_vector(Rng& rng, std::size_t n) {
  return normalized(random_complex_vector(rng, n));
}

Matrix ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols, random_complex_vector(rng, rows * cols));
}

Matrix random_hermitian(Rng& rng, std::size_t n) {
  return ginibre(rng, n, n).hermitian_part();
}

Matrix random_state(Rng& rng, std::size_t n, std::size_t rank) {
  const Matrix g = ginibre(rng, n, rank == 0 ? n : rank);
  Matrix rho = (g * g.adjoint()).hermitian_part();
  rho /= rho.trace().real();
  return rho;
}

Matrix haar_unitary(Rng& rng, std::size_t n) {
  // Gram-Schmidt on a Ginibre matrix (QR with positive diagonal).
  Matrix g = ginibre(rng, n, n);
  Matrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    CVector v = column(g, j);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        const CVector qk = column(q, k);
        const Complex proj = dot(qk, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= proj * qk[i];
      }
    set_column(q, j, normalized(v));
  }
  return reunitarize(q);
}

KrausChannel random_channel(Rng& rng, std::size_t in_dim, std::size_t out_dim,
                            std::size_t count) {
  // Isometry in_dim -> count*out_dim from the first in_dim columns of a Haar
  // unitary, cut into Kraus blocks.
  const std::size_t big = count * out_dim;
  Matrix iso;
  if (big >= in_dim) {
    const Matrix u = haar_unitary(rng, big);
    iso = Matrix(big, in_dim);
    for (std::size_t i = 0; i < big; ++i)
      for (std::size_t j = 0; j < in_dim; ++j) iso(i, j) = u(i, j);
  } else {
    throw DimensionError("random_channel: count * out_dim < in_dim");
  }
  std::vector<Matrix> ops;
  for (std::size_t k = 0; k < count; ++k) {
    Matrix op(out_dim, in_dim);
    for (std::size_t i = 0; i < out_dim; ++i)
      for (std::size_t j = 0; j < in_dim; ++j) op(i, j) = iso(k * out_dim + i, j);
    ops.push_back(std::move(op));
  }
  return KrausChannel(std::move(ops));
}

}  // namespace qci
