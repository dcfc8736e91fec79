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

#include "qci/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qci {

KrausChannel::KrausChannel(std::vector<Matrix> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) {
    throw std::invalid_argument("KrausChannel: operator list is empty");
  }
  out_dim_ = ops_.front().rows();
  in_dim_ = ops_.front().cols();
  for (const auto& op : ops_) {
    if (op.rows() != out_dim_ || op.cols() != in_dim_) {
      throw DimensionError("KrausChannel: operator " + shape_string(op) +
                           " differs from " + shape_string(ops_.front()));
    }
  }
}

double KrausChannel::tp_defect() const {
  Matrix sum(in_dim_, in_dim_);
  for (const auto& op : ops_) sum += op.adjoint() * op;
  sum -= Matrix::identity(in_dim_);
  return operator_norm(sum.hermitian_part());
}

ChoiMatrix::ChoiMatrix(Matrix m, BipartiteDims d)
    : matrix(std::move(m)), dims(d) {
  require_dims(matrix, dims, "ChoiMatrix");
}

double ChoiMatrix::tp_defect() const {
  Matrix r = partial_trace(matrix, Factor::first, dims) -
             Matrix::identity(dims.d2);
  return operator_norm(r.hermitian_part());
}

bool ChoiMatrix::completely_positive(double tol) const {
  return is_hermitian(matrix) && is_psd(matrix, tol);
}

Matrix HolevoEnsemble::apply(const Matrix& x) const {
  if (pairs.empty()) throw std::invalid_argument("HolevoEnsemble: empty");
  Matrix out(pairs.front().state.rows(), pairs.front().state.cols());
  for (const auto& pr : pairs) {
    require_same_shape(pr.effect, x, "HolevoEnsemble::apply");
    // tr[F X] for general X
    Complex t = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) t += pr.effect(i, j) * x(j, i);
    out += pr.state * t;
  }
  return out;
}

double HolevoEnsemble::effect_defect() const {
  if (pairs.empty()) return 1.0;
  const std::size_t n = pairs.front().effect.rows();
  Matrix sum(n, n);
  for (const auto& pr : pairs) sum += pr.effect;
  sum -= Matrix::identity(n);
  return operator_norm(sum.hermitian_part());
}

Matrix apply_kraus(const KrausChannel& ch, const Matrix& x) {
  if (!x.is_square() || x.rows() != ch.in_dim()) {
    throw DimensionError("apply_kraus: input " + shape_string(x) +
                         " does not match channel input dimension " +
                         std::to_string(ch.in_dim()));
  }
  Matrix out(ch.out_dim(), ch.out_dim());
  for (const auto& v : ch.ops()) out += v * x * v.adjoint();
  return out;
}

ChoiMatrix choi_from_kraus(const KrausChannel& ch) {
  const std::size_t n = ch.in_dim() * ch.out_dim();
  Matrix c(n, n);
  for (const auto& v : ch.ops()) c += projector(vectorize(v));
  return ChoiMatrix(std::move(c), {ch.out_dim(), ch.in_dim()});
}

Matrix apply_choi(const ChoiMatrix& c, const Matrix& x) {
  const std::size_t din = c.in_dim(), dout = c.out_dim();
  if (!x.is_square() || x.rows() != din) {
    throw DimensionError("apply_choi: input " + shape_string(x) +
                         " does not match Choi input dimension " +
                         std::to_string(din));
  }
  // C[(a,j),(b,k)] = Phi(E_jk)_ab
  Matrix out(dout, dout);
  for (std::size_t a = 0; a < dout; ++a)
    for (std::size_t b = 0; b < dout; ++b) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < din; ++j)
        for (std::size_t k = 0; k < din; ++k)
          acc += c.matrix(a * din + j, b * din + k) * x(j, k);
      out(a, b) = acc;
    }
  return out;
}

std::size_t numerical_rank(const Matrix& psd) {
  const EigenSystem es = eigh(psd);
  const double top = es.values.back();
  if (top <= 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(es.values.begin(), es.values.end(),
                    [&](double l) { return l > kRankTol * top; }));
}

KrausChannel kraus_from_choi(const ChoiMatrix& c) {
  const EigenSystem es = eigh(c.matrix);
  const double top = std::max(std::abs(es.values.back()),
                              std::abs(es.values.front()));
  if (es.values.front() < -kPsdTol * std::max(1.0, top)) {
    throw NotPsdError("kraus_from_choi: Choi matrix has eigenvalue " +
                      std::to_string(es.values.front()));
  }
  std::vector<Matrix> ops;
  const std::size_t n = es.values.size();
  for (std::size_t k = n; k-- > 0;) {
    const double l = es.values[k];
    if (l <= kRankTol * es.values.back() || l <= 0.0) continue;
    CVector v = column(es.vectors, k);
    for (auto& z : v) z *= std::sqrt(l);
    ops.push_back(unvectorize(v, c.out_dim(), c.in_dim()));
  }
  if (ops.empty()) ops.push_back(Matrix(c.out_dim(), c.in_dim()));
  return KrausChannel(std::move(ops));
}

PptDecision ppt_test(const ChoiMatrix& c, double tol) {
  const Matrix pt = partial_transpose(c.matrix, Factor::second, c.dims);
  const EigenSystem es = eigh(pt);
  PptDecision d;
  d.min_eigenvalue = es.values.front();
  const double scale = std::max({1.0, std::abs(es.values.front()),
                                 std::abs(es.values.back())});
  d.accepted = d.min_eigenvalue >= -tol * scale;
  if (!d.accepted) d.witness = column(es.vectors, 0);
  return d;
}

PptDecision is_ebt_qubit(const ChoiMatrix& c) {
  if (c.dims.d1 != 2 || c.dims.d2 != 2) {
    throw DimensionError("is_ebt_qubit: expected dims (2, 2), got (" +
                         std::to_string(c.dims.d1) + ", " +
                         std::to_string(c.dims.d2) + ")");
  }
  return ppt_test(c);
}

ChoiMatrix unitary_choi(const Matrix& u) {
  require_square(u, "unitary_choi");
  return ChoiMatrix(projector(vectorize(u)), {u.rows(), u.cols()});
}

ChoiMatrix random_unitary_choi(std::span<const double> weights,
                               std::span<const Matrix> unitaries) {
  if (weights.size() != unitaries.size() || weights.empty()) {
    throw std::invalid_argument(
        "random_unitary_choi: need one positive weight per unitary");
  }
  const std::size_t d = unitaries.front().rows();
  Matrix c(d * d, d * d);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] > 0.0)) {
      throw std::invalid_argument("random_unitary_choi: weight " +
                                  std::to_string(k) + " is not positive");
    }
    require_square(unitaries[k], "random_unitary_choi");
    if (unitaries[k].rows() != d) {
      throw DimensionError("random_unitary_choi: mixed dimensions");
    }
    if (unitarity_defect(unitaries[k]) > kTpTol) {
      throw std::invalid_argument("random_unitary_choi: member " +
                                  std::to_string(k) + " is not unitary");
    }
    c += projector(vectorize(unitaries[k].adjoint())) * weights[k];
  }
  return ChoiMatrix(std::move(c), {d, d});
}

double rank_one_defect(const Matrix& op) {
  const auto s = singular_values(op);
  if (s.size() < 2 || s[0] == 0.0) return 0.0;
  return s[1] / s[0];
}

HolevoEnsemble holevo_from_rank1(const KrausChannel& ch) {
  HolevoEnsemble ens;
  for (std::size_t l = 0; l < ch.ops().size(); ++l) {
    const SingularSystem s = svd(ch.ops()[l]);
    if (s.values.empty() || s.values[0] == 0.0) continue;
    if (s.values.size() > 1 && s.values[1] > kRankTol * s.values[0]) {
      throw std::invalid_argument("holevo_from_rank1: Kraus operator " +
                                  std::to_string(l) + " has rank >= 2");
    }
    const CVector x = column(s.u, 0);
    const CVector y = column(s.v, 0);
    const double sigma2 = s.values[0] * s.values[0];
    ens.pairs.push_back({projector(x), projector(y) * sigma2});
  }
  if (ens.pairs.empty()) {
    throw std::invalid_argument("holevo_from_rank1: channel is zero");
  }
  return ens;
}

Matrix to_block_choi(const ChoiMatrix& c) {
  return swap_factors(c.matrix, c.dims);
}

ChoiMatrix from_block_choi(const Matrix& block, std::size_t in_dim,
                           std::size_t out_dim) {
  return ChoiMatrix(swap_factors(block, {in_dim, out_dim}), {out_dim, in_dim});
}

}  // namespace qci
