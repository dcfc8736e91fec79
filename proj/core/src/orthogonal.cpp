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

#include "qci/orthogonal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qci/linalg.hpp"

namespace qci {

OrthogonalFamily validate_family(std::vector<Matrix> members) {
  if (members.empty()) {
    throw std::invalid_argument("validate_family: empty family");
  }
  const std::size_t n = members.front().rows();
  std::vector<double> norms2(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const Matrix& m = members[i];
    require_square(m, "validate_family");
    if (m.rows() != n) {
      throw DimensionError("validate_family: member " + std::to_string(i) +
                           " has size " + shape_string(m));
    }
    if (!is_hermitian(m)) {
      throw FamilyError("validate_family: member " + std::to_string(i) +
                            " is not Hermitian",
                        i, std::nullopt, hermiticity_defect(m));
    }
    const EigenSystem es = eigh(m);
    const double top = std::max(std::abs(es.values.front()),
                                std::abs(es.values.back()));
    if (top == 0.0) {
      throw FamilyError("validate_family: member " + std::to_string(i) +
                            " is zero",
                        i, std::nullopt, 0.0);
    }
    if (es.values.front() < -kPsdTol * std::max(1.0, top)) {
      throw FamilyError("validate_family: member " + std::to_string(i) +
                            " is not positive semi-definite",
                        i, std::nullopt, es.values.front());
    }
    norms2[i] = hs_inner(m, m).real();
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const double ip = std::abs(hs_inner(members[i], members[j]));
      if (ip > kOrthTol * std::sqrt(norms2[i] * norms2[j])) {
        throw FamilyError("validate_family: members " + std::to_string(i) +
                              " and " + std::to_string(j) +
                              " are not orthogonal (inner product " +
                              std::to_string(ip) + ")",
                          i, j, ip);
      }
    }
  }
  OrthogonalFamily fam;
  fam.members_ = std::move(members);
  return fam;
}

bool TransportPlan::row_stochastic(double tol) const {
  for (std::size_t p = 0; p < n; ++p) {
    double row = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
      if ((*this)(p, q) < 0.0) return false;
      row += (*this)(p, q);
    }
    if (std::abs(row - 1.0) > tol) return false;
  }
  return true;
}

std::vector<double> TransportPlan::push_forward(std::span<const double> a) const {
  if (a.size() != n) throw DimensionError("TransportPlan: length mismatch");
  std::vector<double> out(m, 0.0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < m; ++q) out[q] += a[p] * (*this)(p, q);
  return out;
}

TransportPlan transport_plan(std::span<const double> a,
                             std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("transport_plan: empty spectrum");
  }
  for (double x : a)
    if (x < 0.0) throw std::invalid_argument("transport_plan: negative entry in a");
  for (double x : b)
    if (x < 0.0) throw std::invalid_argument("transport_plan: negative entry in b");
  const double sa = std::accumulate(a.begin(), a.end(), 0.0);
  const double sb = std::accumulate(b.begin(), b.end(), 0.0);
  if (sa <= 0.0) throw std::invalid_argument("transport_plan: zero total mass");
  if (std::abs(sa - sb) > kTraceTol * std::max(1.0, sa)) {
    throw std::invalid_argument("transport_plan: trace mismatch " +
                                std::to_string(sa) + " vs " + std::to_string(sb));
  }
  TransportPlan d;
  d.n = a.size();
  d.m = b.size();
  d.entries.resize(d.n * d.m);
  for (std::size_t p = 0; p < d.n; ++p)
    for (std::size_t q = 0; q < d.m; ++q) d.entries[p * d.m + q] = b[q] / sb;
  return d;
}

std::vector<Matrix> rank1_kraus(const Matrix& u, const Matrix& v,
                                const TransportPlan& d) {
  require_square(u, "rank1_kraus");
  require_square(v, "rank1_kraus");
  if (unitarity_defect(u) > kTpTol || unitarity_defect(v) > kTpTol) {
    throw std::invalid_argument("rank1_kraus: U and V must be unitary");
  }
  if (u.rows() != d.n || v.rows() != d.m) {
    throw DimensionError("rank1_kraus: plan is " + std::to_string(d.n) + "x" +
                         std::to_string(d.m) + " but U is " + shape_string(u) +
                         " and V is " + shape_string(v));
  }
  for (double x : d.entries)
    if (x < 0.0) throw std::invalid_argument("rank1_kraus: negative plan entry");

  std::vector<Matrix> ops;
  for (std::size_t j = 0; j < d.m; ++j) {
    Matrix f(d.n, d.m);
    bool nonzero = false;
    for (std::size_t p = 0; p < d.n; ++p) {
      f(p, j) = std::sqrt(d(p, j));
      nonzero = nonzero || d(p, j) > 0.0;
    }
    if (!nonzero) continue;
    ops.push_back((u * f * v).adjoint());
  }
  return ops;
}

OrthogonalInterpolant build_interpolator(const OrthogonalFamily& a,
                                         std::span<const Matrix> b) {
  if (b.size() != a.size()) {
    throw std::invalid_argument("build_interpolator: " +
                                std::to_string(a.size()) + " inputs but " +
                                std::to_string(b.size()) + " outputs");
  }
  const std::size_t n = a.dim();
  std::vector<Matrix> ops;
  Matrix choi(n * n, n * n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Matrix& ai = a.members()[i];
    const Matrix& bi = b[i];
    if (!bi.is_square() || bi.rows() != n) {
      throw DimensionError("build_interpolator: output " + std::to_string(i) +
                           " is " + shape_string(bi));
    }
    require_hermitian(bi, "build_interpolator");
    const EigenSystem ea = eigh(ai);
    const EigenSystem eb = eigh(bi);
    const double top_b = std::max(1.0, std::abs(eb.values.back()));
    if (eb.values.front() < -kPsdTol * top_b) {
      throw NotPsdError("build_interpolator: output " + std::to_string(i) +
                        " is not positive semi-definite");
    }
    const double tra = ai.trace().real(), trb = bi.trace().real();
    if (std::abs(tra - trb) > kTraceTol * std::max(1.0, std::abs(tra))) {
      throw std::invalid_argument(
          "build_interpolator: tr A_" + std::to_string(i) + " = " +
          std::to_string(tra) + " differs from tr B_" + std::to_string(i) +
          " = " + std::to_string(trb));
    }
    std::vector<double> spec_a(ea.values), spec_b(eb.values);
    for (auto& x : spec_a) x = std::max(x, 0.0);
    for (auto& x : spec_b) x = std::max(x, 0.0);
    // Rescale b onto the exact trace of a so the plan is row-stochastic.
    const double sa = std::accumulate(spec_a.begin(), spec_a.end(), 0.0);
    const double sb = std::accumulate(spec_b.begin(), spec_b.end(), 0.0);
    if (sb > 0.0)
      for (auto& x : spec_b) x *= sa / sb;

    // A_i = W diag(a) W^dagger, B_i = V^dagger diag(b) V.
    const TransportPlan plan = transport_plan(spec_a, spec_b);
    const Matrix& w = ea.vectors;
    const Matrix v = eb.vectors.adjoint();
    const std::vector<Matrix> transport = rank1_kraus(w, v, plan);

    // phi_i = (transport channel) o P_{A_i}; P_{A_i} keeps only
    // <A_i, X> / <A_i, A_i> A_i, so the composite acts as
    // X -> sum_p a_p/<A_i,A_i> <w_p|X|w_p> * sum_j K_j A_i K_j^dagger.
    const double norm2 = hs_inner(ai, ai).real();
    for (const Matrix& k : transport) {
      const SingularSystem sk = svd(k);
      const CVector x = column(sk.u, 0);
      const CVector y = column(sk.v, 0);
      // K A_i K^dagger = sigma^2 <y|A_i|y> |x><x|
      const double gain = sk.values[0] * sk.values[0] * dot(y, ai * y).real();
      if (gain <= 0.0) continue;
      for (std::size_t p = 0; p < n; ++p) {
        if (spec_a[p] <= 0.0) continue;
        const double scale = std::sqrt(spec_a[p] * gain / norm2);
        ops.push_back(outer(x, column(w, p)) * scale);
      }
    }
    choi += tensor_product(bi, ai.transpose()) / norm2;
  }
  if (ops.empty()) ops.push_back(Matrix(n, n));
  OrthogonalInterpolant out{KrausChannel(std::move(ops)),
                            ChoiMatrix(std::move(choi), {n, n}), true};
  for (const auto& op : out.channel.ops())
    out.all_rank_one = out.all_rank_one && rank_one_defect(op) <= 1e-10;
  return out;
}

EbtCertificate certify_ebt_on_span(const OrthogonalFamily& a,
                                   const KrausChannel& ch) {
  const std::size_t n = a.dim();
  // Orthogonal family: the projection of I is sum_i tr(A_i)/<A_i,A_i> A_i.
  Matrix proj(n, n);
  for (const auto& ai : a.members())
    proj += ai * (ai.trace().real() / hs_inner(ai, ai).real());
  EbtCertificate cert;
  cert.span_residual = frobenius_norm(Matrix::identity(n) - proj);
  cert.identity_in_span = cert.span_residual <= kSpanTol * std::sqrt(double(n));
  cert.tp_defect = ch.tp_defect();
  cert.rank_one = std::all_of(ch.ops().begin(), ch.ops().end(),
                              [](const Matrix& op) {
                                return rank_one_defect(op) <= 1e-10;
                              });
  cert.ebt = cert.identity_in_span && cert.tp_defect <= kTpTol && cert.rank_one;
  return cert;
}

}  // namespace qci
