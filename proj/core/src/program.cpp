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

#include "qci/program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qci/least_squares.hpp"
#include "qci/linalg.hpp"

namespace qci {

void InterpolationProblem::validate() const {
  if (x.empty()) throw std::invalid_argument("problem: no input/output pairs");
  if (x.size() != y.size()) {
    throw DimensionError("problem: " + std::to_string(x.size()) + " inputs but " +
                         std::to_string(y.size()) + " outputs");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i].is_square() || x[i].rows() != in_dim() || x[i].rows() == 0) {
      throw DimensionError("problem: X_" + std::to_string(i) + " is " +
                           shape_string(x[i]));
    }
    if (!y[i].is_square() || y[i].rows() != out_dim() || y[i].rows() == 0) {
      throw DimensionError("problem: Y_" + std::to_string(i) + " is " +
                           shape_string(y[i]));
    }
    require_hermitian(x[i], "problem X_" + std::to_string(i));
    require_hermitian(y[i], "problem Y_" + std::to_string(i));
  }
}

std::string to_string(TpMode mode) {
  switch (mode) {
    case TpMode::penalty: return "penalty";
    case TpMode::exact: return "exact";
    case TpMode::none: return "none";
  }
  return "?";
}

TpMode tp_mode_from_string(const std::string& s) {
  if (s == "penalty") return TpMode::penalty;
  if (s == "exact") return TpMode::exact;
  if (s == "none") return TpMode::none;
  throw std::invalid_argument("unknown tp_mode '" + s + "' (penalty|exact|none)");
}

double default_w(const InterpolationProblem& problem) {
  double s = double(problem.in_dim());
  for (const auto& y : problem.y) s += trace_norm(y);
  return 10.0 * s;
}

double default_trace_cap(const InterpolationProblem& problem) {
  return 2.0 * double(problem.in_dim());
}

double ProgramSpec::effective_w() const {
  return w > 0.0 ? w : default_w(problem);
}

double ProgramSpec::effective_trace_cap() const {
  return trace_cap > 0.0 ? trace_cap : default_trace_cap(problem);
}

void ProgramSpec::validate() const {
  problem.validate();
  if (!(cone.dims == problem.choi_dims())) {
    throw DimensionError("program: cone dims do not match the problem");
  }
  cone.validate();
  if (!(w >= 0.0) || !std::isfinite(w)) {
    throw std::invalid_argument("program: w must be positive");
  }
  if (trace_cap != 0.0 && !(trace_cap > double(problem.in_dim()))) {
    throw std::invalid_argument("program: trace_cap must exceed d = " +
                                std::to_string(problem.in_dim()));
  }
}

Matrix choi_action(const Matrix& c, const BipartiteDims& dims, const Matrix& x) {
  const std::size_t out = dims.d1, in = dims.d2;
  Matrix y(out, out);
  for (std::size_t a = 0; a < out; ++a)
    for (std::size_t b = 0; b < out; ++b) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < in; ++j)
        for (std::size_t k = 0; k < in; ++k) s += c(a * in + j, b * in + k) * x(j, k);
      y(a, b) = s;
    }
  return y;
}

namespace {

Matrix tp_defect_matrix(const Matrix& c, const BipartiteDims& dims) {
  return partial_trace(c, Factor::first, dims) - Matrix::identity(dims.d2);
}

/** Huber-smoothed trace norm; grad = V clip(lambda / mu) V^dagger. */
double huber_trace_norm(const Matrix& r, double mu, Matrix* grad) {
  const EigenSystem es = eigh(r.hermitian_part());
  double v = 0.0;
  std::vector<double> slope(es.values.size());
  for (std::size_t k = 0; k < es.values.size(); ++k) {
    const double l = es.values[k];
    if (std::abs(l) <= mu) {
      v += l * l / (2.0 * mu);
      slope[k] = l / mu;
    } else {
      v += std::abs(l) - 0.5 * mu;
      slope[k] = l > 0.0 ? 1.0 : (l < 0.0 ? -1.0 : 0.0);
    }
  }
  if (grad) {
    std::size_t k = 0;
    *grad = spectral_apply(es, [&](double) { return slope[k++]; });
  }
  return v;
}

/** Log-sum-exp smoothing of max |lambda|. */
double softmax_operator_norm(const Matrix& t, double mu, Matrix* grad) {
  const EigenSystem es = eigh(t.hermitian_part());
  double top = 0.0;
  for (double l : es.values) top = std::max(top, std::abs(l));
  std::vector<double> slope(es.values.size(), 0.0);
  if (mu <= 0.0) {
    for (std::size_t k = 0; k < es.values.size(); ++k)
      if (std::abs(es.values[k]) == top && top > 0.0) {
        slope[k] = es.values[k] > 0.0 ? 1.0 : -1.0;
        break;
      }
    if (grad) {
      std::size_t k = 0;
      *grad = spectral_apply(es, [&](double) { return slope[k++]; });
    }
    return top;
  }
  double z = 0.0;
  for (std::size_t k = 0; k < es.values.size(); ++k) {
    const double ep = std::exp((es.values[k] - top) / mu);
    const double em = std::exp((-es.values[k] - top) / mu);
    z += ep + em;
    slope[k] = ep - em;
  }
  for (auto& s : slope) s /= z;
  if (grad) {
    std::size_t k = 0;
    *grad = spectral_apply(es, [&](double) { return slope[k++]; });
  }
  return top + mu * std::log(z);
}

}  // namespace

ObjectiveValue objective(const Matrix& c, const ProgramSpec& spec) {
  const InterpolationProblem& pb = spec.problem;
  const BipartiteDims dims = pb.choi_dims();
  require_dims(c, dims, "objective");
  ObjectiveValue out;
  for (std::size_t i = 0; i < pb.count(); ++i) {
    Matrix r = (choi_action(c, dims, pb.x[i]) - pb.y[i]).hermitian_part();
    auto [p, q] = split_positive_negative(r);
    out.interpolation += p.trace().real() + q.trace().real();
    out.residuals.push_back(std::move(r));
    out.slacks.push_back({std::move(p), std::move(q)});
  }
  out.lambda = operator_norm(tp_defect_matrix(c, dims).hermitian_part());
  out.value = out.interpolation;
  if (spec.tp_mode == TpMode::penalty) out.value += spec.effective_w() * out.lambda;
  return out;
}

ConeModel program_model(const ProgramSpec& spec) {
  const InterpolationProblem pb = spec.problem;
  const BipartiteDims dims = pb.choi_dims();
  const bool tp = spec.tp_mode != TpMode::none;
  const double w = spec.effective_w();
  std::vector<Matrix> xt;
  for (const auto& x : pb.x) xt.push_back(x.transpose());

  ConeModel model;
  model.value = [pb, dims, tp, w](const Matrix& c) {
    double v = 0.0;
    for (std::size_t i = 0; i < pb.count(); ++i)
      v += trace_norm((choi_action(c, dims, pb.x[i]) - pb.y[i]).hermitian_part());
    if (tp) v += w * operator_norm(tp_defect_matrix(c, dims).hermitian_part());
    return v;
  };
  model.smoothed = [pb, dims, tp, w, xt](const Matrix& c, double mu, Matrix& grad) {
    grad = Matrix(dims.total(), dims.total());
    double v = 0.0;
    for (std::size_t i = 0; i < pb.count(); ++i) {
      Matrix k;
      v += huber_trace_norm(choi_action(c, dims, pb.x[i]) - pb.y[i], mu, &k);
      grad += tensor_product(k, xt[i]);
    }
    if (tp) {
      Matrix k;
      v += w * softmax_operator_norm(tp_defect_matrix(c, dims), mu, &k);
      grad += tensor_product(Matrix::identity(dims.d1), k) * w;
    }
    return v;
  };
  for (std::size_t i = 0; i < pb.count(); ++i)
    for (const auto& b : hermitian_basis(dims.d1)) {
      model.measurements.push_back(tensor_product(b, xt[i]));
      model.targets.push_back(hermitian_inner(b, pb.y[i]));
    }
  if (tp)
    for (const auto& b : hermitian_basis(dims.d2)) {
      model.measurements.push_back(tensor_product(Matrix::identity(dims.d1), b));
      model.targets.push_back(b.trace().real());
    }
  double ysum = 0.0;
  for (const auto& y : pb.y) ysum += trace_norm(y);
  model.mu0 = 0.1 * std::max(1.0, ysum);
  return model;
}

double trace_mismatch_bound(const InterpolationProblem& problem) {
  double s = 0.0;
  for (std::size_t i = 0; i < problem.count(); ++i)
    s += std::abs(problem.y[i].trace().real() - problem.x[i].trace().real());
  return s;
}

namespace {

/** sum_i X_i (x) H_i, input factor first. */
Matrix dual_operator(const InterpolationProblem& pb, const std::vector<Matrix>& h) {
  const std::size_t n = pb.in_dim() * pb.out_dim();
  Matrix s(n, n);
  for (std::size_t i = 0; i < pb.count(); ++i) s += tensor_product(pb.x[i], h[i]);
  return s;
}

/** tr_1[A (X (x) I)]: gradient of tr[A (X (x) H)] in H. */
Matrix dual_adjoint(const Matrix& a, const Matrix& x, std::size_t out) {
  const std::size_t in = x.rows();
  Matrix g(out, out);
  for (std::size_t p = 0; p < out; ++p)
    for (std::size_t q = 0; q < out; ++q) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < in; ++j)
        for (std::size_t k = 0; k < in; ++k)
          s += a(k * out + q, j * out + p) * x(j, k);
      g(p, q) = s;
    }
  // d tr[A (X (x) H)] / dH as a Hermitian matrix G with df = tr[G dH].
  return g.transpose().hermitian_part();
}

Matrix clip_spectrum(const Matrix& h) {
  return spectral_apply(h.hermitian_part(),
                        [](double l) { return std::clamp(l, -1.0, 1.0); });
}

/** Coefficients c with sum c_i X_i positive definite, scaled to max|c| = 1. */
std::optional<std::pair<std::vector<double>, double>> interior_direction(
    const InterpolationProblem& pb) {
  const std::size_t n = pb.count();
  const std::size_t d = pb.in_dim();
  std::vector<std::vector<double>> candidates;
  // Least-squares fit of the identity.
  RealMatrix gram(n, n);
  RealVector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gram(i, j) = hermitian_inner(pb.x[i], pb.x[j]);
    rhs[i] = pb.x[i].trace().real();
  }
  double ridge = 0.0;
  for (std::size_t i = 0; i < n; ++i) ridge = std::max(ridge, gram(i, i));
  for (std::size_t i = 0; i < n; ++i) gram(i, i) += 1e-12 * ridge;
  if (cholesky_solve(gram, rhs)) candidates.push_back(rhs);
  for (std::size_t i = 0; i < n; ++i)
    for (double sgn : {1.0, -1.0}) {
      std::vector<double> e(n, 0.0);
      e[i] = sgn;
      candidates.push_back(e);
    }
  std::optional<std::pair<std::vector<double>, double>> best;
  for (auto c : candidates) {
    double top = 0.0;
    for (double v : c) top = std::max(top, std::abs(v));
    if (!(top > 0.0)) continue;
    for (auto& v : c) v /= top;
    Matrix p(d, d);
    for (std::size_t i = 0; i < n; ++i) p += pb.x[i] * c[i];
    const double kappa = min_eigenvalue(p.hermitian_part());
    if (kappa > 1e-12 && (!best || kappa > best->second)) best = {{c, kappa}};
  }
  return best;
}

}  // namespace

DualResult gamma_dual(const InterpolationProblem& problem,
                      const DualParams& params) {
  problem.validate();
  const InterpolationProblem& pb = problem;
  const std::size_t out = pb.out_dim();
  const std::size_t n = pb.count();
  std::vector<Matrix> yt;
  double xnorm2 = 0.0, yscale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    yt.push_back(pb.y[i].transpose());
    const double f = frobenius_norm(pb.x[i]);
    xnorm2 += f * f;
    yscale += trace_norm(pb.y[i]);
  }
  const auto interior = interior_direction(pb);

  auto linear = [&](const std::vector<Matrix>& h) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v += hermitian_inner(yt[i], h[i]);
    return v;
  };
  // Certified value of the point reached from h by mixing in the interior
  // point.
  auto restore = [&](const std::vector<Matrix>& h, DualResult& res) {
    const double eps = std::max(0.0, -min_eigenvalue(dual_operator(pb, h)));
    res.h = h;
    res.feasibility_defect = eps;
    if (eps == 0.0) {
      res.certified = true;
    } else if (interior) {
      const double kappa = interior->second;
      const double theta = eps / (eps + kappa);
      for (std::size_t i = 0; i < n; ++i)
        res.h[i] = h[i] * (1.0 - theta) +
                   Matrix::identity(out) * (theta * interior->first[i]);
      res.certified = true;
    } else {
      res.certified = false;
    }
    res.gamma = linear(res.h);
  };

  std::vector<Matrix> h(n, Matrix(out, out));
  DualResult best;
  restore(h, best);  // H = 0 is feasible, value 0.

  const double scale = std::max(1.0, yscale);
  for (double rho : {1.0, 4.0, 16.0, 64.0, 256.0}) {
    const double penalty = rho * scale;
    for (double mu_rel : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
      const double mu = mu_rel;
      const double lip = penalty / mu * std::max(xnorm2, 1e-12);
      const double step = 1.0 / lip;
      auto grad_at = [&](const std::vector<Matrix>& hh) {
        const EigenSystem es = eigh(dual_operator(pb, hh).hermitian_part());
        const Matrix a = spectral_apply(es, [&](double l) {
          if (l >= 0.0) return 0.0;
          return -std::min(1.0, -l / mu);
        });
        std::vector<Matrix> g(n);
        for (std::size_t i = 0; i < n; ++i)
          g[i] = yt[i] + dual_adjoint(a, pb.x[i], out) * penalty;
        return g;
      };
      std::vector<Matrix> z = h, prev = h;
      double t = 1.0;
      for (std::size_t it = 0; it < params.iterations_per_stage; ++it) {
        const std::vector<Matrix> g = grad_at(z);
        std::vector<Matrix> next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = clip_spectrum(z[i] - g[i] * step);
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        for (std::size_t i = 0; i < n; ++i)
          z[i] = next[i] + (next[i] - prev[i]) * ((t - 1.0) / tn);
        prev = std::move(next);
        t = tn;
      }
      h = prev;
      DualResult cand;
      restore(h, cand);
      if (cand.certified && (!best.certified || cand.gamma < best.gamma)) best = cand;
    }
  }
  return best;
}

WitnessResult projection_pair_search(const Matrix& a, const BipartiteDims& dims,
                                     std::size_t restarts, std::uint64_t seed) {
  require_dims(a, dims, "projection_pair_search");
  require_hermitian(a, "projection_pair_search");
  const LmoResult r = product_lmo(a, dims, restarts, seed, 0);
  WitnessResult out;
  out.witness = a;
  out.pair_minimum = r.value;
  out.pair = std::get<ProductPayload>(r.atom.payload);
  return out;
}

WitnessResult entanglement_witness(const ChoiMatrix& c, std::size_t restarts,
                                   std::uint64_t seed) {
  // Bottom eigenvector of PT(C), taken even when PT(C) is PSD.
  const EigenSystem es = eigh(partial_transpose(c.matrix, Factor::second, c.dims));
  const Matrix a = partial_transpose(projector(column(es.vectors, 0)), Factor::second, c.dims);
  WitnessResult out = projection_pair_search(a.hermitian_part(), c.dims, restarts, seed);
  out.value = hermitian_inner(a.hermitian_part(), c.matrix);
  const double tol = 1e-9 * std::max(1.0, max_abs(c.matrix));
  out.found = out.value < -tol && out.pair_minimum >= -1e-12;
  return out;
}

}  // namespace qci
