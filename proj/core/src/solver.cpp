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

#include "qci/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qci/linalg.hpp"

namespace qci {

void SolveParams::validate() const {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(feas_tol > 0.0)) throw std::invalid_argument("feas_tol must be positive");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

HolevoEnsemble ensemble_from_products(std::span<const Atom> atoms) {
  HolevoEnsemble ens;
  for (const auto& a : atoms) {
    const auto* p = std::get_if<ProductPayload>(&a.payload);
    if (!p) throw std::invalid_argument("ensemble_from_products: non-product atom");
    CVector b(p->second);
    for (auto& z : b) z = std::conj(z);
    ens.pairs.push_back({projector(p->first), projector(b) * a.weight});
  }
  return ens;
}

namespace {

/** (I (x) S) v for v on output (x) input. */
CVector apply_input_side(const Matrix& s, const CVector& v, std::size_t out,
                         std::size_t in) {
  CVector r(v.size());
  for (std::size_t a = 0; a < out; ++a)
    for (std::size_t j = 0; j < in; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < in; ++k) acc += s(j, k) * v[a * in + k];
      r[a * in + j] = acc;
    }
  return r;
}

/** True when every atom of the cone has tr_1 proportional to I, so that
 * tr_1 C = I reduces to tr C = d. */
bool tp_is_trace(const ConeSpec& cone) {
  if (cone.kind == ConeKind::ru) return true;
  if (cone.kind != ConeKind::hull) return false;
  for (const auto& g : cone.generators) {
    const Matrix t = partial_trace(g, Factor::first, cone.dims);
    const double avg = t.trace().real() / double(cone.dims.d2);
    if (max_abs(t - Matrix::identity(cone.dims.d2) * avg) > 1e-12 * std::max(1.0, avg))
      return false;
  }
  return true;
}

/** Exact-TP model for such cones: the TP-free objective read at C scaled to
 * trace d. Scale invariance replaces the penalty, whose kink at the optimum
 * stalls weight-only first-order steps. */
ConeModel fixed_trace_model(const ProgramSpec& spec) {
  ProgramSpec inner = spec;
  inner.tp_mode = TpMode::none;
  const ConeModel base = program_model(inner);
  const double d = double(spec.problem.in_dim());
  const std::size_t n = spec.problem.choi_dims().total();
  ConeModel model = base;
  model.value = [base, d](const Matrix& c) {
    const double t = c.trace().real();
    return base.value(t > 0.0 ? c * (d / t) : c);
  };
  model.smoothed = [base, d, n](const Matrix& c, double mu, Matrix& grad) {
    const double t = c.trace().real();
    if (!(t > 0.0)) return base.smoothed(c, mu, grad);
    const double v = base.smoothed(c * (d / t), mu, grad);
    // d/dC of g(dC/t): (d/t) (G - <G, C>/t I).
    const double gc = hermitian_inner(grad, c) / t;
    grad = (grad - Matrix::identity(n) * gc) * (d / t);
    return v;
  };
  model.measurements.push_back(Matrix::identity(n));
  model.targets.push_back(d);
  return model;
}

/** Makes tr_1 C = I exactly where the cone allows it. */
void enforce_trace_preservation(std::vector<Atom>& atoms, const ConeSpec& cone) {
  if (atoms.empty()) return;
  const BipartiteDims dims = cone.dims;
  switch (cone.kind) {
    case ConeKind::psd:
    case ConeKind::sep: {
      const Matrix t = partial_trace(realize(std::span<const Atom>(atoms), cone),
                                     Factor::first, dims).hermitian_part();
      const EigenSystem es = eigh(t);
      if (!(es.values.front() > 1e-12)) return;
      const Matrix s = spectral_apply(es, [](double l) { return 1.0 / std::sqrt(l); });
      for (auto& a : atoms) {
        if (auto* r = std::get_if<RayPayload>(&a.payload)) {
          CVector v(r->v);
          for (auto& z : v) z *= std::sqrt(a.weight);
          v = apply_input_side(s, v, dims.d1, dims.d2);
          const double nv = vector_norm(v);
          a.weight = nv * nv;
          r->v = normalized(v);
        } else if (auto* p = std::get_if<ProductPayload>(&a.payload)) {
          const CVector b = s * std::span<const Complex>(p->second);
          const double nb = vector_norm(b);
          a.weight *= nb * nb;
          p->second = normalized(b);
        }
      }
      return;
    }
    case ConeKind::hull:
      if (!tp_is_trace(cone)) return;
      [[fallthrough]];
    case ConeKind::ru: {
      double total = 0.0;
      for (const auto& a : atoms) total += a.weight;
      if (!(total > 0.0)) return;
      for (auto& a : atoms) a.weight *= double(dims.d2) / total;
      return;
    }
  }
}

}  // namespace

SolveReport solve(ProgramSpec spec, const SolveParams& params) {
  params.validate();
  if (spec.cone.dims.total() == 0) spec.cone.dims = spec.problem.choi_dims();
  spec.validate();
  const InterpolationProblem& pb = spec.problem;
  const bool fixed_trace = spec.tp_mode == TpMode::exact && tp_is_trace(spec.cone);
  const ConeModel model = fixed_trace ? fixed_trace_model(spec) : program_model(spec);

  double yscale = 0.0;
  for (const auto& y : pb.y) yscale += trace_norm(y);
  EngineOptions opt;
  opt.max_iter = params.max_iter;
  opt.trace_cap = spec.effective_trace_cap();
  opt.target = 1e-3 * params.feas_tol;
  opt.polish_below = 0.05 * std::max(1.0, yscale);
  opt.step_rule = params.step_rule;
  opt.seed = params.seed;
  ConeSpec cone = spec.cone;
  cone.seed = cone.seed ^ params.seed;
  std::vector<Atom> start;
  if (fixed_trace) {
    // The scaled model is degenerate at C = 0; start from a TP point.
    const double d = double(pb.in_dim());
    if (cone.kind == ConeKind::ru) {
      start.push_back({d, UnitaryPayload{Matrix::identity(pb.in_dim())}});
    } else {
      for (std::size_t k = 0; k < cone.generators.size(); ++k)
        start.push_back({d / double(cone.generators.size()), GeneratorPayload{k}});
    }
  }
  EngineResult res = minimize_over_cone(model, cone, opt, std::move(start));

  if (spec.tp_mode == TpMode::exact) enforce_trace_preservation(res.atoms, cone);

  SolveReport rep;
  rep.dims = pb.choi_dims();
  rep.atoms = std::move(res.atoms);
  rep.c = realize(std::span<const Atom>(rep.atoms), cone);
  ObjectiveValue ov = objective(rep.c, spec);
  rep.delta = ov.value;
  rep.interpolation = ov.interpolation;
  rep.lambda = ov.lambda;
  rep.residuals = std::move(ov.slacks);
  rep.history = std::move(res.history);
  if (rep.history.empty()) rep.history.push_back(res.value);
  rep.iterations = res.iterations;
  rep.converged = res.converged;

  const bool tp_ok = spec.tp_mode != TpMode::exact || rep.lambda <= kTpTol;
  if (rep.delta <= params.feas_tol && tp_ok) {
    rep.verdict = Verdict::yes;
    rep.converged = true;
    rep.channel = kraus_from_choi(ChoiMatrix(rep.c.hermitian_part(), rep.dims));
    if (cone.kind == ConeKind::sep)
      rep.ensemble = ensemble_from_products(std::span<const Atom>(rep.atoms));
    return rep;
  }

  double xsum = 0.0;
  for (const auto& x : pb.x) xsum += trace_norm(x);
  if (spec.tp_mode == TpMode::exact ||
      (spec.tp_mode == TpMode::penalty && spec.effective_w() >= xsum))
    rep.lower_bound = trace_mismatch_bound(pb);
  if (params.dual_bound && rep.lower_bound <= params.feas_tol) {
    const DualResult dual = gamma_dual(pb);
    if (dual.certified) rep.lower_bound = std::max(rep.lower_bound, -dual.gamma);
  }
  rep.verdict = rep.lower_bound > params.feas_tol ? Verdict::no : Verdict::unknown;
  return rep;
}

LpResult lp_oracle(const std::vector<std::vector<double>>& a_rows,
                   const std::vector<std::vector<double>>& b_rows,
                   bool stochastic) {
  if (a_rows.empty() || a_rows.size() != b_rows.size()) {
    throw DimensionError("lp_oracle: need the same positive number of a and b rows");
  }
  const std::size_t n = a_rows.front().size(), m = b_rows.front().size();
  if (n == 0 || m == 0) throw DimensionError("lp_oracle: empty vectors");
  for (std::size_t i = 0; i < a_rows.size(); ++i)
    if (a_rows[i].size() != n || b_rows[i].size() != m)
      throw DimensionError("lp_oracle: inconsistent vector lengths at pair " +
                           std::to_string(i));

  // Equality system A x = b over x = vec(D) >= 0.
  const std::size_t nv = n * m;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < a_rows.size(); ++i)
    for (std::size_t q = 0; q < m; ++q) {
      std::vector<double> r(nv, 0.0);
      for (std::size_t p = 0; p < n; ++p) r[p * m + q] = a_rows[i][p];
      rows.push_back(std::move(r));
      rhs.push_back(b_rows[i][q]);
    }
  if (stochastic)
    for (std::size_t p = 0; p < n; ++p) {
      std::vector<double> r(nv, 0.0);
      for (std::size_t q = 0; q < m; ++q) r[p * m + q] = 1.0;
      rows.push_back(std::move(r));
      rhs.push_back(1.0);
    }
  const std::size_t nr = rows.size();
  std::vector<double> sign(nr, 1.0);
  for (std::size_t r = 0; r < nr; ++r)
    if (rhs[r] < 0.0) {
      sign[r] = -1.0;
      rhs[r] = -rhs[r];
      for (auto& v : rows[r]) v = -v;
    }

  // Tableau [A | I | b], artificial basis, objective sum of artificials.
  const std::size_t nc = nv + nr;
  std::vector<std::vector<double>> t(nr, std::vector<double>(nc + 1, 0.0));
  for (std::size_t r = 0; r < nr; ++r) {
    std::copy(rows[r].begin(), rows[r].end(), t[r].begin());
    t[r][nv + r] = 1.0;
    t[r][nc] = rhs[r];
  }
  std::vector<double> cost(nc + 1, 0.0);  // reduced costs, last = -objective
  for (std::size_t j = nv; j < nc; ++j) cost[j] = 1.0;
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t j = 0; j <= nc; ++j) cost[j] -= t[r][j];
  std::vector<std::size_t> basis(nr);
  for (std::size_t r = 0; r < nr; ++r) basis[r] = nv + r;

  double scale = 1.0;
  for (double v : rhs) scale = std::max(scale, std::abs(v));
  const double eps = 1e-12;
  for (std::size_t it = 0; it < 10000; ++it) {
    std::size_t enter = nc;
    for (std::size_t j = 0; j < nc; ++j)
      if (cost[j] < -eps) {
        enter = j;
        break;
      }
    if (enter == nc) break;
    std::size_t leave = nr;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < nr; ++r) {
      if (t[r][enter] <= eps) continue;
      const double ratio = t[r][nc] / t[r][enter];
      if (ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && leave < nr && basis[r] < basis[leave])) {
        best_ratio = ratio;
        leave = r;
      }
    }
    if (leave == nr) break;  // unbounded cannot happen in phase one
    const double piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t r = 0; r < nr; ++r) {
      if (r == leave || t[r][enter] == 0.0) continue;
      const double f = t[r][enter];
      for (std::size_t j = 0; j <= nc; ++j) t[r][j] -= f * t[leave][j];
    }
    const double f = cost[enter];
    for (std::size_t j = 0; j <= nc; ++j) cost[j] -= f * t[leave][j];
    basis[leave] = enter;
  }

  LpResult out;
  out.n = n;
  out.m = m;
  out.phase_one = -cost[nc];
  out.feasible = out.phase_one <= 1e-9 * scale;
  if (out.feasible) {
    out.d.assign(nv, 0.0);
    for (std::size_t r = 0; r < nr; ++r)
      if (basis[r] < nv) out.d[basis[r]] = std::max(t[r][nc], 0.0);
  } else {
    // Duals of phase one: y = 1 - reduced cost of each artificial column,
    // mapped back through the row sign flips.
    out.certificate.resize(nr);
    for (std::size_t r = 0; r < nr; ++r)
      out.certificate[r] = sign[r] * (1.0 - cost[nv + r]);
  }
  return out;
}

namespace {

Matrix clip_psd(const Matrix& m) {
  return spectral_apply(m.hermitian_part(), [](double l) { return std::max(l, 0.0); });
}

/** Dykstra's alternating projections onto PSD, PT-PSD and tr <= cap. */
Matrix project_ppt(const Matrix& c0, const BipartiteDims& dims, double cap,
                   int rounds) {
  const std::size_t n = dims.total();
  Matrix x = c0;
  Matrix p1(n, n), p2(n, n), p3(n, n);
  for (int r = 0; r < rounds; ++r) {
    Matrix y = clip_psd(x + p1);
    p1 = x + p1 - y;
    Matrix z = partial_transpose(
        clip_psd(partial_transpose(y + p2, Factor::second, dims)), Factor::second, dims);
    p2 = y + p2 - z;
    Matrix u = z + p3;
    const double tr = u.trace().real();
    Matrix w = u;
    if (tr > cap) w -= Matrix::identity(n) * ((tr - cap) / double(n));
    p3 = u - w;
    x = std::move(w);
  }
  return x;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.rows() + b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.rows(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) m(a.rows() + i, a.rows() + j) = b(i, j);
  return m;
}

Matrix top_left(const Matrix& m, std::size_t n) {
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = m(i, j);
  return r;
}

/** Shifts C by s I so that C and PT(C) are both PSD. */
Matrix make_ppt_feasible(const Matrix& c, const BipartiteDims& dims) {
  const Matrix h = c.hermitian_part();
  const double a = min_eigenvalue(h);
  const double b = min_eigenvalue(partial_transpose(h, Factor::second, dims).hermitian_part());
  const double s = std::max(0.0, -std::min(a, b));
  if (s == 0.0) return h;
  return h + Matrix::identity(dims.total()) * (s * (1.0 + 1e-12));
}

}  // namespace

PptOracleResult ppt_constrained_oracle(const InterpolationProblem& problem,
                                       const PptOracleParams& params) {
  problem.validate();
  if (problem.in_dim() != 2 || problem.out_dim() != 2) {
    throw DimensionError("ppt_constrained_oracle: needs qubit inputs and outputs");
  }
  ProgramSpec spec;
  spec.problem = problem;
  spec.cone.dims = problem.choi_dims();
  spec.tp_mode = params.tp_mode;
  spec.w = params.w;
  const BipartiteDims dims = spec.cone.dims;
  const bool fixed_trace = spec.tp_mode == TpMode::exact && tp_is_trace(spec.cone);
  const ConeModel model = fixed_trace ? fixed_trace_model(spec) : program_model(spec);
  const double cap = spec.effective_trace_cap();

  double xnorm2 = 0.0;
  for (const auto& x : problem.x) xnorm2 += std::pow(frobenius_norm(x), 2);
  const double tp_weight = spec.tp_mode == TpMode::none ? 0.0 : spec.effective_w();

  auto exact_value = [&](const Matrix& c) { return objective(c, spec).value; };
  Matrix c = Matrix::identity(dims.total()) * (1.0 / double(dims.d1));
  Matrix best = c;
  double best_value = exact_value(c);

  double yscale = 0.0;
  for (const auto& y : problem.y) yscale += trace_norm(y);

  // Least-squares polish in factored form: Z = [[C, *], [*, W]] >= 0 with
  // W = PT(C), both blocks read off one PSD matrix of side 2n.
  auto polish = [&]() {
    const std::size_t n = dims.total();
    ConeSpec big;
    big.kind = ConeKind::psd;
    big.dims = {2 * n, 1};
    ConeModel lift;
    const Matrix zero(n, n);
    for (std::size_t m = 0; m < model.measurements.size(); ++m) {
      lift.measurements.push_back(block_diag(model.measurements[m], zero));
      lift.targets.push_back(model.targets[m]);
    }
    for (const auto& b : hermitian_basis(n)) {
      lift.measurements.push_back(
          block_diag(partial_transpose(b, Factor::second, dims), -b));
      lift.targets.push_back(0.0);
    }
    const Matrix z0 =
        block_diag(best, partial_transpose(best, Factor::second, dims).hermitian_part());
    const EigenSystem es = eigh(z0);
    std::vector<Atom> atoms;
    for (std::size_t k = 0; k < es.values.size(); ++k)
      if (es.values[k] > 0.0)
        atoms.push_back({es.values[k], RayPayload{column(es.vectors, k)}});
    auto polished = polish_atoms(std::move(atoms), lift, big, 2.0 * cap, params.seed, 200);
    const Matrix cand = make_ppt_feasible(
        top_left(realize(std::span<const Atom>(polished.first), big), n), dims);
    const double v = exact_value(cand);
    if (v < best_value) {
      best_value = v;
      best = cand;
    }
  };

  // Projected gradient on the smoothed objective with continuation.
  const std::size_t stages = 6;
  const std::size_t per_stage = std::max<std::size_t>(params.iterations / stages, 1);
  double mu = model.mu0;
  for (std::size_t s = 0; s < stages; ++s, mu *= 0.2) {
    const double lip = (xnorm2 + tp_weight * double(dims.d1)) / mu;
    const double step = 1.0 / lip;
    Matrix z = c, prev = c;
    double t = 1.0;
    for (std::size_t it = 0; it < per_stage; ++it) {
      Matrix g;
      model.smoothed(z, mu, g);
      Matrix next = project_ppt(z - g * step, dims, cap, 30);
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      z = next + (next - prev) * ((t - 1.0) / tn);
      prev = std::move(next);
      t = tn;
    }
    c = prev;
    const Matrix feasible = make_ppt_feasible(c, dims);
    const double v = exact_value(feasible);
    if (v < best_value) {
      best_value = v;
      best = feasible;
    }
    if (best_value <= 0.05 * std::max(1.0, yscale)) polish();
    if (best_value <= 1e-10) break;
  }

  PptOracleResult out;
  out.c = best;
  out.delta = best_value;
  out.min_eigenvalue = min_eigenvalue(best);
  out.min_pt_eigenvalue =
      min_eigenvalue(partial_transpose(best, Factor::second, dims).hermitian_part());
  return out;
}

}  // namespace qci
