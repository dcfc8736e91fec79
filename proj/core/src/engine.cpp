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

#include "qci/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "qci/linalg.hpp"
#include "qci/random.hpp"

namespace qci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDropWeight = 1e-12;

const std::vector<Matrix>& cached_basis(std::size_t d) {
  thread_local std::map<std::size_t, std::vector<Matrix>> cache;
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, hermitian_basis(d)).first;
  return it->second;
}

double total_weight(const std::vector<Atom>& atoms) {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

std::size_t total_params(const std::vector<Atom>& atoms, const ConeSpec& cone) {
  std::size_t p = 0;
  for (const auto& a : atoms) p += param_count(a, cone);
  return p;
}

RealVector gradient_all(const std::vector<Atom>& atoms, const ConeSpec& cone,
                        const Matrix& g) {
  RealVector out(total_params(atoms, cone), 0.0);
  std::size_t off = 0;
  for (const auto& a : atoms) {
    accumulate_gradient(a, cone, g, out.data() + off);
    off += param_count(a, cone);
  }
  return out;
}

std::vector<Atom> retract_all(const std::vector<Atom>& atoms,
                              const ConeSpec& cone, const RealVector& delta) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  std::size_t off = 0;
  for (const auto& a : atoms) {
    out.push_back(retract(a, cone, delta.data() + off));
    off += param_count(a, cone);
  }
  return out;
}

Matrix realize_or_zero(const std::vector<Atom>& atoms, const ConeSpec& cone) {
  if (atoms.empty()) return Matrix(cone.dims.total(), cone.dims.total());
  return realize(std::span<const Atom>(atoms), cone);
}

void compress(std::vector<Atom>& atoms, const ConeSpec& cone,
              std::size_t max_atoms) {
  std::erase_if(atoms, [](const Atom& a) { return !(a.weight >= kDropWeight); });
  if (cone.kind == ConeKind::psd && !atoms.empty()) {
    // Rays collapse onto the eigenvectors of their sum.
    const EigenSystem es = eigh(realize_or_zero(atoms, cone));
    const double top = std::max(es.values.back(), 0.0);
    atoms.clear();
    for (std::size_t k = es.values.size(); k-- > 0;) {
      if (es.values[k] <= std::max(kDropWeight, 1e-15 * top)) continue;
      atoms.push_back({es.values[k], RayPayload{column(es.vectors, k)}});
    }
  }
  if (cone.kind == ConeKind::hull) {
    // One atom per generator; the LMO keeps proposing the same few.
    std::vector<Atom> merged;
    for (const auto& a : atoms) {
      const std::size_t idx = std::get<GeneratorPayload>(a.payload).index;
      auto it = std::find_if(merged.begin(), merged.end(), [idx](const Atom& m) {
        return std::get<GeneratorPayload>(m.payload).index == idx;
      });
      if (it == merged.end()) merged.push_back(a);
      else it->weight += a.weight;
    }
    atoms = std::move(merged);
  }
  if (atoms.size() > max_atoms) {
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.weight > b.weight; });
    atoms.resize(max_atoms);
  }
}

/** Projected gradient on the weights with payloads frozen. */
void correct_weights(std::vector<Atom>& atoms, const ConeModel& model,
                     const ConeSpec& cone, double mu, double cap,
                     std::size_t steps) {
  if (atoms.empty()) return;
  std::vector<Matrix> payloads;
  payloads.reserve(atoms.size());
  for (const auto& a : atoms) payloads.push_back(payload_matrix(a.payload, cone));
  const std::size_t n = cone.dims.total();
  auto eval = [&](const std::vector<double>& p, std::vector<double>* grad) {
    Matrix c(n, n);
    for (std::size_t k = 0; k < p.size(); ++k)
      if (p[k] != 0.0) c += payloads[k] * p[k];
    Matrix g;
    const double v = model.smoothed(c, mu, g);
    if (grad) {
      grad->resize(p.size());
      for (std::size_t k = 0; k < p.size(); ++k)
        (*grad)[k] = hermitian_inner(g, payloads[k]);
    }
    return v;
  };
  std::vector<double> p(atoms.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = atoms[k].weight;
  project_capped_simplex(p, cap);
  std::vector<double> grad;
  double f0 = eval(p, &grad);
  double t = 1.0;
  for (std::size_t s = 0; s < steps; ++s) {
    bool accepted = false;
    std::vector<double> p1(p.size());
    double f1 = f0;
    for (int tries = 0; tries < 60; ++tries) {
      for (std::size_t k = 0; k < p.size(); ++k) p1[k] = p[k] - t * grad[k];
      project_capped_simplex(p1, cap);
      double lin = 0.0, quad = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double d = p1[k] - p[k];
        lin += grad[k] * d;
        quad += d * d;
      }
      f1 = eval(p1, nullptr);
      if (f1 <= f0 + lin + quad / (2.0 * t) + 1e-15 * std::abs(f0)) {
        accepted = quad > 0.0;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    p = p1;
    f0 = eval(p, &grad);
    t *= 1.5;
  }
  for (std::size_t k = 0; k < p.size(); ++k) atoms[k].weight = p[k];
}

/** Classic FW step C <- (1-gamma) C + gamma * cap * P by golden section. */
void line_search_step(std::vector<Atom>& atoms, const ConeModel& model,
                      const ConeSpec& cone, double mu, double cap) {
  const Matrix base = realize_or_zero(
      std::vector<Atom>(atoms.begin(), atoms.end() - 1), cone);
  const Matrix vertex = payload_matrix(atoms.back().payload, cone) * cap;
  auto f = [&](double gamma) {
    Matrix g;
    return model.smoothed(base * (1.0 - gamma) + vertex * gamma, mu, g);
  };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 50; ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo); f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo); f2 = f(x2);
    }
  }
  double gamma = 0.5 * (lo + hi);
  if (f(0.0) <= f(gamma)) gamma = 0.0;
  for (std::size_t k = 0; k + 1 < atoms.size(); ++k) atoms[k].weight *= 1.0 - gamma;
  atoms.back().weight = gamma * cap;
}

void refine(std::vector<Atom>& atoms, const ConeModel& model,
            const ConeSpec& cone, double mu, double cap, std::size_t steps) {
  if (atoms.empty() || steps == 0) return;
  const std::function<double(const std::vector<Atom>&, RealVector&)> f =
      [&](const std::vector<Atom>& a, RealVector& grad) {
        if (total_weight(a) > cap * (1.0 + 1e-9)) return kInf;
        Matrix g;
        const double v = model.smoothed(realize_or_zero(a, cone), mu, g);
        grad = gradient_all(a, cone, g);
        return v;
      };
  const std::function<std::vector<Atom>(const std::vector<Atom>&, const RealVector&)>
      step = [&](const std::vector<Atom>& a, const RealVector& d) {
        return retract_all(a, cone, d);
      };
  LbfgsOptions opt;
  opt.max_iter = steps;
  lbfgs(atoms, f, step, opt);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return a * 0x9e3779b97f4a7c15ULL ^ (b + 0x7f4a7c15ULL + (a << 6) + (a >> 2));
}

}  // namespace

std::size_t param_count(const Atom& atom, const ConeSpec&) {
  if (const auto* r = std::get_if<RayPayload>(&atom.payload)) return 2 * r->v.size();
  if (const auto* p = std::get_if<ProductPayload>(&atom.payload))
    return 2 * (p->first.size() + p->second.size());
  if (const auto* u = std::get_if<UnitaryPayload>(&atom.payload))
    return 1 + u->u.rows() * u->u.rows();
  return 1;
}

void accumulate_gradient(const Atom& atom, const ConeSpec& cone,
                         const Matrix& g, double* out) {
  const double s = std::sqrt(std::max(atom.weight, 0.0));
  if (const auto* r = std::get_if<RayPayload>(&atom.payload)) {
    const std::size_t n = r->v.size();
    CVector v(r->v);
    for (auto& z : v) z *= s;
    const CVector gv = g * std::span<const Complex>(v);
    for (std::size_t k = 0; k < n; ++k) {
      out[k] += 2.0 * gv[k].real();
      out[n + k] += 2.0 * gv[k].imag();
    }
    return;
  }
  if (const auto* p = std::get_if<ProductPayload>(&atom.payload)) {
    const std::size_t d1 = p->first.size(), d2 = p->second.size();
    CVector a(p->first);
    for (auto& z : a) z *= s;
    const CVector& b = p->second;
    const CVector psi = kron(a, b);
    const CVector gp = g * std::span<const Complex>(psi);
    CVector ga(d1), gb(d2);
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t q = 0; q < d2; ++q) {
        ga[i] += std::conj(b[q]) * gp[i * d2 + q];
        gb[q] += std::conj(a[i]) * gp[i * d2 + q];
      }
    for (std::size_t i = 0; i < d1; ++i) {
      out[i] += 2.0 * ga[i].real();
      out[d1 + i] += 2.0 * ga[i].imag();
    }
    for (std::size_t q = 0; q < d2; ++q) {
      out[2 * d1 + q] += 2.0 * gb[q].real();
      out[2 * d1 + d2 + q] += 2.0 * gb[q].imag();
    }
    return;
  }
  if (const auto* up = std::get_if<UnitaryPayload>(&atom.payload)) {
    const Matrix& u = up->u;
    const std::size_t d = u.rows();
    const CVector vu = vectorize(u);
    const CVector gu = g * std::span<const Complex>(vu);
    const Matrix gm = unvectorize(gu, d, d);
    const Matrix s0 = u.adjoint() * gm;
    out[0] += 2.0 * s / double(d) * dot(vu, gu).real();
    const double scale = 2.0 * s * s / double(d);
    const auto& basis = cached_basis(d);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      Complex tr = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) tr += basis[k](i, j) * s0(j, i);
      out[1 + k] += scale * (Complex(0.0, -1.0) * tr).real();
    }
    return;
  }
  const auto& gen = std::get<GeneratorPayload>(atom.payload);
  out[0] += 2.0 * s * hermitian_inner(g, payload_matrix(gen, cone));
}

Atom retract(const Atom& atom, const ConeSpec&, const double* delta) {
  const double s = std::sqrt(std::max(atom.weight, 0.0));
  if (const auto* r = std::get_if<RayPayload>(&atom.payload)) {
    const std::size_t n = r->v.size();
    CVector v(n);
    for (std::size_t k = 0; k < n; ++k)
      v[k] = s * r->v[k] + Complex(delta[k], delta[n + k]);
    const double nv = vector_norm(v);
    if (nv == 0.0) return {0.0, *r};
    return {nv * nv, RayPayload{normalized(v)}};
  }
  if (const auto* p = std::get_if<ProductPayload>(&atom.payload)) {
    const std::size_t d1 = p->first.size(), d2 = p->second.size();
    CVector a(d1), b(d2);
    for (std::size_t i = 0; i < d1; ++i)
      a[i] = s * p->first[i] + Complex(delta[i], delta[d1 + i]);
    for (std::size_t q = 0; q < d2; ++q)
      b[q] = p->second[q] + Complex(delta[2 * d1 + q], delta[2 * d1 + d2 + q]);
    const double na = vector_norm(a), nb = vector_norm(b);
    if (na == 0.0 || nb == 0.0) return {0.0, *p};
    return {na * na * nb * nb, ProductPayload{normalized(a), normalized(b)}};
  }
  if (const auto* up = std::get_if<UnitaryPayload>(&atom.payload)) {
    const std::size_t d = up->u.rows();
    const double c = s + delta[0];
    const auto& basis = cached_basis(d);
    Matrix h(d, d);
    bool moved = false;
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (delta[1 + k] != 0.0) {
        h += basis[k] * delta[1 + k];
        moved = true;
      }
    Matrix u = moved ? reunitarize(up->u * expi_hermitian(h)) : up->u;
    return {c * c, UnitaryPayload{std::move(u)}};
  }
  const double c = s + delta[0];
  return {c * c, atom.payload};
}

Atom random_atom(const ConeSpec& cone, double weight, std::uint64_t seed,
                 std::uint64_t stream) {
  Rng rng = make_rng({seed, stream, 0xa70bULL});
  switch (cone.kind) {
    case ConeKind::psd:
      return {weight, RayPayload{random_unit_vector(rng, cone.dims.total())}};
    case ConeKind::sep:
      return {weight, ProductPayload{random_unit_vector(rng, cone.dims.d1),
                                     random_unit_vector(rng, cone.dims.d2)}};
    case ConeKind::ru:
      return {weight, UnitaryPayload{haar_unitary(rng, cone.dims.d2)}};
    case ConeKind::hull:
      return {weight, GeneratorPayload{static_cast<std::size_t>(
                          rng() % cone.generators.size())}};
  }
  return {weight, RayPayload{}};
}

void project_capped_simplex(std::span<double> p, double cap) {
  double sum = 0.0;
  for (auto& x : p) {
    x = std::max(x, 0.0);
    sum += x;
  }
  if (sum <= cap) return;
  std::vector<double> sorted(p.begin(), p.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double acc = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    acc += sorted[k];
    const double t = (acc - cap) / double(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] <= t) {
      theta = t;
      break;
    }
  }
  for (auto& x : p) x = std::max(x - theta, 0.0);
}

namespace {

// v with realize(atom) = v v^dagger and dv along each chart coordinate.
// Empty for generator atoms, which have no vector form.
struct AtomChart {
  CVector v;
  std::vector<CVector> dv;
};

AtomChart atom_chart(const Atom& atom, const ConeSpec& cone) {
  const double s = std::sqrt(std::max(atom.weight, 0.0));
  const Complex i1(0.0, 1.0);
  AtomChart ch;
  if (const auto* r = std::get_if<RayPayload>(&atom.payload)) {
    const std::size_t n = r->v.size();
    ch.v = r->v;
    for (auto& z : ch.v) z *= s;
    ch.dv.assign(2 * n, CVector(n));
    for (std::size_t k = 0; k < n; ++k) {
      ch.dv[k][k] = 1.0;
      ch.dv[n + k][k] = i1;
    }
    return ch;
  }
  if (const auto* p = std::get_if<ProductPayload>(&atom.payload)) {
    const std::size_t d1 = p->first.size(), d2 = p->second.size();
    CVector a(p->first);
    for (auto& z : a) z *= s;
    ch.v = kron(a, p->second);
    ch.dv.assign(2 * (d1 + d2), CVector(d1 * d2));
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t q = 0; q < d2; ++q) {
        ch.dv[i][i * d2 + q] = p->second[q];
        ch.dv[d1 + i][i * d2 + q] = i1 * p->second[q];
        ch.dv[2 * d1 + q][i * d2 + q] = a[i];
        ch.dv[2 * d1 + d2 + q][i * d2 + q] = i1 * a[i];
      }
    return ch;
  }
  if (const auto* up = std::get_if<UnitaryPayload>(&atom.payload)) {
    const std::size_t d = up->u.rows();
    const double norm = 1.0 / std::sqrt(double(d));
    const CVector vu = vectorize(up->u);
    ch.v = vu;
    for (auto& z : ch.v) z *= s * norm;
    ch.dv.push_back(vu);
    for (auto& z : ch.dv.back()) z *= norm;
    for (const auto& b : cached_basis(d)) {
      ch.dv.push_back(vectorize(up->u * b));
      for (auto& z : ch.dv.back()) z *= i1 * s * norm;
    }
    return ch;
  }
  (void)cone;
  return ch;
}

}  // namespace

std::pair<std::vector<Atom>, double> polish_atoms(std::vector<Atom> atoms,
                                                  const ConeModel& model,
                                                  const ConeSpec& cone,
                                                  double trace_cap,
                                                  std::uint64_t seed,
                                                  std::size_t max_iter) {
  const std::size_t m = model.measurements.size();
  std::erase_if(atoms, [](const Atom& a) { return !(a.weight > 0.0); });
  const double tr = total_weight(atoms);
  const double pad = 0.02 * std::max(tr, 1e-3 * trace_cap);
  std::size_t params = total_params(atoms, cone);
  std::uint64_t stream = 0;
  std::vector<Atom> extra;
  while (params < 2 * m + 4) {
    extra.push_back(random_atom(cone, 1.0, seed, stream++));
    params += param_count(extra.back(), cone);
  }
  for (auto& a : extra) {
    a.weight = pad / double(extra.size());
    atoms.push_back(std::move(a));
  }

  const auto& kernel = model.kernel;
  auto kernel_rows = [&](const std::vector<Atom>& a) {
    std::size_t rows = 0;
    for (const auto& at : a)
      if (!std::holds_alternative<GeneratorPayload>(at.payload)) rows += 2 * kernel.size();
    return rows;
  };
  const std::function<RealVector(const std::vector<Atom>&)> residual =
      [&](const std::vector<Atom>& a) {
        const Matrix c = realize_or_zero(a, cone);
        RealVector r(m + kernel_rows(a));
        for (std::size_t i = 0; i < m; ++i)
          r[i] = hermitian_inner(model.measurements[i], c) - model.targets[i];
        std::size_t row = m;
        for (const auto& at : a) {
          if (kernel.empty() || std::holds_alternative<GeneratorPayload>(at.payload)) continue;
          const AtomChart ch = atom_chart(at, cone);
          for (const auto& k : kernel) {
            const Complex z = dot(k, ch.v);
            r[row++] = z.real();
            r[row++] = z.imag();
          }
        }
        return r;
      };
  const std::function<RealMatrix(const std::vector<Atom>&)> jacobian =
      [&](const std::vector<Atom>& a) {
        const std::size_t p = total_params(a, cone);
        RealMatrix j(m + kernel_rows(a), p);
        for (std::size_t i = 0; i < m; ++i) {
          const RealVector row = gradient_all(a, cone, model.measurements[i]);
          std::copy(row.begin(), row.end(), j.data.begin() + i * p);
        }
        std::size_t row = m, off = 0;
        for (const auto& at : a) {
          const std::size_t np = param_count(at, cone);
          if (!kernel.empty() && !std::holds_alternative<GeneratorPayload>(at.payload)) {
            const AtomChart ch = atom_chart(at, cone);
            for (const auto& k : kernel) {
              for (std::size_t q = 0; q < np; ++q) {
                const Complex z = dot(k, ch.dv[q]);
                j.data[row * p + off + q] = z.real();
                j.data[(row + 1) * p + off + q] = z.imag();
              }
              row += 2;
            }
          }
          off += np;
        }
        return j;
      };
  const std::function<std::vector<Atom>(const std::vector<Atom>&, const RealVector&)>
      step = [&](const std::vector<Atom>& a, const RealVector& d) {
        return retract_all(a, cone, d);
      };
  LmOptions opt;
  opt.max_iter = max_iter;
  const LmResult lm = levenberg_marquardt(atoms, residual, jacobian, step, opt);
  std::erase_if(atoms, [](const Atom& a) { return !(a.weight > 0.0); });
  return {std::move(atoms), lm.residual};
}

EngineResult minimize_over_cone(const ConeModel& model, const ConeSpec& cone,
                                const EngineOptions& opt,
                                std::vector<Atom> start) {
  const double cap = opt.trace_cap;
  std::vector<Atom> atoms = std::move(start);
  compress(atoms, cone, opt.max_atoms);

  EngineResult res;
  std::vector<Atom> best_atoms = atoms;
  double best = model.value(realize_or_zero(atoms, cone));
  if (total_weight(atoms) > cap * (1.0 + 1e-9)) best = kInf;

  auto consider = [&](const std::vector<Atom>& cand) {
    if (total_weight(cand) > cap * (1.0 + 1e-9)) return kInf;
    const double v = model.value(realize_or_zero(cand, cone));
    if (v < best) {
      best = v;
      best_atoms = cand;
    }
    return v;
  };
  auto try_polish = [&](std::uint64_t stream) {
    if (model.measurements.empty() || !(best <= opt.polish_below)) return;
    auto polished =
        polish_atoms(best_atoms, model, cone, cap, mix(opt.seed, stream + 1));
    compress(polished.first, cone, opt.max_atoms);
    const double before = best;
    consider(polished.first);
    if (best < before) atoms = best_atoms;
  };

  std::size_t k = 0;
  std::size_t next_polish = 1;
  for (; k < opt.max_iter; ++k) {
    if (best <= opt.target) {
      res.converged = true;
      break;
    }
    const double mu = model.smooth ? 0.0 : model.mu0 / std::sqrt(double(k + 1));
    Matrix g;
    model.smoothed(realize_or_zero(atoms, cone), mu, g);
    ConeSpec lmo_cone = cone;
    lmo_cone.seed = mix(opt.seed, cone.seed);
    const LmoResult step = lmo(lmo_cone, g, k);
    atoms.push_back({0.0, step.atom.payload});
    if (opt.step_rule == StepRule::fully_corrective) {
      correct_weights(atoms, model, cone, mu, cap, opt.weight_steps);
    } else {
      line_search_step(atoms, model, cone, mu, cap);
    }
    refine(atoms, model, cone, mu, cap, opt.refine_steps);
    compress(atoms, cone, opt.max_atoms);
    consider(atoms);
    if (k + 1 == next_polish) {
      try_polish(k);
      next_polish *= 2;
    }
    res.history.push_back(best);
    const std::size_t window = 15;
    if (res.history.size() > window) {
      const double old = res.history[res.history.size() - 1 - window];
      if (old - best <= 1e-9 * std::max(1.0, best)) {
        res.converged = true;
        ++k;
        break;
      }
    }
  }
  res.iterations = k;

  if (!(best <= opt.target)) {
    // Continuation towards the nonsmooth optimum from the best point.
    if (!model.smooth) {
      double mu = model.mu0 / std::sqrt(double(k + 1));
      atoms = best_atoms;
      for (int j = 0; j < 8; ++j) {
        mu *= 0.2;
        refine(atoms, model, cone, mu, cap, 100);
        compress(atoms, cone, opt.max_atoms);
        consider(atoms);
      }
    }
    try_polish(k + 1000);
    if (!res.history.empty()) res.history.back() = std::min(res.history.back(), best);
    if (best <= opt.target) res.converged = true;
  }
  res.atoms = best_atoms;
  res.c = realize_or_zero(best_atoms, cone);
  res.value = best;
  return res;
}

}  // namespace qci
