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

#include "qci/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qci/channel.hpp"
#include "qci/engine.hpp"
#include "qci/random.hpp"

namespace qci {

std::string to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::psd: return "psd";
    case ConeKind::sep: return "sep";
    case ConeKind::ru: return "ru";
    case ConeKind::hull: return "hull";
  }
  return "?";
}

ConeKind cone_kind_from_string(const std::string& s) {
  if (s == "psd") return ConeKind::psd;
  if (s == "sep") return ConeKind::sep;
  if (s == "ru") return ConeKind::ru;
  if (s == "hull") return ConeKind::hull;
  throw std::invalid_argument("unknown cone '" + s + "' (psd|sep|ru|hull)");
}

void ConeSpec::validate() const {
  if (dims.d1 == 0 || dims.d2 == 0) throw DimensionError("cone: zero dimension");
  if ((kind == ConeKind::sep || kind == ConeKind::ru) && dims.d1 != dims.d2) {
    throw DimensionError("cone " + to_string(kind) +
                         " needs square channels, got output " +
                         std::to_string(dims.d1) + " and input " +
                         std::to_string(dims.d2));
  }
  if (lmo_restarts == 0) throw std::invalid_argument("cone: lmo_restarts must be >= 1");
  if (kind != ConeKind::hull) return;
  if (generators.empty()) throw std::invalid_argument("cone hull: no generators");
  for (std::size_t k = 0; k < generators.size(); ++k) {
    const Matrix& g = generators[k];
    require_dims(g, dims, "cone hull generator");
    require_hermitian(g, "cone hull generator " + std::to_string(k));
    if (!is_psd(g, kPsdTol)) {
      throw NotPsdError("cone hull: generator " + std::to_string(k) +
                        " is not positive semi-definite");
    }
    if (!(g.trace().real() > 0.0)) {
      throw std::invalid_argument("cone hull: generator " + std::to_string(k) +
                                  " is zero");
    }
  }
}

std::string atom_kind(const Atom& atom) {
  switch (atom.payload.index()) {
    case 0: return "ray";
    case 1: return "product";
    case 2: return "unitary";
    default: return "generator";
  }
}

Matrix payload_matrix(const Payload& payload, const ConeSpec& cone) {
  if (const auto* r = std::get_if<RayPayload>(&payload)) return projector(r->v);
  if (const auto* p = std::get_if<ProductPayload>(&payload))
    return tensor_product(projector(p->first), projector(p->second));
  if (const auto* u = std::get_if<UnitaryPayload>(&payload))
    return projector(vectorize(u->u)) / double(u->u.rows());
  const auto& g = std::get<GeneratorPayload>(payload);
  if (g.index >= cone.generators.size()) {
    throw std::out_of_range("generator index " + std::to_string(g.index));
  }
  const Matrix& m = cone.generators[g.index];
  return m / m.trace().real();
}

Matrix realize(const Atom& atom, const ConeSpec& cone) {
  return payload_matrix(atom.payload, cone) * atom.weight;
}

Matrix realize(std::span<const Atom> atoms, const ConeSpec& cone) {
  const std::size_t n = cone.dims.total();
  Matrix c(n, n);
  for (const auto& a : atoms) c += realize(a, cone);
  return c;
}

namespace {

/** M_a[i][j] = sum_pq conj(b_p) G[(i,p),(j,q)] b_q. */
Matrix reduce_second(const Matrix& g, const BipartiteDims& dims,
                     const CVector& b) {
  Matrix m(dims.d1, dims.d1);
  for (std::size_t i = 0; i < dims.d1; ++i)
    for (std::size_t j = 0; j < dims.d1; ++j) {
      Complex s = 0.0;
      for (std::size_t p = 0; p < dims.d2; ++p)
        for (std::size_t q = 0; q < dims.d2; ++q)
          s += std::conj(b[p]) * g(i * dims.d2 + p, j * dims.d2 + q) * b[q];
      m(i, j) = s;
    }
  return m.hermitian_part();
}

Matrix reduce_first(const Matrix& g, const BipartiteDims& dims,
                    const CVector& a) {
  Matrix m(dims.d2, dims.d2);
  for (std::size_t p = 0; p < dims.d2; ++p)
    for (std::size_t q = 0; q < dims.d2; ++q) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < dims.d1; ++i)
        for (std::size_t j = 0; j < dims.d1; ++j)
          s += std::conj(a[i]) * g(i * dims.d2 + p, j * dims.d2 + q) * a[j];
      m(p, q) = s;
    }
  return m.hermitian_part();
}

std::pair<double, CVector> min_eigenpair(const Matrix& m) {
  const EigenSystem es = eigh(m);
  return {es.values.front(), column(es.vectors, 0)};
}

double product_value(const Matrix& g, const CVector& a, const CVector& b) {
  const CVector psi = kron(a, b);
  return dot(psi, g * std::span<const Complex>(psi)).real();
}

/** Alternating minimisation from a given second factor. */
std::pair<double, ProductPayload> alternate(const Matrix& g,
                                            const BipartiteDims& dims,
                                            CVector b) {
  CVector a;
  double value = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    a = min_eigenpair(reduce_second(g, dims, b)).second;
    auto [v, nb] = min_eigenpair(reduce_first(g, dims, a));
    b = std::move(nb);
    const bool done = value - v <= 1e-14 * std::max(1.0, std::abs(v));
    value = v;
    if (done) break;
  }
  return {product_value(g, a, b), ProductPayload{a, b}};
}

double unitary_value(const Matrix& g, const Matrix& u) {
  const CVector v = vectorize(u);
  return dot(v, g * std::span<const Complex>(v)).real() / double(u.rows());
}

/** Monotone polar ascent of u^dagger (sI - G) u over vec(U), U unitary. */
std::pair<double, Matrix> unitary_search(const Matrix& g, Matrix u,
                                         double shift) {
  const std::size_t d = u.rows();
  double value = unitary_value(g, u);
  for (int it = 0; it < 500; ++it) {
    const CVector v = vectorize(u);
    CVector w = g * std::span<const Complex>(v);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = shift * v[k] - w[k];
    Matrix next = polar_unitary(unvectorize(w, d, d));
    const double nv = unitary_value(g, next);
    if (!(nv < value)) break;
    const bool done = value - nv <= 1e-14 * std::max(1.0, std::abs(nv));
    u = std::move(next);
    value = nv;
    if (done) break;
  }
  return {value, u};
}

}  // namespace

LmoResult product_lmo(const Matrix& g, const BipartiteDims& dims,
                      std::size_t restarts, std::uint64_t seed,
                      std::uint64_t stream) {
  require_dims(g, dims, "product_lmo");
  const Matrix gh = g.hermitian_part();
  LmoResult best{{1.0, ProductPayload{}}, std::numeric_limits<double>::infinity()};
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    CVector b;
    if (r == 0) {
      // Best rank-one approximation of the bottom eigenvector.
      const CVector psi = min_eigenpair(gh).second;
      const SingularSystem sv = svd(unvectorize(psi, dims.d1, dims.d2));
      b = column(sv.v, 0);
      for (auto& z : b) z = std::conj(z);
    } else {
      Rng rng = make_rng({seed, stream, r});
      b = random_unit_vector(rng, dims.d2);
    }
    auto [v, payload] = alternate(gh, dims, std::move(b));
    if (v < best.value) best = {{1.0, std::move(payload)}, v};
  }
  return best;
}

LmoResult lmo(const ConeSpec& cone, const Matrix& g, std::uint64_t stream) {
  require_dims(g, cone.dims, "lmo");
  const Matrix gh = g.hermitian_part();
  switch (cone.kind) {
    case ConeKind::psd: {
      auto [v, vec] = min_eigenpair(gh);
      return {{1.0, RayPayload{vec}}, v};
    }
    case ConeKind::sep:
      return product_lmo(gh, cone.dims, cone.lmo_restarts, cone.seed, stream);
    case ConeKind::ru: {
      const std::size_t d = cone.dims.d2;
      const EigenSystem es = eigh(gh);
      const double spread = es.values.back() - es.values.front();
      const double shift = es.values.back() + 1e-3 * std::max(spread, 1e-12);
      LmoResult best{{1.0, UnitaryPayload{Matrix::identity(d)}},
                     std::numeric_limits<double>::infinity()};
      for (std::size_t r = 0; r < cone.lmo_restarts; ++r) {
        Matrix u0;
        if (r == 0) {
          u0 = polar_unitary(unvectorize(column(es.vectors, 0), d, d));
        } else if (r == 1) {
          u0 = Matrix::identity(d);
        } else {
          Rng rng = make_rng({cone.seed, stream, r});
          u0 = haar_unitary(rng, d);
        }
        auto [v, u] = unitary_search(gh, std::move(u0), shift);
        if (v < best.value) best = {{1.0, UnitaryPayload{std::move(u)}}, v};
      }
      return best;
    }
    case ConeKind::hull: {
      LmoResult best{{1.0, GeneratorPayload{0}},
                     std::numeric_limits<double>::infinity()};
      for (std::size_t k = 0; k < cone.generators.size(); ++k) {
        const double v =
            hermitian_inner(gh, payload_matrix(GeneratorPayload{k}, cone));
        if (v < best.value) best = {{1.0, GeneratorPayload{k}}, v};
      }
      return best;
    }
  }
  throw std::logic_error("lmo: unknown cone");
}

constexpr double kKernelTol = 1e-10;

std::optional<ConicDecomposition> membership_decompose(const Matrix& c,
                                                       const ConeSpec& cone,
                                                       std::size_t budget) {
  cone.validate();
  require_dims(c, cone.dims, "membership_decompose");
  require_hermitian(c, "membership_decompose");
  const Matrix target = c.hermitian_part();
  const EigenSystem es = eigh(target);
  const double scale = std::max(1.0, std::abs(es.values.back()));
  if (es.values.front() < -kPsdTol * scale) return std::nullopt;

  ConicDecomposition out;
  if (cone.kind == ConeKind::psd) {
    for (std::size_t k = es.values.size(); k-- > 0;)
      if (es.values[k] > 0.0)
        out.atoms.push_back({es.values[k], RayPayload{column(es.vectors, k)}});
    out.residual = frobenius_norm(realize(std::span<const Atom>(out.atoms), cone) - target);
    if (out.residual > kDecompTol) return std::nullopt;
    return out;
  }

  ConeModel model;
  model.value = [&](const Matrix& x) { return frobenius_norm(x - target); };
  model.smoothed = [&](const Matrix& x, double, Matrix& grad) {
    grad = x - target;
    const double f = frobenius_norm(grad);
    return 0.5 * f * f;
  };
  model.measurements = hermitian_basis(cone.dims.total());
  for (const auto& b : model.measurements) model.targets.push_back(hermitian_inner(b, target));
  model.smooth = true;
  // Every atom of an exact decomposition lives in the range of C.
  for (std::size_t k = 0; k < es.values.size(); ++k)
    if (es.values[k] <= kKernelTol * scale) model.kernel.push_back(column(es.vectors, k));

  EngineOptions opt;
  opt.max_iter = budget;
  opt.trace_cap = 2.0 * std::max(target.trace().real(), 1e-12);
  opt.target = 0.5 * kDecompTol;
  opt.polish_below = std::numeric_limits<double>::infinity();
  opt.seed = cone.seed;
  const EngineResult res = minimize_over_cone(model, cone, opt);
  out.atoms = res.atoms;
  out.residual = res.value;
  if (!(out.residual <= kDecompTol)) return std::nullopt;
  return out;
}

}  // namespace qci
