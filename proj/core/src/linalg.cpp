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

#include "qci/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qci {

namespace {

/// Rotation that zeroes the (p, q) entry of the Hermitian 2x2 block
/// [[app, apq], [conj(apq), aqq]]. Acting on columns p, q the matrix is
/// [[c, s], [-s * conj(e), c * conj(e)]] with e the phase of apq.
struct JacobiRotation {
  double c = 1.0;
  double s = 0.0;
  Complex e{1.0, 0.0};
};

JacobiRotation jacobi_rotation(double app, double aqq, Complex apq) {
  JacobiRotation r;
  const double g = std::abs(apq);
  r.e = apq / g;
  const double tau = (aqq - app) / (2.0 * g);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  r.c = 1.0 / std::sqrt(1.0 + t * t);
  r.s = t * r.c;
  return r;
}

void rotate_columns(Matrix& m, std::size_t p, std::size_t q,
                    const JacobiRotation& r) {
  const Complex ebar = std::conj(r.e);
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const Complex mp = m(k, p);
    const Complex mq = m(k, q);
    m(k, p) = r.c * mp - r.s * ebar * mq;
    m(k, q) = r.s * mp + r.c * ebar * mq;
  }
}

void rotate_rows_adjoint(Matrix& m, std::size_t p, std::size_t q,
                         const JacobiRotation& r) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const Complex mp = m(p, k);
    const Complex mq = m(q, k);
    m(p, k) = r.c * mp - r.s * r.e * mq;
    m(q, k) = r.s * mp + r.c * r.e * mq;
  }
}

CVector complete_orthonormal(const Matrix& basis, std::size_t filled) {
  // Returns a unit vector orthogonal to the first `filled` columns.
  const std::size_t n = basis.rows();
  CVector best;
  double best_norm = -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    CVector v(n, Complex(0.0, 0.0));
    v[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < filled; ++j) {
        const CVector col = column(basis, j);
        const Complex proj = dot(col, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= proj * col[i];
      }
    }
    const double nv = vector_norm(v);
    if (nv > best_norm) {
      best_norm = nv;
      best = v;
    }
  }
  return normalized(best);
}

}  // namespace

void require_dims(const Matrix& m, const BipartiteDims& dims, const char* what) {
  if (!m.is_square() || m.rows() != dims.total()) {
    throw DimensionError(std::string(what) + ": matrix " + shape_string(m) +
                         " does not match dims " + std::to_string(dims.d1) +
                         "x" + std::to_string(dims.d2));
  }
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0, 0.0)) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          out(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return out;
}

Matrix partial_trace(const Matrix& m, Factor which, const BipartiteDims& dims) {
  require_dims(m, dims, "partial_trace");
  const std::size_t d1 = dims.d1, d2 = dims.d2;
  if (which == Factor::first) {
    Matrix out(d2, d2);
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t p = 0; p < d2; ++p)
        for (std::size_t q = 0; q < d2; ++q)
          out(p, q) += m(i * d2 + p, i * d2 + q);
    return out;
  }
  Matrix out(d1, d1);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d1; ++j) {
      Complex acc = 0.0;
      for (std::size_t p = 0; p < d2; ++p) acc += m(i * d2 + p, j * d2 + p);
      out(i, j) = acc;
    }
  return out;
}

Matrix partial_transpose(const Matrix& m, Factor which,
                         const BipartiteDims& dims) {
  require_dims(m, dims, "partial_transpose");
  const std::size_t d1 = dims.d1, d2 = dims.d2;
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d1; ++j)
      for (std::size_t p = 0; p < d2; ++p)
        for (std::size_t q = 0; q < d2; ++q) {
          const Complex v = m(i * d2 + p, j * d2 + q);
          if (which == Factor::first)
            out(j * d2 + p, i * d2 + q) = v;
          else
            out(i * d2 + q, j * d2 + p) = v;
        }
  return out;
}

Matrix swap_factors(const Matrix& m, const BipartiteDims& dims) {
  require_dims(m, dims, "swap_factors");
  const std::size_t d1 = dims.d1, d2 = dims.d2;
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d1; ++j)
      for (std::size_t p = 0; p < d2; ++p)
        for (std::size_t q = 0; q < d2; ++q)
          out(p * d1 + i, q * d1 + j) = m(i * d2 + p, j * d2 + q);
  return out;
}

EigenSystem eigh(const Matrix& m) {
  require_hermitian(m, "eigh");
  const std::size_t n = m.rows();
  Matrix a = m.hermitian_part();
  Matrix v = Matrix::identity(n);

  const double scale = std::max(max_abs(a), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * scale * static_cast<double>(n)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const auto r = jacobi_rotation(a(p, p).real(), a(q, q).real(), apq);
        rotate_columns(a, p, q, r);
        rotate_rows_adjoint(a, p, q, r);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, r);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });
  EigenSystem es;
  es.values.resize(n);
  es.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]);
  }
  return es;
}

SingularSystem svd(const Matrix& m) {
  if (m.rows() < m.cols()) {
    SingularSystem t = svd(m.adjoint());
    return {std::move(t.v), std::move(t.values), std::move(t.u)};
  }
  const std::size_t rows = m.rows(), k = m.cols();
  Matrix w = m;
  Matrix v = Matrix::identity(k);
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += std::norm(w(i, p));
          beta += std::norm(w(i, q));
          gamma += std::conj(w(i, p)) * w(i, q);
        }
        if (std::abs(gamma) <= 1e-16 * std::sqrt(alpha * beta) ||
            std::abs(gamma) <= 1e-300)
          continue;
        rotated = true;
        const auto r = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(w, p, q, r);
        rotate_columns(v, p, q, r);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(k);
  for (std::size_t j = 0; j < k; ++j) sv[j] = vector_norm(column(w, j));
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sv[x] > sv[y]; });

  SingularSystem out;
  out.values.resize(k);
  out.u = Matrix(rows, k);
  out.v = Matrix(k, k);
  const double tiny = (sv.empty() ? 0.0 : sv[order[0]]) * 1e-300;
  std::size_t filled = 0;
  std::vector<std::size_t> deficient;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t src = order[j];
    out.values[j] = sv[src];
    for (std::size_t i = 0; i < k; ++i) out.v(i, j) = v(i, src);
    if (sv[src] > tiny && sv[src] > 0.0) {
      for (std::size_t i = 0; i < rows; ++i) out.u(i, j) = w(i, src) / sv[src];
      ++filled;
    } else {
      deficient.push_back(j);
    }
  }
  for (std::size_t j : deficient) {
    set_column(out.u, j, complete_orthonormal(out.u, filled));
    ++filled;
  }
  return out;
}

std::vector<double> singular_values(const Matrix& m) { return svd(m).values; }

Matrix polar_unitary(const Matrix& m) {
  require_square(m, "polar_unitary");
  const SingularSystem s = svd(m);
  return reunitarize(s.u * s.v.adjoint());
}

Norms norms(const Matrix& m) {
  const EigenSystem es = eigh(m);
  Norms out;
  for (double l : es.values) {
    out.trace_norm += std::abs(l);
    out.operator_norm = std::max(out.operator_norm, std::abs(l));
  }
  out.frobenius = frobenius_norm(m);
  return out;
}

double trace_norm(const Matrix& m) { return norms(m).trace_norm; }
double operator_norm(const Matrix& m) { return norms(m).operator_norm; }

double frobenius_norm(const Matrix& m) {
  double acc = 0.0;
  for (const auto& z : m.entries()) acc += std::norm(z);
  return std::sqrt(acc);
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hs_inner");
  Complex acc = 0.0;
  const auto ea = a.entries(), eb = b.entries();
  for (std::size_t k = 0; k < ea.size(); ++k) acc += std::conj(ea[k]) * eb[k];
  return acc;
}

double hermitian_inner(const Matrix& a, const Matrix& b) {
  return hs_inner(a, b).real();
}

Matrix spectral_apply(const EigenSystem& es,
                      const std::function<double(double)>& f) {
  const std::size_t n = es.values.size();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(es.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = es.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += vik * std::conj(es.vectors(j, k));
    }
  }
  return out;
}

Matrix spectral_apply(const Matrix& m, const std::function<double(double)>& f) {
  return spectral_apply(eigh(m), f);
}

double min_eigenvalue(const Matrix& m) { return eigh(m).values.front(); }

bool is_psd(const Matrix& m, double tol) {
  const EigenSystem es = eigh(m);
  const double scale =
      std::max({1.0, std::abs(es.values.front()), std::abs(es.values.back())});
  return es.values.front() >= -tol * scale;
}

std::pair<Matrix, Matrix> split_positive_negative(const Matrix& m) {
  const EigenSystem es = eigh(m);
  return {spectral_apply(es, [](double x) { return x > 0.0 ? x : 0.0; }),
          spectral_apply(es, [](double x) { return x < 0.0 ? -x : 0.0; })};
}

std::vector<Matrix> hermitian_basis(std::size_t n) {
  std::vector<Matrix> basis;
  basis.reserve(n * n);
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t s = 0; s < n; ++s) basis.push_back(Matrix::unit(n, s, s));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t) {
      Matrix re(n, n), im(n, n);
      re(s, t) = r;
      re(t, s) = r;
      im(t, s) = Complex(0.0, r);
      im(s, t) = Complex(0.0, -r);
      basis.push_back(std::move(re));
      basis.push_back(std::move(im));
    }
  return basis;
}

Matrix expi_hermitian(const Matrix& h) {
  const EigenSystem es = eigh(h);
  const std::size_t n = es.values.size();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex ph = std::polar(1.0, es.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = es.vectors(i, k) * ph;
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += vik * std::conj(es.vectors(j, k));
    }
  }
  return out;
}

double unitarity_defect(const Matrix& u) {
  require_square(u, "unitarity_defect");
  Matrix g = u.adjoint() * u - Matrix::identity(u.rows());
  return operator_norm(g.hermitian_part());
}

Matrix reunitarize(const Matrix& u) {
  require_square(u, "reunitarize");
  const std::size_t n = u.rows();
  Matrix x = u;
  for (int it = 0; it < 8; ++it) {
    Matrix g = x.adjoint() * x;
    double defect = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        defect = std::max(defect, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    if (defect < 1e-15) break;
    Matrix corr = Matrix::identity(n) * 3.0 - g;
    x = x * corr * 0.5;
  }
  return x;
}

}  // namespace qci
