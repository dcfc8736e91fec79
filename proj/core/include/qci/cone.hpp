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

// Constraint cones for Choi matrices and their linear-minimization oracles.
//
// Every cone is generated by trace-one "payload" matrices; an Atom is a
// nonnegative weight times a payload, so the weights of a decomposition sum
// to the trace of the matrix it realises.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qci/linalg.hpp"
#include "qci/matrix.hpp"

namespace qci {

enum class ConeKind {
  psd,   // all PSD matrices
  sep,   // separable: sum p A (x) B over states
  ru,    // random unitary: sum p C_U
  hull,  // conic hull of user generators
};

std::string to_string(ConeKind kind);
ConeKind cone_kind_from_string(const std::string& s);

inline constexpr std::size_t kDefaultLmoRestarts = 8;

struct ConeSpec {
  ConeKind kind = ConeKind::psd;
  BipartiteDims dims;              // output (x) input
  std::vector<Matrix> generators;  // hull only, each PSD
  std::size_t lmo_restarts = kDefaultLmoRestarts;
  std::uint64_t seed = 0;

  /** Throws std::invalid_argument / DimensionError on a malformed spec. */
  void validate() const;
};

/** Unit ray |v><v| of the PSD cone. */
struct RayPayload {
  CVector v;
};

/** Pure product state |a><a| (x) |b><b|; `first` lives on factor 1. */
struct ProductPayload {
  CVector first;
  CVector second;
};

/** Normalised Choi matrix C_U / d of X -> U X U^dagger. */
struct UnitaryPayload {
  Matrix u;
};

/** Generator `index` of a hull cone, scaled to unit trace. */
struct GeneratorPayload {
  std::size_t index = 0;
};

using Payload =
    std::variant<RayPayload, ProductPayload, UnitaryPayload, GeneratorPayload>;

struct Atom {
  double weight = 0.0;
  Payload payload;
};

std::string atom_kind(const Atom& atom);

/** Trace-one matrix of a payload. */
Matrix payload_matrix(const Payload& payload, const ConeSpec& cone);
Matrix realize(const Atom& atom, const ConeSpec& cone);
Matrix realize(std::span<const Atom> atoms, const ConeSpec& cone);

struct LmoResult {
  Atom atom;     // weight 1
  double value;  // tr[G * payload]
};

/**
 * Approximate argmin of tr[G P] over trace-one extreme rays P of the cone.
 * Exact for PSD and HULL; SEP and RU use lmo_restarts seeded local searches
 * (best value wins, ties go to the lowest restart index). `stream` separates
 * the random starts of successive calls.
 */
LmoResult lmo(const ConeSpec& cone, const Matrix& g, std::uint64_t stream = 0);

/** Best pure product state for tr[G (a a^dagger (x) b b^dagger)]. */
LmoResult product_lmo(const Matrix& g, const BipartiteDims& dims,
                      std::size_t restarts, std::uint64_t seed,
                      std::uint64_t stream);

inline constexpr double kDecompTol = 1e-8;

struct ConicDecomposition {
  std::vector<Atom> atoms;
  double residual = 0.0;  // ||sum atoms - C||_F
};

/**
 * Constructive membership certificate: atoms whose sum matches C to
 * kDecompTol in Frobenius norm. std::nullopt is inconclusive, not a proof of
 * non-membership. `budget` bounds the outer iterations.
 */
std::optional<ConicDecomposition> membership_decompose(const Matrix& c,
                                                       const ConeSpec& cone,
                                                       std::size_t budget = 200);

}  // namespace qci
