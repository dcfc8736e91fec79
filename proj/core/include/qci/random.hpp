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

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "qci/channel.hpp"
#include "qci/matrix.hpp"

namespace qci {

using Rng = std::mt19937_64;

/** Deterministic generator from a list of integers (seed, stream, ...). */
Rng make_rng(std::initializer_list<std::uint64_t> keys);

CVector random_complex_vector(Rng& rng, std::size_t n);
CVector random_unit_vector(Rng& rng, std::size_t n);
/** Complex Ginibre matrix (i.i.d. standard normal real and imaginary parts). */
Matrix ginibre(Rng& rng, std::size_t rows, std::size_t cols);
Matrix random_hermitian(Rng& rng, std::size_t n);
/** Density matrix of the given rank (rank 0 means full). */
Matrix random_state(Rng& rng, std::size_t n, std::size_t rank = 0);
Matrix haar_unitary(Rng& rng, std::size_t n);
/** CPTP channel with `count` Kraus operators from an isometry. */
KrausChannel random_channel(Rng& rng, std::size_t in_dim, std::size_t out_dim,
                            std::size_t count);

}  // namespace qci
