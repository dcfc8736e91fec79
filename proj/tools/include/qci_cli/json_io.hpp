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

// JSON encodings of matrices, channels, programs and solve reports.
//
//   Matrix   {"rows": n, "cols": m, "data": [[re, im], ...]}   row-major
//   Channel  {"in_dim": d, "out_dim": d', "kraus": [Matrix, ...]}
//            or {"choi": Matrix, "dims": [d', d]}
//   Program  {"X": [...], "Y": [...], "cone": "psd|sep|ru|hull",
//             "generators": [...]?, "tp_mode": "penalty|exact|none",
//             "w": real?, "trace_cap": real?, "seed": int?}
//   Family   {"A": [...], "B": [...]}
//
// Files written by the CLI carry an envelope {"version": 1, ...}.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qci/channel.hpp"
#include "qci/cone.hpp"
#include "qci/orthogonal.hpp"
#include "qci/program.hpp"
#include "qci/solver.hpp"

namespace qci::io {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

/** Input that parses as JSON but does not match the schema. */
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json to_json(const CVector& v);
CVector vector_from_json(const json& j);
std::vector<Matrix> matrices_from_json(const json& j, const char* key);

json to_json(const KrausChannel& ch);
json to_json(const ChoiMatrix& c);
json to_json(const HolevoEnsemble& e);

struct ChannelData {
  std::optional<KrausChannel> kraus;
  std::optional<ChoiMatrix> choi;

  ChoiMatrix as_choi() const;
  KrausChannel as_kraus() const;
};
ChannelData channel_from_json(const json& j);

json to_json(const Atom& atom);

struct ProgramFile {
  InterpolationProblem problem;
  std::optional<ConeKind> cone;
  std::vector<Matrix> generators;
  std::optional<TpMode> tp_mode;
  std::optional<double> w;
  std::optional<double> trace_cap;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> lmo_restarts;
};
ProgramFile program_from_json(const json& j);
json to_json(const ProgramSpec& spec, std::uint64_t seed);

json to_json(const SolveReport& report);

/** Adds "version": 1 in front of the body's fields. */
json envelope(const json& body);

/** Parses text; nlohmann parse errors surface as json::parse_error. */
json parse(const std::string& text);
json read_file(const std::string& path);
void write_file(const std::string& path, const json& j);

}  // namespace qci::io
