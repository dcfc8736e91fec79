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

#include "qci_cli/json_io.hpp"

#include <fstream>
#include <sstream>

namespace qci::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::size_t count_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw FormatError(std::string("field '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FormatError("complex entries must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

json to_json(const Matrix& m) {
  json data = json::array();
  for (const Complex& z : m.entries()) data.push_back({z.real(), z.imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j) {
  const std::size_t rows = count_field(j, "rows");
  const std::size_t cols = count_field(j, "cols");
  const json& data = field(j, "data");
  if (!data.is_array()) throw FormatError("matrix data must be an array");
  if (data.size() != rows * cols) {
    throw DimensionError("matrix data has " + std::to_string(data.size()) +
                         " entries, expected " + std::to_string(rows * cols));
  }
  std::vector<Complex> entries;
  entries.reserve(data.size());
  for (const auto& z : data) entries.push_back(complex_from_json(z));
  return Matrix(rows, cols, std::move(entries));
}

json to_json(const CVector& v) {
  json out = json::array();
  for (const Complex& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

CVector vector_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("vector must be an array of [re, im]");
  CVector v;
  for (const auto& z : j) v.push_back(complex_from_json(z));
  return v;
}

std::vector<Matrix> matrices_from_json(const json& j, const char* key) {
  const json& arr = field(j, key);
  if (!arr.is_array()) throw FormatError(std::string("field '") + key + "' must be an array");
  std::vector<Matrix> out;
  for (const auto& m : arr) out.push_back(matrix_from_json(m));
  return out;
}

json to_json(const KrausChannel& ch) {
  json ops = json::array();
  for (const auto& op : ch.ops()) ops.push_back(to_json(op));
  return {{"in_dim", ch.in_dim()}, {"out_dim", ch.out_dim()}, {"kraus", std::move(ops)}};
}

json to_json(const ChoiMatrix& c) {
  return {{"choi", to_json(c.matrix)}, {"dims", {c.dims.d1, c.dims.d2}}};
}

json to_json(const HolevoEnsemble& e) {
  json pairs = json::array();
  for (const auto& p : e.pairs)
    pairs.push_back({{"state", to_json(p.state)}, {"effect", to_json(p.effect)}});
  return pairs;
}

ChoiMatrix ChannelData::as_choi() const {
  return choi ? *choi : choi_from_kraus(*kraus);
}

KrausChannel ChannelData::as_kraus() const {
  return kraus ? *kraus : kraus_from_choi(*choi);
}

ChannelData channel_from_json(const json& j) {
  ChannelData out;
  if (j.is_object() && j.contains("kraus")) {
    std::vector<Matrix> ops = matrices_from_json(j, "kraus");
    if (ops.empty()) throw FormatError("channel has no Kraus operators");
    out.kraus = KrausChannel(std::move(ops));
    if (j.contains("in_dim") && count_field(j, "in_dim") != out.kraus->in_dim())
      throw DimensionError("in_dim does not match the Kraus operators");
    if (j.contains("out_dim") && count_field(j, "out_dim") != out.kraus->out_dim())
      throw DimensionError("out_dim does not match the Kraus operators");
    return out;
  }
  if (j.is_object() && j.contains("choi")) {
    const json& dims = field(j, "dims");
    if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() ||
        !dims[1].is_number_integer()) {
      throw FormatError("dims must be [out_dim, in_dim]");
    }
    out.choi = ChoiMatrix(matrix_from_json(j.at("choi")),
                          {dims[0].get<std::size_t>(), dims[1].get<std::size_t>()});
    return out;
  }
  // A solve report carries its channel under "channel".
  if (j.is_object() && j.contains("channel")) return channel_from_json(j.at("channel"));
  throw FormatError("channel needs 'kraus', 'choi' or 'channel'");
}

json to_json(const Atom& atom) {
  json payload;
  if (const auto* r = std::get_if<RayPayload>(&atom.payload)) {
    payload = {{"v", to_json(r->v)}};
  } else if (const auto* p = std::get_if<ProductPayload>(&atom.payload)) {
    payload = {{"first", to_json(p->first)}, {"second", to_json(p->second)}};
  } else if (const auto* u = std::get_if<UnitaryPayload>(&atom.payload)) {
    payload = {{"u", to_json(u->u)}};
  } else {
    payload = {{"index", std::get<GeneratorPayload>(atom.payload).index}};
  }
  return {{"weight", atom.weight}, {"kind", atom_kind(atom)}, {"payload", std::move(payload)}};
}

ProgramFile program_from_json(const json& j) {
  ProgramFile out;
  out.problem.x = matrices_from_json(j, "X");
  out.problem.y = matrices_from_json(j, "Y");
  try {
    if (j.contains("cone")) out.cone = cone_kind_from_string(j.at("cone").get<std::string>());
    if (j.contains("tp_mode"))
      out.tp_mode = tp_mode_from_string(j.at("tp_mode").get<std::string>());
  } catch (const json::exception& e) {
    throw FormatError(e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  if (j.contains("generators")) out.generators = matrices_from_json(j, "generators");
  auto number = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_number()) throw FormatError(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
  };
  out.w = number("w");
  out.trace_cap = number("trace_cap");
  if (j.contains("seed")) out.seed = count_field(j, "seed");
  if (j.contains("lmo_restarts")) out.lmo_restarts = count_field(j, "lmo_restarts");
  return out;
}

json to_json(const ProgramSpec& spec, std::uint64_t seed) {
  json xs = json::array(), ys = json::array();
  for (const auto& x : spec.problem.x) xs.push_back(to_json(x));
  for (const auto& y : spec.problem.y) ys.push_back(to_json(y));
  json out = {{"X", std::move(xs)},
              {"Y", std::move(ys)},
              {"cone", to_string(spec.cone.kind)},
              {"tp_mode", to_string(spec.tp_mode)},
              {"seed", seed}};
  if (spec.w > 0.0) out["w"] = spec.w;
  if (spec.trace_cap > 0.0) out["trace_cap"] = spec.trace_cap;
  if (!spec.cone.generators.empty()) {
    json gens = json::array();
    for (const auto& g : spec.cone.generators) gens.push_back(to_json(g));
    out["generators"] = std::move(gens);
  }
  return out;
}

json to_json(const SolveReport& report) {
  json atoms = json::array();
  for (const auto& a : report.atoms) atoms.push_back(to_json(a));
  json residuals = json::array();
  for (const auto& s : report.residuals)
    residuals.push_back({{"P", to_json(s.p)}, {"Q", to_json(s.q)}});
  json out = {{"delta", report.delta},
              {"lambda", report.lambda},
              {"interpolation", report.interpolation},
              {"verdict", to_string(report.verdict)},
              {"lower_bound", report.lower_bound},
              {"converged", report.converged},
              {"iterations", report.iterations},
              {"history", report.history},
              {"C", to_json(report.c)},
              {"dims", {report.dims.d1, report.dims.d2}},
              {"atoms", std::move(atoms)},
              {"residuals", std::move(residuals)}};
  if (report.channel) out["channel"] = to_json(*report.channel);
  if (report.ensemble) out["ensemble"] = to_json(*report.ensemble);
  return out;
}

json envelope(const json& body) {
  json out = {{"version", kFormatVersion}};
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return out;
}

json parse(const std::string& text) { return json::parse(text); }

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace qci::io
