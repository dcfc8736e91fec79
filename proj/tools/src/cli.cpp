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

#include "qci_cli/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "CLI11.hpp"
#include "qci/channel.hpp"
#include "qci/linalg.hpp"
#include "qci/orthogonal.hpp"

namespace qci::cli {

namespace {

using io::json;

struct Common {
  std::string in;
  std::string out;
  std::uint64_t seed = 0;
  ConfigFlags flags;
  std::string generators;
};

void emit(const Common& c, const json& body) {
  if (!c.out.empty()) io::write_file(c.out, io::envelope(body));
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::yes: return kExitOk;
    case Verdict::no: return kExitNo;
    case Verdict::unknown: break;
  }
  return kExitUnknown;
}

std::vector<Matrix> read_generators(const std::string& path) {
  if (path.empty()) return {};
  json j = io::read_file(path);
  if (j.is_array()) {
    std::vector<Matrix> out;
    for (const auto& m : j) out.push_back(io::matrix_from_json(m));
    return out;
  }
  return io::matrices_from_json(j, "generators");
}

// Largest trace-norm error of a map on a list of inputs.
template <class Map>
double max_error(const Map& phi, std::span<const Matrix> xs,
                 std::span<const Matrix> ys) {
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    worst = std::max(worst, trace_norm((phi(xs[i]) - ys[i]).hermitian_part()));
  }
  return worst;
}

int interpolate_orthogonal(const Common& c, std::ostream& out) {
  json j = io::read_file(c.in);
  OrthogonalFamily family = validate_family(io::matrices_from_json(j, "A"));
  std::vector<Matrix> b = io::matrices_from_json(j, "B");
  OrthogonalInterpolant result = build_interpolator(family, b);
  EbtCertificate cert = certify_ebt_on_span(family, result.channel);
  double delta = max_error(
      [&](const Matrix& x) { return apply_kraus(result.channel, x); },
      family.members(), b);

  json body = io::to_json(result.channel);
  body["choi"] = io::to_json(result.choi);
  body["delta"] = delta;
  body["all_rank_one"] = result.all_rank_one;
  body["ebt"] = {{"certified", cert.ebt},
                 {"identity_in_span", cert.identity_in_span},
                 {"span_residual", cert.span_residual},
                 {"tp_defect", cert.tp_defect},
                 {"rank_one", cert.rank_one}};
  if (result.all_rank_one)
    body["ensemble"] = io::to_json(holevo_from_rank1(result.channel));
  emit(c, body);
  out << verdict_line(cert.ebt ? "EBT" : "interpolated (EBT on span only)", delta)
      << '\n';
  return kExitOk;
}

int interpolate_cone(const Common& c, std::ostream& out) {
  io::ProgramFile file = io::program_from_json(io::read_file(c.in));
  SolveConfig cfg =
      validate_config(c.flags, std::move(file), read_generators(c.generators));
  SolveReport report = solve(cfg.spec, cfg.params);
  json body = io::to_json(report);
  body["program"] = io::to_json(cfg.spec, cfg.params.seed);
  emit(c, body);
  out << verdict_line(to_string(report.verdict), report.delta) << '\n';
  return verdict_exit(report.verdict);
}

double unitality_defect(const ChoiMatrix& ch) {
  return operator_norm(
      (partial_trace(ch.matrix, Factor::second, ch.dims) -
       Matrix::identity(ch.dims.d1)).hermitian_part());
}

json decomposition_json(const ConicDecomposition& d) {
  json atoms = json::array();
  for (const auto& a : d.atoms) atoms.push_back(io::to_json(a));
  return {{"atoms", std::move(atoms)}, {"residual", d.residual}};
}

int check(const Common& c, const std::string& what, std::ostream& out) {
  ChoiMatrix ch = io::channel_from_json(io::read_file(c.in)).as_choi();
  const double cp_defect = std::max(0.0, -min_eigenvalue(ch.matrix));
  const double tp_defect = ch.tp_defect();
  json body = {{"what", what},
               {"dims", {ch.dims.d1, ch.dims.d2}},
               {"cp_defect", cp_defect},
               {"tp_defect", tp_defect}};
  ConeSpec cone;
  cone.dims = ch.dims;
  cone.seed = c.seed;
  if (c.flags.lmo_restarts) cone.lmo_restarts = *c.flags.lmo_restarts;

  std::string verdict;
  double delta = 0.0;
  int code = kExitOk;
  const bool cp = cp_defect <= kPsdTol * std::max(1.0, trace_norm(ch.matrix));

  if (what == "cptp") {
    delta = std::max(cp_defect, tp_defect);
    const bool ok = cp && tp_defect <= kTpTol;
    verdict = ok ? "CPTP" : "not-CPTP";
    code = ok ? kExitOk : kExitNo;
  } else if (what == "ebt") {
    PptDecision ppt = ppt_test(ch);
    body["pt_min_eigenvalue"] = ppt.min_eigenvalue;
    const bool exact_ppt = ch.dims.d1 == 2 && ch.dims.d2 == 2;
    cone.kind = ConeKind::sep;
    std::optional<ConicDecomposition> dec;
    if (cp && ppt.accepted) dec = membership_decompose(ch.matrix, cone);
    if (dec) body["decomposition"] = decomposition_json(*dec);
    if (!cp || !ppt.accepted) {
      verdict = "not-EBT";
      delta = std::max(cp_defect, -ppt.min_eigenvalue);
      code = kExitNo;
    } else if (dec || exact_ppt) {
      verdict = "EBT-certified";
      delta = dec ? dec->residual : 0.0;
    } else {
      verdict = "inconclusive";
      code = kExitUnknown;
    }
  } else {  // ru
    if (ch.dims.d1 != ch.dims.d2)
      throw DimensionError("random-unitary check needs equal input and output dimensions");
    const double unital = unitality_defect(ch);
    body["unitality_defect"] = unital;
    cone.kind = ConeKind::ru;
    std::optional<ConicDecomposition> dec;
    const bool necessary = cp && tp_defect <= kTpTol && unital <= kTpTol;
    if (necessary) dec = membership_decompose(ch.matrix, cone);
    if (dec) body["decomposition"] = decomposition_json(*dec);
    if (!necessary) {
      verdict = "not-RU";
      delta = std::max({cp_defect, tp_defect, unital});
      code = kExitNo;
    } else if (dec) {
      verdict = "RU-certified";
      delta = dec->residual;
    } else {
      verdict = "inconclusive";
      code = kExitUnknown;
    }
  }
  body["verdict"] = verdict;
  body["delta"] = delta;
  emit(c, body);
  out << verdict_line(verdict, delta) << '\n';
  return code;
}

int convert(const Common& c, const std::string& to, std::ostream& out) {
  io::ChannelData data = io::channel_from_json(io::read_file(c.in));
  const bool want_choi = to.empty() ? data.kraus.has_value() : to == "choi";
  ChoiMatrix ref = data.as_choi();
  json body;
  double delta = 0.0;
  const std::size_t d = ref.in_dim();
  if (want_choi) {
    body = io::to_json(ref);
    if (data.kraus) {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
          Matrix e = Matrix::unit(d, i, k);
          delta = std::max(delta, frobenius_norm(apply_kraus(*data.kraus, e) -
                                                 apply_choi(ref, e)));
        }
    }
  } else {
    KrausChannel kraus = data.as_kraus();
    body = io::to_json(kraus);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) {
        Matrix e = Matrix::unit(d, i, k);
        delta = std::max(delta, frobenius_norm(apply_kraus(kraus, e) -
                                               apply_choi(ref, e)));
      }
  }
  emit(c, body);
  out << verdict_line(want_choi ? "converted to choi" : "converted to kraus", delta)
      << '\n';
  return kExitOk;
}

int witness(const Common& c, std::ostream& out) {
  json j = io::read_file(c.in);
  if (j.is_object() && j.contains("X")) {
    io::ProgramFile file = io::program_from_json(j);
    file.problem.validate();
    DualResult dual = gamma_dual(file.problem);
    const double feas_tol = c.flags.feas_tol.value_or(kFeasTol);
    const double bound = dual.certified ? std::max(0.0, -dual.gamma) : 0.0;
    json hs = json::array();
    for (const auto& h : dual.h) hs.push_back(io::to_json(h));
    const bool found = bound > feas_tol;
    json body = {{"gamma", dual.gamma},
                 {"certified", dual.certified},
                 {"feasibility_defect", dual.feasibility_defect},
                 {"lower_bound", bound},
                 {"H", std::move(hs)},
                 {"verdict", found ? "witness-found" : "no-witness"}};
    emit(c, body);
    out << verdict_line(found ? "witness-found" : "no-witness", bound) << '\n';
    return found ? kExitOk : kExitUnknown;
  }
  ChoiMatrix ch = io::channel_from_json(j).as_choi();
  const std::size_t restarts = c.flags.lmo_restarts.value_or(kDefaultLmoRestarts);
  WitnessResult w = entanglement_witness(ch, restarts, c.seed);
  json body = {{"found", w.found},
               {"witness", io::to_json(w.witness)},
               {"value", w.value},
               {"pair_minimum", w.pair_minimum},
               {"pair", {{"first", io::to_json(w.pair.first)},
                         {"second", io::to_json(w.pair.second)}}},
               {"verdict", w.found ? "witness-found" : "no-witness"}};
  emit(c, body);
  out << verdict_line(w.found ? "witness-found" : "no-witness", w.value) << '\n';
  return w.found ? kExitOk : kExitUnknown;
}

void add_common(CLI::App* app, Common& c, bool solver_flags) {
  app->add_option("--in", c.in, "input JSON file")->required();
  app->add_option("--out", c.out, "output JSON file");
  app->add_option("--seed", c.seed, "random seed (QCI_SEED overrides)");
  if (!solver_flags) return;
  app->add_option("--w", c.flags.w, "TP penalty weight");
  app->add_option("--tp-mode", c.flags.tp_mode, "penalty|exact|none")
      ->check(CLI::IsMember({"penalty", "exact", "none"}));
  app->add_option("--trace-cap", c.flags.trace_cap, "trace bound on C");
  app->add_option("--feas-tol", c.flags.feas_tol, "feasibility tolerance");
  app->add_option("--max-iter", c.flags.max_iter, "outer iterations");
  app->add_option("--lmo-restarts", c.flags.lmo_restarts, "LMO restarts");
  app->add_option("--generators", c.generators, "hull generators JSON file");
}

int dispatch(const std::vector<std::string>& argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"qci: interpolation by quantum channels", "qci"};
  app.require_subcommand(1);
  Common c;

  std::string method = "cone";
  CLI::App* interp = app.add_subcommand("interpolate", "construct an interpolating channel");
  add_common(interp, c, true);
  interp->add_option("--method", method, "orthogonal|cone")
      ->check(CLI::IsMember({"orthogonal", "cone"}));
  interp->add_option("--cone", c.flags.cone, "psd|sep|ru|hull")
      ->check(CLI::IsMember({"psd", "sep", "ru", "hull"}));

  std::string what;
  CLI::App* chk = app.add_subcommand("check", "test a channel for a property");
  add_common(chk, c, false);
  chk->add_option("--what", what, "cptp|ebt|ru")
      ->required()
      ->check(CLI::IsMember({"cptp", "ebt", "ru"}));
  chk->add_option("--lmo-restarts", c.flags.lmo_restarts, "LMO restarts");

  std::string to;
  CLI::App* conv = app.add_subcommand("convert", "convert between Kraus and Choi form");
  add_common(conv, c, false);
  conv->add_option("--to", to, "kraus|choi (default: the other form)")
      ->check(CLI::IsMember({"kraus", "choi"}));

  CLI::App* wit = app.add_subcommand("witness", "search for an infeasibility or entanglement witness");
  add_common(wit, c, false);
  wit->add_option("--feas-tol", c.flags.feas_tol, "feasibility tolerance");
  wit->add_option("--lmo-restarts", c.flags.lmo_restarts, "pair-search restarts");

  std::vector<const char*> args{"qci"};
  for (const auto& a : argv) args.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "qci: " << e.what() << '\n';
    return kExitUsage;
  }

  // The seed flag lives on each subcommand; resolve it once here.
  std::optional<std::uint64_t> seed_flag;
  for (CLI::App* sub : app.get_subcommands()) {
    if (sub->count("--seed") > 0) seed_flag = c.seed;
  }
  c.seed = resolve_seed(seed_flag);
  if (seed_flag || std::getenv("QCI_SEED")) c.flags.seed = c.seed;

  if (interp->parsed()) {
    return method == "orthogonal" ? interpolate_orthogonal(c, out)
                                  : interpolate_cone(c, out);
  }
  if (chk->parsed()) return check(c, what, out);
  if (conv->parsed()) return convert(c, to, out);
  return witness(c, out);
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (const char* env = std::getenv("QCI_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
  }
  return flag.value_or(0);
}

std::string verdict_line(const std::string& verdict, double delta) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", delta);
  return verdict + " delta=" + buf;
}

SolveConfig validate_config(const ConfigFlags& flags, io::ProgramFile file,
                            std::vector<Matrix> generators) {
  SolveConfig cfg;
  ProgramSpec& spec = cfg.spec;
  spec.problem = std::move(file.problem);
  spec.problem.validate();
  const double d = static_cast<double>(spec.problem.in_dim());

  try {
    if (flags.cone) file.cone = cone_kind_from_string(*flags.cone);
    if (flags.tp_mode) file.tp_mode = tp_mode_from_string(*flags.tp_mode);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!file.cone) throw ConfigError("no cone given (use --cone or the program's \"cone\")");
  spec.cone.kind = *file.cone;
  spec.cone.dims = spec.problem.choi_dims();
  spec.tp_mode = file.tp_mode.value_or(TpMode::penalty);

  if (!generators.empty()) file.generators = std::move(generators);
  if (spec.cone.kind == ConeKind::hull) {
    if (file.generators.empty())
      throw ConfigError("hull cone needs generators (--generators or \"generators\")");
    spec.cone.generators = std::move(file.generators);
  }
  spec.cone.lmo_restarts =
      flags.lmo_restarts.value_or(file.lmo_restarts.value_or(kDefaultLmoRestarts));
  if (spec.cone.lmo_restarts == 0) throw ConfigError("lmo_restarts must be positive");

  const double w = flags.w.value_or(file.w.value_or(default_w(spec.problem)));
  if (!(w > 0.0)) throw ConfigError("w must be positive");
  spec.w = w;
  const double cap =
      flags.trace_cap.value_or(file.trace_cap.value_or(default_trace_cap(spec.problem)));
  if (!(cap > d)) throw ConfigError("trace_cap must exceed the input dimension");
  spec.trace_cap = cap;

  SolveParams& p = cfg.params;
  p.feas_tol = flags.feas_tol.value_or(kFeasTol);
  if (!(p.feas_tol > 0.0)) throw ConfigError("feas_tol must be positive");
  if (flags.max_iter) p.max_iter = *flags.max_iter;
  if (p.max_iter == 0) throw ConfigError("max_iter must be positive");
  p.seed = flags.seed.value_or(file.seed.value_or(0));

  try {
    spec.validate();
    p.validate();
  } catch (const DimensionError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

int run(const std::vector<std::string>& argv, std::ostream& out,
        std::ostream& err) {
  try {
    return dispatch(argv, out, err);
  } catch (const ConfigError& e) {
    err << "qci: " << e.what() << '\n';
    return kExitUsage;
  } catch (const io::FormatError& e) {
    err << "qci: malformed input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const io::json::exception& e) {
    err << "qci: malformed JSON: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // DimensionError, FamilyError, NotHermitianError, NotPsdError, ...
    err << "qci: " << e.what() << '\n';
    return kExitData;
  } catch (const std::runtime_error& e) {
    err << "qci: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace qci::cli
