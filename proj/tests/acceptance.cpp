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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Every tolerance and budget is pinned here.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "qci/orthogonal.hpp"
#include "qci/random.hpp"
#include "qci/solver.hpp"
#include "qci_cli/cli.hpp"
#include "qci_cli/json_io.hpp"
#include "support.hpp"

namespace qci {
namespace {

// Pinned tolerances and budgets.
constexpr double kOrthInterp = 1e-9;
constexpr double kOrthRank = 1e-10;
constexpr double kOrthTrace = 1e-9;
constexpr double kOrthSeconds = 5.0;
constexpr double kLpFeas = 1e-6;
constexpr double kLpSeconds = 60.0;
constexpr double kDualGap = 5e-3;
constexpr double kDualSeconds = 120.0;
constexpr double kSepFeas = 1e-6;
constexpr std::size_t kSepIterations = 200;
constexpr double kSepGap = 0.4;
constexpr double kRuFeas = 1e-6;
constexpr double kRuUnitary = 1e-8;
constexpr double kRuUnital = 1e-6;
constexpr double kHullGrid = 0.05;
constexpr double kHullAgree = 2e-2;
constexpr double kClosure = 1e-8;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double sum_trace_norm(const std::vector<Matrix>& ys) {
  double s = 0.0;
  for (const auto& y : ys) s += trace_norm(y);
  return s;
}

// 1. Orthogonal construction.
Outcome orthogonal_construction() {
  const auto t0 = Clock::now();
  Rng rng = make_rng({101});
  std::uniform_real_distribution<double> u(0.2, 2.0);
  double interp = 0, rank = 0, span_trace = 0, tp = 0;
  bool ppt_ok = true;
  int with_identity = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = 2 + t % 3;
    // Random partition of the coordinates into blocks, in a random basis;
    // every other instance drops the last block so I is not in the span.
    Matrix w = haar_unitary(rng, d);
    std::vector<std::size_t> label(d);
    std::size_t blocks = 0;
    for (std::size_t k = 0; k < d; ++k) {
      if (k == 0 || std::uniform_int_distribution<int>(0, 1)(rng)) ++blocks;
      label[k] = blocks - 1;
    }
    const bool full = t % 2 == 0 || blocks == 1;
    std::vector<Matrix> a, b;
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      if (!full && blk + 1 == blocks) break;
      std::vector<double> diag(d, 0.0);
      for (std::size_t k = 0; k < d; ++k) diag[k] = label[k] == blk ? 1.0 : 0.0;
      Matrix ai = w * Matrix::diagonal(diag) * w.adjoint() * u(rng);
      ai = ai.hermitian_part();
      b.push_back(random_state(rng, d) * ai.trace().real());
      a.push_back(ai);
    }
    OrthogonalFamily fam = validate_family(a);
    OrthogonalInterpolant res = build_interpolator(fam, b);
    for (std::size_t i = 0; i < a.size(); ++i)
      interp = std::max(interp, trace_norm((apply_kraus(res.channel, a[i]) - b[i]).hermitian_part()));
    for (const auto& op : res.channel.ops()) {
      std::vector<double> s = singular_values(op);
      if (s.size() > 1) rank = std::max(rank, s[1]);
    }
    for (int r = 0; r < 5; ++r) {
      Matrix x = Matrix::zeros(d, d);
      for (const auto& ai : a) x += ai * std::normal_distribution<double>()(rng);
      span_trace = std::max(span_trace, std::abs(apply_kraus(res.channel, x).trace().real() - x.trace().real()));
    }
    if (full) {
      ++with_identity;
      tp = std::max(tp, res.channel.tp_defect());
      if (d == 2) ppt_ok = ppt_ok && is_ebt_qubit(choi_from_kraus(res.channel)).accepted;
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = interp <= kOrthInterp && rank <= kOrthRank && span_trace <= kOrthTrace &&
           tp <= kOrthTrace && ppt_ok && secs < kOrthSeconds;
  o.detail = fmt("interp %.2e, sigma2 %.2e, span-trace %.2e, TP(I in span, %d cases) %.2e, PPT %s, %.2fs",
                 interp, rank, span_trace, with_identity, tp, ppt_ok ? "ok" : "FAILED", secs);
  return o;
}

// 2. Commuting instances against the classical LP.
Outcome lp_equivalence() {
  const auto t0 = Clock::now();
  Rng rng = make_rng({202});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int disagreements = 0, feasible = 0;
  for (int t = 0; t < 30; ++t) {
    const std::size_t d = 2 + t % 3;
    const std::size_t n = 1 + (t / 3) % 3;
    std::vector<std::vector<double>> a(n, std::vector<double>(d)), b(n, std::vector<double>(d, 0.0));
    for (auto& ai : a)
      for (auto& x : ai) x = u(rng);
    if (t % 2 == 0) {
      // Outputs pushed through a hidden stochastic matrix: feasible.
      std::vector<double> dm(d * d);
      for (std::size_t p = 0; p < d; ++p) {
        double s = 0;
        for (std::size_t q = 0; q < d; ++q) s += (dm[p * d + q] = u(rng) * u(rng));
        for (std::size_t q = 0; q < d; ++q) dm[p * d + q] /= s;
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < d; ++p)
          for (std::size_t q = 0; q < d; ++q) b[i][q] += a[i][p] * dm[p * d + q];
    } else {
      // Trace-matched random outputs: feasibility is decided by the LP.
      for (std::size_t i = 0; i < n; ++i) {
        double sa = 0, sb = 0;
        for (double x : a[i]) sa += x;
        for (auto& x : b[i]) sb += (x = u(rng));
        for (auto& x : b[i]) x *= sa / sb;
      }
    }
    const bool lp = lp_oracle(a, b).feasible;
    ProgramSpec spec;
    for (std::size_t i = 0; i < n; ++i) {
      spec.problem.x.push_back(Matrix::diagonal(a[i]));
      spec.problem.y.push_back(Matrix::diagonal(b[i]));
    }
    spec.cone.kind = ConeKind::psd;
    spec.tp_mode = TpMode::exact;
    SolveParams params;
    params.feas_tol = kLpFeas;
    params.dual_bound = false;
    params.seed = t;
    const bool sdp = solve(spec, params).delta <= kLpFeas;
    feasible += lp;
    disagreements += lp != sdp;
  }
  const double secs = seconds_since(t0);
  return {disagreements == 0 && secs < kLpSeconds,
          fmt("%d disagreements over 30 (%d LP-feasible), %.1fs", disagreements, feasible, secs)};
}

// 3. Primal value against the dual bound.
Outcome duality() {
  const auto t0 = Clock::now();
  Rng rng = make_rng({303});
  double worst = 0.0;
  bool certified = true;
  for (int t = 0; t < 20; ++t) {
    InterpolationProblem p;
    const std::size_t n = 2 + t % 2;
    p.x.push_back(random_state(rng, 2));
    for (std::size_t i = 1; i < n; ++i) p.x.push_back(random_hermitian(rng, 2));
    for (std::size_t i = 0; i < n; ++i) p.y.push_back(random_hermitian(rng, 2));
    // Any CP map beating C = 0 has tr C <= 2 sum ||Y|| / lambda_min(X_0).
    const double lmin = test::eigen_min_eigenvalue(p.x[0]);
    ProgramSpec spec;
    spec.problem = p;
    spec.cone.kind = ConeKind::psd;
    spec.tp_mode = TpMode::none;
    spec.trace_cap = 2.5 * sum_trace_norm(p.y) / lmin + 3.0;
    SolveParams params;
    params.dual_bound = false;
    params.seed = t;
    const double delta = solve(spec, params).delta;
    DualResult dual = gamma_dual(p);
    certified = certified && dual.certified;
    worst = std::max(worst, std::abs(delta + dual.gamma));
  }
  const double secs = seconds_since(t0);
  return {worst <= kDualGap && certified && secs < kDualSeconds,
          fmt("max |Delta + Gamma| = %.2e (dual %s), %.1fs", worst,
              certified ? "certified" : "NOT certified", secs)};
}

// 4. SEP cone soundness and completeness on measure-and-prepare data.
Outcome sep_soundness() {
  const auto t0 = Clock::now();
  Rng rng = make_rng({404});
  int certified = 0, unsound = 0, checked = 0;
  std::size_t max_iter_seen = 0;
  double worst_ppt = 0, worst_ens = 0;
  auto check = [&](const InterpolationProblem& p, std::uint64_t seed, std::size_t max_iter) {
    ProgramSpec spec;
    spec.problem = p;
    spec.cone.kind = ConeKind::sep;
    spec.tp_mode = TpMode::exact;
    SolveParams params;
    params.max_iter = max_iter;
    params.feas_tol = kSepFeas;
    params.dual_bound = false;
    params.seed = seed;
    SolveReport r = solve(spec, params);
    if (r.delta > kSepFeas) return false;
    ++checked;
    max_iter_seen = std::max(max_iter_seen, r.iterations);
    const double ppt = ppt_constrained_oracle(p).delta;
    double ens = r.ensemble ? r.ensemble->effect_defect() : 1e300;
    if (r.ensemble)
      for (std::size_t i = 0; i < p.count(); ++i)
        ens = std::max(ens, trace_norm((r.ensemble->apply(p.x[i]) - p.y[i]).hermitian_part()));
    worst_ppt = std::max(worst_ppt, ppt);
    worst_ens = std::max(worst_ens, ens);
    const bool ok = ppt <= kSepFeas && ens <= kSepFeas && is_ebt_qubit(ChoiMatrix(r.c, {2, 2})).accepted;
    unsound += !ok;
    return true;
  };
  for (int t = 0; t < 20; ++t) {
    InterpolationProblem p = test::measure_prepare_data(rng, 2, 2 + t % 3, 2 + t % 3);
    certified += check(p, t, kSepIterations);
  }
  // Soundness also on data from generic channels, certified or not.
  for (int t = 0; t < 5; ++t) {
    KrausChannel ch = random_channel(rng, 2, 2, 2 + t % 3);
    InterpolationProblem p;
    for (int i = 0; i < 2; ++i) {
      p.x.push_back(random_state(rng, 2));
      p.y.push_back(apply_kraus(ch, p.x.back()));
    }
    check(p, 100 + t, 60);
  }
  const double secs = seconds_since(t0);
  return {certified == 20 && unsound == 0 && max_iter_seen <= kSepIterations,
          fmt("%d/20 certified (max %zu iterations), %d certified solves checked, %d unsound; "
              "max PPT-oracle delta %.2e, max ensemble error %.2e, %.1fs",
              certified, max_iter_seen, checked, unsound, worst_ppt, worst_ens, secs)};
}

// 5. SEP separation on identity data.
Outcome sep_separation() {
  const auto t0 = Clock::now();
  ProgramSpec spec;
  spec.problem = test::identity_data();
  spec.cone.kind = ConeKind::psd;
  spec.tp_mode = TpMode::exact;
  const double psd = solve(spec).delta;
  spec.cone.kind = ConeKind::sep;
  SolveParams params;
  params.dual_bound = false;
  const double sep = solve(spec, params).delta;
  const double pt = is_ebt_qubit(ChoiMatrix(test::identity_choi(2), {2, 2})).min_eigenvalue;
  return {sep > kSepGap && psd <= kSepFeas,
          fmt("SEP delta %.4f, PSD delta %.2e, PT eigenvalue of identity Choi %.3f, %.1fs",
              sep, psd, pt, seconds_since(t0))};
}

// 6. RU cone: mixed-unitary data certified, non-unital data bounded away.
Outcome random_unitary() {
  const auto t0 = Clock::now();
  Rng rng = make_rng({606});
  std::uniform_real_distribution<double> u(0.2, 1.0);
  int certified = 0;
  double worst_unitary = 0, worst_unital = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2;
    const std::size_t k = 1 + t % 3;
    std::vector<double> w(k);
    std::vector<Matrix> us;
    double s = 0;
    for (auto& x : w) s += (x = u(rng));
    for (auto& x : w) x /= s;
    for (std::size_t j = 0; j < k; ++j) us.push_back(haar_unitary(rng, d));
    InterpolationProblem p;
    for (int i = 0; i < 3; ++i) {
      p.x.push_back(random_state(rng, d));
      Matrix y = Matrix::zeros(d, d);
      for (std::size_t j = 0; j < k; ++j) y += us[j] * p.x.back() * us[j].adjoint() * w[j];
      p.y.push_back(y);
    }
    ProgramSpec spec;
    spec.problem = p;
    spec.cone.kind = ConeKind::ru;
    spec.tp_mode = TpMode::exact;
    SolveParams params;
    params.feas_tol = kRuFeas;
    params.dual_bound = false;
    params.seed = t;
    SolveReport r = solve(spec, params);
    if (r.delta > kRuFeas) continue;
    ++certified;
    for (const auto& a : r.atoms)
      worst_unitary = std::max(worst_unitary, unitarity_defect(std::get<UnitaryPayload>(a.payload).u));
    worst_unital = std::max(worst_unital, operator_norm((partial_trace(r.c, Factor::second, r.dims) -
                                                         Matrix::identity(d)).hermitian_part()));
  }
  // Amplitude damping on the maximally mixed input: every unital map keeps
  // I/2 fixed, so delta >= ||I/2 - AD(I/2)||_tr = gamma.
  double worst_bound = 1e300;
  bool bound_ok = true;
  for (double gamma : {0.1, 0.3, 0.6, 0.9}) {
    InterpolationProblem p;
    p.x = {Matrix::identity(2) / 2.0};
    std::vector<double> out{(1 + gamma) / 2, (1 - gamma) / 2};
    p.y = {Matrix::diagonal(out)};
    ProgramSpec spec;
    spec.problem = p;
    spec.cone.kind = ConeKind::ru;
    spec.tp_mode = TpMode::exact;
    SolveParams params;
    params.dual_bound = false;
    const double delta = solve(spec, params).delta;
    worst_bound = std::min(worst_bound, delta - gamma);
    bound_ok = bound_ok && delta >= gamma - kRuFeas;
  }
  return {certified == 20 && worst_unitary <= kRuUnitary && worst_unital <= kRuUnital && bound_ok,
          fmt("%d/20 certified, unitarity %.2e, unitality %.2e; amplitude damping min(delta - gamma) %.2e, %.1fs",
              certified, worst_unitary, worst_unital, worst_bound, seconds_since(t0))};
}

// 7. Hull of fixed EBT channels against an exhaustive simplex grid.
Outcome hull_grid() {
  const auto t0 = Clock::now();
  Rng rng = make_rng({707});
  // Four fixed EBT qubit channels: two replacement maps and two
  // measure-and-prepare maps with fixed states.
  std::vector<ChoiMatrix> gens;
  Rng fixed = make_rng({7070});
  for (int g = 0; g < 4; ++g) {
    HolevoEnsemble e = test::random_measure_prepare(fixed, 2, g < 2 ? 1 : g);
    Matrix c = Matrix::zeros(4, 4);
    for (const auto& pr : e.pairs) c += tensor_product(pr.state, pr.effect.transpose());
    gens.push_back(ChoiMatrix(c, {2, 2}));
  }
  std::vector<Matrix> gm;
  for (const auto& g : gens) gm.push_back(g.matrix);
  const int steps = static_cast<int>(std::lround(1.0 / kHullGrid));
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    InterpolationProblem p;
    for (int i = 0; i < 3; ++i) {
      p.x.push_back(random_state(rng, 2));
      p.y.push_back(random_state(rng, 2));
    }
    // Exhaustive grid over the probability simplex.
    std::vector<std::vector<Matrix>> outs(4);
    for (int g = 0; g < 4; ++g)
      for (const auto& x : p.x) outs[g].push_back(apply_choi(gens[g], x));
    double grid = 1e300;
    for (int a = 0; a <= steps; ++a)
      for (int b = 0; a + b <= steps; ++b)
        for (int c = 0; a + b + c <= steps; ++c) {
          const double w[4] = {a * kHullGrid, b * kHullGrid, c * kHullGrid, (steps - a - b - c) * kHullGrid};
          double v = 0.0;
          for (std::size_t i = 0; i < p.count(); ++i) {
            Matrix m = -p.y[i];
            for (int g = 0; g < 4; ++g) m += outs[g][i] * w[g];
            v += test::eigen_trace_norm(m.hermitian_part());
          }
          grid = std::min(grid, v);
        }
    ProgramSpec spec;
    spec.problem = p;
    spec.cone.kind = ConeKind::hull;
    spec.cone.generators = gm;
    spec.tp_mode = TpMode::exact;
    SolveParams params;
    params.dual_bound = false;
    params.seed = t;
    const double delta = solve(spec, params).delta;
    worst = std::max(worst, std::abs(delta - grid));
  }
  return {worst <= kHullAgree, fmt("max |delta_hull - delta_grid| = %.2e, %.1fs", worst, seconds_since(t0))};
}

// 8. Nonnegative combinations of atoms stay decomposable.
Outcome closure() {
  const auto t0 = Clock::now();
  Rng rng = make_rng({808});
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::string detail;
  bool pass = true;
  std::vector<Matrix> gens;
  for (int g = 0; g < 5; ++g) gens.push_back(random_state(rng, 4, 1 + g % 3) * 2.0);
  for (ConeKind kind : {ConeKind::psd, ConeKind::sep, ConeKind::ru, ConeKind::hull}) {
    ConeSpec cone;
    cone.kind = kind;
    cone.dims = {2, 2};
    if (kind == ConeKind::hull) cone.generators = gens;
    int failures = 0;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      Matrix c = Matrix::zeros(4, 4);
      for (int k = 0; k < 2 + t % 2; ++k)
        c += realize(random_atom(cone, u(rng), 808 + t, k), cone);
      auto dec = membership_decompose(c, cone);
      if (!dec || dec->residual > kClosure) {
        ++failures;
        continue;
      }
      worst = std::max(worst, frobenius_norm(realize(dec->atoms, cone) - c));
    }
    pass = pass && failures == 0 && worst <= kClosure;
    detail += fmt("%s %d/100 (max residual %.1e); ", to_string(kind).c_str(), 100 - failures, worst);
  }
  detail += fmt("%.1fs", seconds_since(t0));
  return {pass, detail};
}

// 9. Repeated solver runs serialize identically.
Outcome determinism() {
  const auto t0 = Clock::now();
  Rng rng = make_rng({909});
  int mismatches = 0, runs = 0;
  for (ConeKind kind : {ConeKind::psd, ConeKind::sep, ConeKind::ru, ConeKind::hull}) {
    for (int t = 0; t < 2; ++t) {
      ProgramSpec spec;
      spec.problem = test::measure_prepare_data(rng, 2, 2, 2);
      spec.cone.kind = kind;
      if (kind == ConeKind::hull)
        spec.cone.generators = {Matrix::identity(4) / 2.0, test::identity_choi(2)};
      spec.tp_mode = t == 0 ? TpMode::exact : TpMode::penalty;
      SolveParams params;
      params.seed = 42 + t;
      params.max_iter = 60;
      const std::string a = io::to_json(solve(spec, params)).dump();
      const std::string b = io::to_json(solve(spec, params)).dump();
      mismatches += a != b;
      ++runs;
    }
  }
  // Same command line twice through the CLI.
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qci_acceptance_det";
  fs::create_directories(dir);
  io::json xs = io::json::array(), ys = io::json::array();
  InterpolationProblem p = test::measure_prepare_data(rng, 2, 3, 3);
  for (auto& x : p.x) xs.push_back(io::to_json(x));
  for (auto& y : p.y) ys.push_back(io::to_json(y));
  io::write_file((dir / "p.json").string(), {{"X", xs}, {"Y", ys}, {"cone", "sep"}, {"tp_mode", "exact"}});
  std::string files[2];
  for (int k = 0; k < 2; ++k) {
    std::ostringstream out, err;
    const std::string target = (dir / ("r" + std::to_string(k) + ".json")).string();
    cli::run({"interpolate", "--in", (dir / "p.json").string(), "--out", target, "--seed", "7"}, out, err);
    std::ifstream in(target);
    std::stringstream ss;
    ss << in.rdbuf();
    files[k] = ss.str();
  }
  fs::remove_all(dir);
  const bool cli_same = !files[0].empty() && files[0] == files[1];
  return {mismatches == 0 && cli_same,
          fmt("%d/%d library reports identical, CLI report files %s, %.1fs", runs - mismatches, runs,
              cli_same ? "identical" : "DIFFER", seconds_since(t0))};
}

}  // namespace
}  // namespace qci

int main(int argc, char** argv) {
  using namespace qci;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"orthogonal construction", orthogonal_construction},
      {"LP oracle equivalence", lp_equivalence},
      {"duality", duality},
      {"SEP soundness", sep_soundness},
      {"SEP separation", sep_separation},
      {"RU cone", random_unitary},
      {"HULL vs grid", hull_grid},
      {"cone closure", closure},
      {"determinism", determinism},
  };
  // Optional argument: run a single criterion by number.
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != static_cast<int>(i + 1)) continue;
    Outcome o = criteria[i].second();
    std::printf("[%s] criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
