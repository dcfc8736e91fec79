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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qci/random.hpp"
#include "qci_cli/cli.hpp"
#include "qci_cli/json_io.hpp"
#include "support.hpp"

namespace qci {
namespace {

namespace fs = std::filesystem;
using io::json;
using test::max_diff;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qci_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    unsetenv("QCI_SEED");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const json& j) const {
    io::write_file(path(name), j);
    return path(name);
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

json program_json(const InterpolationProblem& p, const std::string& cone,
                  const std::string& mode = "exact") {
  json xs = json::array(), ys = json::array();
  for (auto& x : p.x) xs.push_back(io::to_json(x));
  for (auto& y : p.y) ys.push_back(io::to_json(y));
  return {{"X", xs}, {"Y", ys}, {"cone", cone}, {"tp_mode", mode}};
}

TEST(JsonIo, MatrixRoundTrip) {
  Rng rng = make_rng({1});
  Matrix m = ginibre(rng, 2, 3);
  Matrix back = io::matrix_from_json(io::parse(io::to_json(m).dump()));
  EXPECT_EQ(back, m);  // dump uses round-trip precision
  EXPECT_THROW(io::matrix_from_json(json{{"rows", 2}, {"cols", 2}, {"data", json::array()}}),
               DimensionError);
  EXPECT_THROW(io::matrix_from_json(json{{"rows", 1}}), io::FormatError);
  EXPECT_THROW(io::matrix_from_json(json{{"rows", 1}, {"cols", 1}, {"data", {"x"}}}), io::FormatError);
}

TEST(JsonIo, ChannelForms) {
  Rng rng = make_rng({2});
  KrausChannel ch = random_channel(rng, 2, 3, 2);
  io::ChannelData k = io::channel_from_json(io::to_json(ch));
  ASSERT_TRUE(k.kraus.has_value());
  EXPECT_EQ(k.kraus->ops(), ch.ops());
  ChoiMatrix c = choi_from_kraus(ch);
  io::ChannelData cj = io::channel_from_json(io::to_json(c));
  ASSERT_TRUE(cj.choi.has_value());
  EXPECT_EQ(cj.choi->dims, c.dims);
  EXPECT_THROW(io::channel_from_json(json::object()), io::FormatError);
  json wrong = io::to_json(ch);
  wrong["in_dim"] = 5;
  EXPECT_THROW(io::channel_from_json(wrong), DimensionError);
}

TEST(JsonIo, ProgramFields) {
  json j = program_json(test::identity_data(), "sep", "penalty");
  j["w"] = 3.5;
  j["seed"] = 9;
  io::ProgramFile f = io::program_from_json(j);
  EXPECT_EQ(*f.cone, ConeKind::sep);
  EXPECT_EQ(*f.tp_mode, TpMode::penalty);
  EXPECT_DOUBLE_EQ(*f.w, 3.5);
  EXPECT_EQ(*f.seed, 9u);
  j["cone"] = "banana";
  EXPECT_THROW(io::program_from_json(j), io::FormatError);
}

TEST(ValidateConfig, DefaultsAndRejections) {
  io::ProgramFile f = io::program_from_json(program_json(test::identity_data(), "psd"));
  cli::SolveConfig cfg = cli::validate_config({}, f);
  double ytr = 0.0;
  for (auto& y : f.problem.y) ytr += trace_norm(y);
  EXPECT_NEAR(cfg.spec.w, 10.0 * (2.0 + ytr), 1e-12);
  EXPECT_NEAR(cfg.spec.trace_cap, 4.0, 1e-12);
  EXPECT_EQ(cfg.spec.cone.lmo_restarts, kDefaultLmoRestarts);
  EXPECT_EQ(cfg.params.feas_tol, kFeasTol);

  cli::ConfigFlags zero_w;
  zero_w.w = 0.0;
  EXPECT_THROW(cli::validate_config(zero_w, f), cli::ConfigError);
  cli::ConfigFlags low_cap;
  low_cap.trace_cap = 2.0;
  EXPECT_THROW(cli::validate_config(low_cap, f), cli::ConfigError);
  cli::ConfigFlags hull;
  hull.cone = "hull";
  EXPECT_THROW(cli::validate_config(hull, f), cli::ConfigError);
  EXPECT_NO_THROW(cli::validate_config(hull, f, {Matrix::identity(4)}));
  io::ProgramFile no_cone = f;
  no_cone.cone.reset();
  EXPECT_THROW(cli::validate_config({}, no_cone), cli::ConfigError);
}

TEST(Seed, EnvironmentOverridesFlag) {
  unsetenv("QCI_SEED");
  EXPECT_EQ(cli::resolve_seed(std::nullopt), 0u);
  EXPECT_EQ(cli::resolve_seed(5), 5u);
  setenv("QCI_SEED", "17", 1);
  EXPECT_EQ(cli::resolve_seed(5), 17u);
  unsetenv("QCI_SEED");
}

TEST(VerdictLine, NineSignificantDigits) {
  EXPECT_EQ(cli::verdict_line("yes", 1.0 / 3.0), "yes delta=0.333333333");
  EXPECT_EQ(cli::verdict_line("no", 2.0), "no delta=2");
}

TEST_F(CliTest, ConvertIdentityKraus) {
  std::string in = write("id.json", io::to_json(KrausChannel({Matrix::identity(2)})));
  ASSERT_EQ(run({"convert", "--in", in, "--out", path("choi.json")}), cli::kExitOk);
  json out = io::read_file(path("choi.json"));
  EXPECT_EQ(out["version"], 1);
  EXPECT_EQ(io::matrix_from_json(out["choi"]), test::identity_choi(2));
}

TEST_F(CliTest, ConvertRoundTrip) {
  Rng rng = make_rng({3});
  for (int t = 0; t < 5; ++t) {
    KrausChannel ch = random_channel(rng, 2 + t % 2, 2, 2 + t % 3);
    std::string in = write("k.json", io::to_json(ch));
    ASSERT_EQ(run({"convert", "--in", in, "--out", path("c.json")}), 0);
    ASSERT_EQ(run({"convert", "--in", path("c.json"), "--out", path("k2.json")}), 0);
    KrausChannel back = io::channel_from_json(io::read_file(path("k2.json"))).as_kraus();
    for (std::size_t i = 0; i < ch.in_dim(); ++i)
      for (std::size_t j = 0; j < ch.in_dim(); ++j) {
        Matrix e = Matrix::unit(ch.in_dim(), i, j);
        EXPECT_LT(max_diff(apply_kraus(back, e), apply_kraus(ch, e)), 1e-9);
      }
  }
}

TEST_F(CliTest, InterpolateOrthogonal) {
  Rng rng = make_rng({4});
  std::vector<Matrix> a{Matrix::unit(2, 0, 0), Matrix::unit(2, 1, 1)};
  std::vector<Matrix> b{random_state(rng, 2), random_state(rng, 2)};
  json j = {{"A", json::array()}, {"B", json::array()}};
  for (auto& m : a) j["A"].push_back(io::to_json(m));
  for (auto& m : b) j["B"].push_back(io::to_json(m));
  std::string in = write("fam.json", j);
  ASSERT_EQ(run({"interpolate", "--method", "orthogonal", "--in", in, "--out", path("ch.json")}), 0);
  EXPECT_EQ(out_.str().rfind("EBT delta=", 0), 0u) << out_.str();
  json out = io::read_file(path("ch.json"));
  KrausChannel ch = io::channel_from_json(out).as_kraus();
  for (auto& op : ch.ops()) EXPECT_LT(rank_one_defect(op), 1e-10);
  EXPECT_TRUE(out["ebt"]["certified"].get<bool>());
}

TEST_F(CliTest, CheckEbtDepolarizing) {
  std::string in = write("dep.json", io::to_json(ChoiMatrix(Matrix::identity(4) * 0.5, {2, 2})));
  ASSERT_EQ(run({"check", "--what", "ebt", "--in", in, "--out", path("r.json")}), 0);
  EXPECT_EQ(out_.str().rfind("EBT-certified", 0), 0u);
  json r = io::read_file(path("r.json"));
  ASSERT_TRUE(r.contains("decomposition"));
  for (auto& atom : r["decomposition"]["atoms"]) EXPECT_EQ(atom["kind"], "product");

  std::string id = write("id.json", io::to_json(KrausChannel({Matrix::identity(2)})));
  EXPECT_EQ(run({"check", "--what", "ebt", "--in", id}), cli::kExitNo);
  EXPECT_EQ(out_.str().rfind("not-EBT", 0), 0u);
  EXPECT_EQ(run({"check", "--what", "cptp", "--in", id}), cli::kExitOk);
  EXPECT_EQ(run({"check", "--what", "ru", "--in", in}), cli::kExitOk);
}

TEST_F(CliTest, InterpolateConeDeterministic) {
  Rng rng = make_rng({5});
  std::string in = write("p.json", program_json(test::measure_prepare_data(rng, 2, 3, 2), "sep"));
  ASSERT_EQ(run({"interpolate", "--cone", "sep", "--in", in, "--out", path("a.json"), "--seed", "3"}), 0);
  std::string line = out_.str();
  EXPECT_EQ(line.rfind("yes delta=", 0), 0u) << line;
  ASSERT_EQ(run({"interpolate", "--cone", "sep", "--in", in, "--out", path("b.json"), "--seed", "3"}), 0);
  EXPECT_EQ(out_.str(), line);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  json r = io::read_file(path("a.json"));
  for (const char* key : {"delta", "lambda", "converged", "iterations", "C", "atoms", "verdict"})
    EXPECT_TRUE(r.contains(key)) << key;
  // The report feeds straight into the channel verbs.
  EXPECT_EQ(run({"check", "--what", "ebt", "--in", path("a.json")}), cli::kExitOk);
  EXPECT_EQ(out_.str().rfind("EBT-certified", 0), 0u) << out_.str();
}

TEST_F(CliTest, ExitCodes) {
  std::string in = write("p.json", program_json(test::identity_data(), "psd"));
  EXPECT_EQ(run({"interpolate", "--in", in, "--w", "0"}), cli::kExitUsage);
  EXPECT_EQ(run({"interpolate", "--in", in, "--cone", "hull"}), cli::kExitUsage);
  EXPECT_EQ(run({"interpolate", "--in", in, "--bogus"}), cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), cli::kExitUsage);
  std::ofstream(path("bad.json")) << "{not json";
  EXPECT_EQ(run({"check", "--what", "cptp", "--in", path("bad.json")}), cli::kExitUsage);

  InterpolationProblem mixed;
  mixed.x = {Matrix::identity(2), Matrix::identity(3)};
  mixed.y = {Matrix::identity(2), Matrix::identity(2)};
  std::string dim = write("dim.json", program_json(mixed, "psd"));
  EXPECT_EQ(run({"interpolate", "--in", dim}), cli::kExitData);

  InterpolationProblem mismatch;
  mismatch.x = {Matrix::unit(2, 0, 0)};
  mismatch.y = {Matrix::unit(2, 0, 0) * 2.0};
  std::string no = write("no.json", program_json(mismatch, "psd"));
  EXPECT_EQ(run({"interpolate", "--in", no}), cli::kExitNo);
  EXPECT_EQ(run({"interpolate", "--in", path("missing.json")}), cli::kExitIo);
}

TEST_F(CliTest, WitnessVerbs) {
  std::string id = write("id.json", io::to_json(KrausChannel({Matrix::identity(2)})));
  EXPECT_EQ(run({"witness", "--in", id}), cli::kExitOk);
  InterpolationProblem t = test::identity_data();
  for (auto& y : t.y) y = y.transpose();
  std::string in = write("t.json", program_json(t, "psd", "none"));
  EXPECT_EQ(run({"witness", "--in", in, "--out", path("w.json")}), cli::kExitOk);
  json w = io::read_file(path("w.json"));
  EXPECT_GT(w["lower_bound"].get<double>(), 0.4);
}

}  // namespace
}  // namespace qci
