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

#include "qci/orthogonal.hpp"
#include "qci/random.hpp"
#include "support.hpp"

namespace qci {
namespace {

using test::max_diff;

constexpr double kTight = 1e-12;

Matrix diag(std::vector<double> v) { return Matrix::diagonal(v); }

TEST(ValidateFamily, Examples) {
  EXPECT_NO_THROW(validate_family({diag({1, 0}), diag({0, 1})}));
  try {
    validate_family({diag({1, 0}), diag({1, 1})});
    FAIL() << "expected FamilyError";
  } catch (const FamilyError& e) {
    EXPECT_EQ(e.first(), 0u);
    ASSERT_TRUE(e.second().has_value());
    EXPECT_EQ(*e.second(), 1u);
    EXPECT_NEAR(e.value(), 1.0, kTight);
  }
  EXPECT_NO_THROW(validate_family({Matrix::unit(3, 0, 0), Matrix::unit(3, 1, 1), Matrix::unit(3, 2, 2)}));
  EXPECT_THROW(validate_family({diag({1, -1})}), FamilyError);
  EXPECT_THROW(validate_family({diag({0, 0})}), FamilyError);
  EXPECT_THROW(validate_family({diag({1, 0}), diag({0, 0, 1})}), DimensionError);
}

TEST(TransportPlan, Examples) {
  std::vector<double> a{1, 0}, b{0.5, 0.5};
  TransportPlan d = transport_plan(a, b);
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t q = 0; q < 2; ++q) EXPECT_NEAR(d(p, q), 0.5, kTight);
  std::vector<double> ad = d.push_forward(a);
  EXPECT_NEAR(ad[0], 0.5, kTight);
  EXPECT_NEAR(ad[1], 0.5, kTight);

  std::vector<double> e{1, 0};
  TransportPlan f = transport_plan(e, e);
  EXPECT_NEAR(f(0, 0), 1.0, kTight);
  EXPECT_NEAR(f(1, 0), 1.0, kTight);
  EXPECT_NEAR(f(0, 1), 0.0, kTight);

  std::vector<double> a2{2, 1}, b3{1, 1, 1};
  TransportPlan g = transport_plan(a2, b3);
  EXPECT_EQ(g.m, 3u);
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t q = 0; q < 3; ++q) EXPECT_NEAR(g(p, q), 1.0 / 3.0, kTight);
  for (double v : g.push_forward(a2)) EXPECT_NEAR(v, 1.0, kTight);

  std::vector<double> bad{1, 1};
  EXPECT_THROW(transport_plan(a, bad), std::invalid_argument);
  std::vector<double> negative{-1, 2};
  EXPECT_THROW(transport_plan(negative, a), std::invalid_argument);
}

TEST(TransportPlan, RandomMarginals) {
  Rng rng = make_rng({1});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> a(2 + t % 3), b(1 + t % 4);
    double sa = 0, sb = 0;
    for (auto& x : a) sa += (x = u(rng));
    for (auto& x : b) sb += (x = u(rng));
    for (auto& x : b) x *= sa / sb;
    TransportPlan d = transport_plan(a, b);
    EXPECT_TRUE(d.row_stochastic(1e-12));
    std::vector<double> ad = d.push_forward(a);
    for (std::size_t q = 0; q < b.size(); ++q) EXPECT_NEAR(ad[q], b[q], 1e-12);
  }
}

TEST(Rank1Kraus, Examples) {
  Matrix id = Matrix::identity(2);
  std::vector<double> one{1, 0}, half{0.5, 0.5};
  TransportPlan plan{2, 2, {1, 0, 0, 1}};
  auto ops = rank1_kraus(id, id, plan);
  KrausChannel ch(ops);
  std::vector<double> a{0.3, 0.7};
  EXPECT_LT(max_diff(apply_kraus(ch, diag(a)), diag(a)), kTight);
  for (auto& op : ops) EXPECT_LT(rank_one_defect(op), 1e-10);

  TransportPlan mix{2, 2, {0.5, 0.5, 0.5, 0.5}};
  KrausChannel mixer(rank1_kraus(id, id, mix));
  EXPECT_LT(max_diff(apply_kraus(mixer, diag(one)), diag(half)), kTight);
}

TEST(Rank1Kraus, RandomPlansAreRankOne) {
  Rng rng = make_rng({2});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    TransportPlan d{3, 3, {}};
    for (int p = 0; p < 3; ++p) {
      double s = 0;
      std::vector<double> row(3);
      for (auto& x : row) s += (x = u(rng));
      for (auto x : row) d.entries.push_back(x / s);
    }
    for (auto& op : rank1_kraus(haar_unitary(rng, 3), haar_unitary(rng, 3), d))
      EXPECT_LT(rank_one_defect(op), 1e-10);
  }
}

TEST(BuildInterpolator, MeasurePrepare) {
  Rng rng = make_rng({3});
  Matrix r1 = random_state(rng, 2), r2 = random_state(rng, 2);
  Matrix e11 = Matrix::unit(2, 0, 0), e22 = Matrix::unit(2, 1, 1);
  auto fam = validate_family({e11, e22});
  std::vector<Matrix> b{r1, r2};
  OrthogonalInterpolant res = build_interpolator(fam, b);
  EXPECT_TRUE(res.all_rank_one);
  // Direct Holevo form X -> <1|X|1> r1 + <2|X|2> r2.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Matrix x = Matrix::unit(2, i, j);
      Matrix expected = x(0, 0) * r1 + x(1, 1) * r2;
      EXPECT_LT(max_diff(apply_kraus(res.channel, x), expected), 1e-10);
      EXPECT_LT(max_diff(apply_choi(res.choi, x), expected), 1e-10);
    }
  EbtCertificate cert = certify_ebt_on_span(fam, res.channel);
  EXPECT_TRUE(cert.identity_in_span);
  EXPECT_TRUE(cert.ebt);
}

TEST(BuildInterpolator, DiagonalProjection) {
  Matrix e11 = Matrix::unit(2, 0, 0), e22 = Matrix::unit(2, 1, 1);
  auto fam = validate_family({e11, e22});
  std::vector<Matrix> b{e11, e22};
  OrthogonalInterpolant res = build_interpolator(fam, b);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Matrix out = apply_kraus(res.channel, Matrix::unit(2, i, j));
      EXPECT_LT(max_diff(out, i == j ? Matrix::unit(2, i, j) : Matrix::zeros(2, 2)), 1e-10);
    }
}

TEST(BuildInterpolator, SinglePairAndCertificate) {
  auto fam = validate_family({diag({1, 0})});
  std::vector<Matrix> b{diag({0, 1})};
  OrthogonalInterpolant res = build_interpolator(fam, b);
  EXPECT_LT(max_diff(apply_kraus(res.channel, diag({1, 0})), diag({0, 1})), 1e-10);
  EbtCertificate cert = certify_ebt_on_span(fam, res.channel);
  EXPECT_FALSE(cert.identity_in_span);
  EXPECT_FALSE(cert.ebt);
  EXPECT_TRUE(cert.rank_one);
  // Certificate's TP defect agrees with the channel's own flag.
  EXPECT_NEAR(cert.tp_defect, res.channel.tp_defect(), kTight);
}

TEST(BuildInterpolator, CertificateMatchesTpFlag) {
  Rng rng = make_rng({4});
  for (int t = 0; t < 10; ++t) {
    auto fam = validate_family({Matrix::unit(3, 0, 0) * 2.0, Matrix::unit(3, 1, 1) + Matrix::unit(3, 2, 2)});
    std::vector<Matrix> b{random_state(rng, 3) * 2.0, random_state(rng, 3) * 2.0};
    OrthogonalInterpolant res = build_interpolator(fam, b);
    EbtCertificate cert = certify_ebt_on_span(fam, res.channel);
    EXPECT_TRUE(cert.identity_in_span);
    EXPECT_EQ(cert.ebt, res.channel.trace_preserving() && cert.rank_one);
    EXPECT_TRUE(cert.ebt);
  }
}

TEST(BuildInterpolator, RejectsMismatch) {
  auto fam = validate_family({diag({1, 0})});
  std::vector<Matrix> wrong_trace{diag({0, 2})};
  EXPECT_THROW(build_interpolator(fam, wrong_trace), std::invalid_argument);
  std::vector<Matrix> two{diag({0, 1}), diag({1, 0})};
  EXPECT_THROW(build_interpolator(fam, two), std::invalid_argument);
}

}  // namespace
}  // namespace qci
