// Copyright 2026 The hsid Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "hsid/error.hpp"
#include "hsid/estimate.hpp"
#include "oracle.hpp"

namespace hsid {
namespace {

using testing::deviation_data;
using testing::oracle_dataset;

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

RegressionProblem labelled(Eigen::MatrixXd H, Eigen::VectorXd y) {
  RegressionProblem p;
  for (Eigen::Index c = 0; c < H.cols(); ++c) {
    p.columns.push_back({RegressorColumn::Kind::kInput, 0, 1, static_cast<std::size_t>(c),
                         "x" + std::to_string(c)});
  }
  p.H = std::move(H);
  p.y = std::move(y);
  return p;
}

void ignore(const std::string&) {}

// Theta of the preset's output s in regressor order.
Eigen::VectorXd true_theta(const MimoHammersteinModel& m, std::size_t s) {
  const auto orders = orders_of(m).outputs[s];
  Eigen::VectorXd theta(static_cast<Eigen::Index>(orders.parameter_count()));
  Eigen::Index at = 0;
  for (double a : m.denominator(s)) theta(at++) = a;
  for (std::size_t j = 0; j < m.n_inputs(); ++j) {
    const Eigen::MatrixXd M = product_matrix(m.channel(s, j));
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      for (Eigen::Index l = 0; l < M.cols(); ++l) theta(at++) = M(i, l);
  }
  return theta;
}

TEST(Orders, FromPreset) {
  const auto o = orders_of(paper_preset());
  ASSERT_EQ(o.outputs.size(), 2U);
  EXPECT_EQ(o.outputs[0].n, 5U);
  EXPECT_EQ(o.outputs[0].inputs[0], (ChannelOrders{3, 1, 2}));
  EXPECT_EQ(o.outputs[0].inputs[1], (ChannelOrders{5, 3, 2}));
  EXPECT_EQ(o.outputs[1].inputs[1], (ChannelOrders{5, 3, 4}));
  EXPECT_EQ(o.outputs[0].max_lag(), 8U);
  EXPECT_EQ(o.outputs[0].parameter_count(), 5U + 2 * 4 + 2 * 6);
}

TEST(BuildRegressor, SmallestWindow) {
  Dataset d;
  d.inputs.push_back({"u", "", std::nullopt, {0.5, -1.0, 2.0}});
  d.outputs.push_back({"y", "", std::nullopt, {1.0, 3.0, -2.0}});
  const OutputOrders o{1, {ChannelOrders{0, 0, 1}}};
  const auto p = build_regressor(d, o, 0);
  ASSERT_EQ(p.H.rows(), 2);
  ASSERT_EQ(p.H.cols(), 2);
  EXPECT_EQ(p.first_sample, 1U);
  EXPECT_EQ(p.H(0, 0), -1.0);
  EXPECT_EQ(p.H(1, 0), -3.0);
  EXPECT_EQ(p.H(0, 1), -1.0);
  EXPECT_EQ(p.H(1, 1), 2.0);
  EXPECT_EQ(p.y(0), 3.0);
  EXPECT_EQ(p.y(1), -2.0);
  EXPECT_EQ(p.columns[0].label, "-y(k-1)");
  EXPECT_EQ(p.columns[1].label, "u(k)");
}

TEST(BuildRegressor, NominalWidthOrdersGiveTwentySevenColumns) {
  const auto data = deviation_data(oracle_dataset(1000));
  const OutputOrders o{3, {ChannelOrders{5, 1, 2}, ChannelOrders{5, 1, 2}}};
  const auto p = build_regressor(data, o, 0);
  EXPECT_EQ(p.H.cols(), 27);
  EXPECT_EQ(p.H.rows(), 1000 - 6);
  EXPECT_EQ(p.columns[3].label, "I_p(k-1)");
  EXPECT_EQ(p.columns[9].label, "I_p^2(k-1)");
  EXPECT_EQ(p.columns[15].label, "V_f(k-1)");
}

TEST(BuildRegressor, ColumnLayout) {
  const auto data = deviation_data(oracle_dataset(50));
  const OutputOrders o{2, {ChannelOrders{1, 2, 3}, ChannelOrders{0, 1, 1}}};
  const auto p = build_regressor(data, o, 1);
  const auto& y = data.outputs[1].values;
  const auto& u = data.inputs[0].values;
  const auto& w = data.inputs[1].values;
  const std::size_t k0 = p.first_sample;
  EXPECT_EQ(k0, 3U);
  for (Eigen::Index r = 0; r < p.H.rows(); ++r) {
    const std::size_t k = k0 + static_cast<std::size_t>(r);
    EXPECT_EQ(p.y(r), y[k]);
    EXPECT_EQ(p.H(r, 0), -y[k - 1]);
    EXPECT_EQ(p.H(r, 1), -y[k - 2]);
    EXPECT_EQ(p.H(r, 2), u[k - 2]);
    EXPECT_EQ(p.H(r, 3), u[k - 3]);
    EXPECT_EQ(p.H(r, 4), u[k - 2] * u[k - 2]);
    EXPECT_EQ(p.H(r, 6), u[k - 2] * u[k - 2] * u[k - 2]);
    EXPECT_EQ(p.H(r, 8), w[k - 1]);
  }
}

TEST(BuildRegressor, PresetTruthReproducesOutputExactly) {
  const auto model = paper_preset();
  const auto data = deviation_data(oracle_dataset(300));
  for (std::size_t s = 0; s < 2; ++s) {
    const auto p = build_regressor(data, orders_of(model), s);
    const Eigen::VectorXd r = p.y - p.H * true_theta(model, s);
    EXPECT_LE(r.lpNorm<Eigen::Infinity>(), 1e-14);
  }
}

TEST(BuildRegressor, Deterministic) {
  const auto data = deviation_data(oracle_dataset(200));
  const auto a = build_regressor(data, orders_of(paper_preset()), 0);
  const auto b = build_regressor(data, orders_of(paper_preset()), 0);
  EXPECT_TRUE((a.H.array() == b.H.array()).all());
}

TEST(BuildRegressor, NamesTheShortfall) {
  const auto data = deviation_data(oracle_dataset(10));
  const OutputOrders o{50, {ChannelOrders{0, 0, 1}, ChannelOrders{0, 0, 1}}};
  try {
    build_regressor(data, o, 0);
    FAIL() << "expected an error";
  } catch (const InvalidArgument& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("10"), std::string::npos) << what;
    EXPECT_NE(what.find("50"), std::string::npos) << what;
  }
}

TEST(BatchLs, SquareSystemExact) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd H = random_matrix(6, 6, rng);
  const Eigen::VectorXd theta = random_matrix(6, 1, rng).col(0);
  const auto sol = batch_ls(labelled(H, H * theta));
  EXPECT_LE((sol.theta - theta).norm(), 1e-12 * theta.norm());
  EXPECT_LE(sol.loss, 1e-24);
  EXPECT_EQ(sol.rank, 6U);
}

TEST(BatchLs, ResidualOrthogonality) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd H = random_matrix(80, 7, rng);
    const Eigen::VectorXd y = random_matrix(80, 1, rng).col(0);
    const auto sol = batch_ls(labelled(H, y));
    const Eigen::VectorXd g = H.transpose() * (y - H * sol.theta);
    EXPECT_LE(g.norm(), 1e-8 * H.norm() * y.norm());
  }
}

TEST(BatchLs, DuplicatedColumnNamesBoth) {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd H = random_matrix(30, 4, rng);
  H.col(3) = H.col(1);
  try {
    batch_ls(labelled(H, random_matrix(30, 1, rng).col(0)));
    FAIL() << "expected RankDeficientError";
  } catch (const RankDeficientError& e) {
    EXPECT_EQ(e.rank(), 3U);
    EXPECT_EQ(e.columns(), 4U);
    const std::string what = e.what();
    EXPECT_NE(what.find("x1"), std::string::npos) << what;
    EXPECT_NE(what.find("x3"), std::string::npos) << what;
    EXPECT_EQ(e.offending_columns(), (std::vector<std::string>{"x1", "x3"}));
  }
}

TEST(BatchLs, RankRevealingNeverThrows) {
  std::mt19937_64 rng(4);
  Eigen::MatrixXd H = random_matrix(20, 3, rng);
  H.col(2) = 2.0 * H.col(0);
  const auto sol = rank_revealing_ls(H, random_matrix(20, 1, rng).col(0));
  EXPECT_EQ(sol.rank, 2U);
}

TEST(BatchLs, PresetSubproblemRecoversProducts) {
  const auto model = paper_preset();
  const auto data = deviation_data(oracle_dataset());
  for (std::size_t s = 0; s < 2; ++s) {
    const auto sol = batch_ls(build_regressor(data, orders_of(model), s));
    const auto truth = true_theta(model, s);
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
      EXPECT_LE(std::abs(sol.theta(i) - truth(i)), 1e-6 * std::abs(truth(i))) << s << "," << i;
    }
  }
}

TEST(Rls, ScalarHandExample) {
  auto st = init_estimator(1, 1e6, ignore);
  st = rls_update(st, Eigen::VectorXd::Constant(1, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(st.theta(0), 2e6 / (1.0 + 1e6));
  EXPECT_NEAR(st.theta(0), 1.999998, 1e-6);
  EXPECT_EQ(st.samples_seen, 1U);
}

TEST(Rls, ZeroRegressorLeavesStateUnchanged) {
  auto st = init_estimator(3, 1e6, ignore);
  st.theta << 1.0, -2.0, 0.5;
  const auto next = rls_update(st, Eigen::VectorXd::Zero(3), 7.0);
  EXPECT_EQ(next.theta, st.theta);
  EXPECT_EQ(next.P, st.P);
}

TEST(Rls, Initialization) {
  const auto st = init_estimator(3, 1e6, ignore);
  EXPECT_EQ(st.P, Eigen::MatrixXd::Identity(3, 3) * 1e6);
  EXPECT_EQ(st.theta, Eigen::VectorXd::Zero(3));
  EXPECT_TRUE(st.is_positive_definite());
}

TEST(Rls, OutOfBracketWarns) {
  std::vector<std::string> warnings;
  const auto sink = [&](const std::string& w) { warnings.push_back(w); };
  init_estimator(2, 1e4, sink);
  ASSERT_EQ(warnings.size(), 1U);
  init_estimator(2, 1e11, sink);
  EXPECT_EQ(warnings.size(), 2U);
  init_estimator(2, 1e5, sink);
  init_estimator(2, 1e10, sink);
  EXPECT_EQ(warnings.size(), 2U);
}

TEST(Rls, RejectsBadArguments) {
  EXPECT_THROW(init_estimator(0, 1e6, ignore), InvalidArgument);
  EXPECT_THROW(init_estimator(2, 0.0, ignore), InvalidArgument);
  EXPECT_THROW(init_estimator(2, -1.0, ignore), InvalidArgument);
  const auto st = init_estimator(2, 1e6, ignore);
  EXPECT_THROW(rls_update(st, Eigen::VectorXd::Zero(3), 1.0), InvalidArgument);
  EXPECT_THROW(rls_update(st, Eigen::Vector2d(NAN, 1.0), 1.0), InvalidArgument);
  EXPECT_THROW(rls_update(st, Eigen::Vector2d(1.0, 1.0), INFINITY), InvalidArgument);
}

TEST(Rls, CovarianceStaysSymmetricPositiveDefinite) {
  std::mt19937_64 rng(5);
  auto st = init_estimator(5, 1e6, ignore);
  for (int k = 0; k < 10000; ++k) {
    st = rls_update(st, random_matrix(5, 1, rng).col(0), 0.0);
  }
  EXPECT_EQ(st.P, st.P.transpose());
  EXPECT_TRUE(st.is_positive_definite());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(st.P);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Rls, MatchesBatchAtLargePrior) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng() % 30);
    const Eigen::Index rows = 2 * dim + 20 + static_cast<Eigen::Index>(rng() % 400);
    const Eigen::MatrixXd H = random_matrix(rows, dim, rng);
    const Eigen::VectorXd y =
        H * random_matrix(dim, 1, rng).col(0) + 0.1 * random_matrix(rows, 1, rng).col(0);
    const auto prob = labelled(H, y);
    const auto rls = rls_fit(prob, 1e9, ignore);
    const auto batch = batch_ls(prob);
    EXPECT_LE((rls.theta - batch.theta).norm(), 1e-6 * batch.theta.norm());
  }
}

TEST(Separation, ExactOuterProduct) {
  Eigen::MatrixXd M(2, 3);
  M << 2.0, 1.0, 0.3, 1.0, 0.5, 0.15;
  const auto split = rank_one_split(M);
  ASSERT_EQ(split.r.size(), 2U);
  EXPECT_EQ(split.r[0], 1.0);
  EXPECT_NEAR(split.r[1], 0.5, 1e-15);
  EXPECT_NEAR(split.b[0], 2.0, 1e-15);
  EXPECT_NEAR(split.b[1], 1.0, 1e-15);
  EXPECT_NEAR(split.b[2], 0.3, 1e-15);
  EXPECT_LE(split.residual_ratio, 1e-15);
}

TEST(Separation, LinearChannelKeepsRow) {
  Eigen::MatrixXd M(1, 4);
  M << 0.1, -0.2, 0.3, 0.05;
  const auto split = rank_one_split(M);
  EXPECT_EQ(split.r, std::vector<double>{1.0});
  for (int l = 0; l < 4; ++l) EXPECT_NEAR(split.b[static_cast<std::size_t>(l)], M(0, l), 1e-16);
}

TEST(Separation, ProjectionOnRankOneMatrices) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng() % 4);
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng() % 6);
    Eigen::VectorXd r = random_matrix(p, 1, rng).col(0);
    r(0) = 1.0;
    const Eigen::MatrixXd M = r * random_matrix(m, 1, rng).col(0).transpose();
    const auto split = rank_one_split(M);
    const Eigen::Map<const Eigen::VectorXd> rr(split.r.data(), p);
    const Eigen::Map<const Eigen::VectorXd> bb(split.b.data(), m);
    EXPECT_LE((rr * bb.transpose() - M).norm(), 1e-12 * M.norm());
  }
}

TEST(Separation, ZeroLeadingRowRejected) {
  Eigen::MatrixXd M(2, 2);
  M << 0.0, 0.0, 1.0, 2.0;
  EXPECT_THROW(rank_one_split(M), InvalidArgument);
}

TEST(Separation, PresetParametersRoundTrip) {
  const auto model = paper_preset();
  for (std::size_t s = 0; s < 2; ++s) {
    const auto orders = orders_of(model).outputs[s];
    const auto sep = separate_parameters(true_theta(model, s), orders);
    EXPECT_EQ(sep.a, model.denominator(s));
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& ch = model.channel(s, j);
      for (std::size_t i = 0; i < ch.nonlinearity.coeffs.size(); ++i) {
        EXPECT_NEAR(sep.channels[j].nonlinearity.coeffs[i], ch.nonlinearity.coeffs[i],
                    1e-12 * std::abs(ch.nonlinearity.coeffs[i]));
      }
      for (std::size_t l = 0; l < ch.dynamics.b.size(); ++l) {
        EXPECT_NEAR(sep.channels[j].b[l], ch.dynamics.b[l], 1e-12 * std::abs(ch.dynamics.b[l]));
      }
    }
  }
}

TEST(EstimateModel, NoiselessOracleRecoversPresetDegreeTwoCoefficient) {
  const auto est = estimate_model(deviation_data(oracle_dataset()), orders_of(paper_preset()),
                                  {150.0, 7.0}, {0.0, 0.0});
  EXPECT_NEAR(est.channel(0, 0).nonlinearity.coeffs[0], -0.01476, 1e-4);
  EXPECT_EQ(est.inputs[0].operating_point, 150.0);
  EXPECT_EQ(est.outputs[1].name, "H_f");
  EXPECT_EQ(est.denominator(0), est.channel(0, 1).dynamics.a);
}

}  // namespace
}  // namespace hsid
