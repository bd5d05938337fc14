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

// Per-output regression, batch and recursive least squares, and the split of
// the estimated products r_i * b_l back into nonlinearity and numerator.
//
// For output s the regression row at sample k is
//
//   [-y_s(k-1) ... -y_s(k-n) | for each input j, for i = 1..p_j:
//                                u_j^i(k-d_j) ... u_j^i(k-d_j-m_j)]
//
// and the matching parameters are [a_1..a_n | r_i b_l ...] with r_1 = 1.

#ifndef HSID_ESTIMATE_HPP_
#define HSID_ESTIMATE_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hsid/dataset.hpp"
#include "hsid/error.hpp"
#include "hsid/model.hpp"

namespace hsid {

struct ChannelOrders {
  std::size_t m = 0;
  std::size_t delay = 0;
  std::size_t p = 1;

  bool operator==(const ChannelOrders&) const = default;
};

struct OutputOrders {
  std::size_t n = 0;
  std::vector<ChannelOrders> inputs;

  // Largest lag any regressor reaches back to.
  std::size_t max_lag() const;
  std::size_t parameter_count() const;
  void validate() const;

  bool operator==(const OutputOrders&) const = default;
};

struct StructureOrders {
  std::vector<OutputOrders> outputs;

  bool operator==(const StructureOrders&) const = default;
};

// Orders read off an existing model (used for re-identification with known
// structure).
StructureOrders orders_of(const MimoHammersteinModel& model);

struct RegressorColumn {
  enum class Kind { kOutput, kInput };
  Kind kind = Kind::kOutput;
  std::size_t signal = 0;  // output s or input j
  std::size_t power = 1;
  std::size_t lag = 1;
  std::string label;

  bool operator==(const RegressorColumn&) const = default;
};

struct RegressionProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd y;
  std::vector<RegressorColumn> columns;
  std::size_t first_sample = 0;  // sample index of row 0
};

RegressorColumn output_column(const Dataset& data, std::size_t output,
                              std::size_t lag);
RegressorColumn input_column(const Dataset& data, std::size_t input,
                             std::size_t power, std::size_t lag);

// Values of one regressor column over rows first_sample..N-1.
Eigen::VectorXd column_values(const Dataset& data, std::size_t output,
                              const RegressorColumn& column,
                              std::size_t first_sample);

// Builds the regression for `output`. Rows start at `first_sample` when given
// (it must cover the orders' maximum lag), otherwise at the maximum lag.
// Throws InvalidArgument when the data is too short for the orders.
RegressionProblem build_regressor(
    const Dataset& data, const OutputOrders& orders, std::size_t output,
    std::optional<std::size_t> first_sample = std::nullopt);
RegressionProblem build_regressor(const Dataset& data,
                                  const StructureOrders& orders,
                                  std::size_t output);

struct LsOptions {
  // Relative pivot threshold on the column-equilibrated triangular factor.
  double rank_tolerance = 1e-10;
};

struct LsSolution {
  Eigen::VectorXd theta;
  std::size_t rank = 0;
  double condition_estimate = 0.0;  // of the column-equilibrated matrix
  double loss = 0.0;                // mean squared residual
};

// Column-pivoted Householder QR on the equilibrated matrix. Never throws for
// rank deficiency: dependent columns get a zero coefficient and `rank`
// reports the numerical rank. The residual is the projection residual either
// way.
LsSolution rank_revealing_ls(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                             const LsOptions& options = {});

// Full-rank least squares. Throws RankDeficientError naming the dependent
// columns (and the columns they depend on).
LsSolution batch_ls(const RegressionProblem& problem,
                    const LsOptions& options = {});

inline constexpr double kMinAlphaSq = 1e5;
inline constexpr double kMaxAlphaSq = 1e10;
inline constexpr double kDefaultAlphaSq = 1e6;

struct EstimatorState {
  Eigen::VectorXd theta;
  Eigen::MatrixXd P;
  std::size_t samples_seen = 0;

  // Cholesky-based check.
  bool is_positive_definite() const;
};

// theta = 0, P = alpha_sq * I. Values outside [1e5, 1e10] are accepted with a
// warning; non-positive alpha_sq or dim == 0 throw.
EstimatorState init_estimator(std::size_t dim, double alpha_sq = kDefaultAlphaSq,
                              const WarningSink& warn = stderr_warning_sink());

// One rank-one step:
//   g      = P phi / (1 + phi' P phi)
//   theta <- theta + g (y - phi' theta)
//   P     <- P - g phi' P, then symmetrized.
EstimatorState rls_update(EstimatorState state, const Eigen::VectorXd& phi,
                          double y);

// Runs rls_update over every row of the problem.
EstimatorState rls_fit(const RegressionProblem& problem,
                       double alpha_sq = kDefaultAlphaSq,
                       const WarningSink& warn = stderr_warning_sink());

// Best rank-one factorization M ~ r b' with r[0] = 1.
struct RankOneSplit {
  std::vector<double> r;  // r_1..r_p, r_1 = 1
  std::vector<double> b;  // b_0..b_m
  double residual_ratio = 0.0;  // ||M - r b'||_F / ||M||_F
};

// Throws InvalidArgument when the first row of M is numerically zero.
RankOneSplit rank_one_split(const Eigen::MatrixXd& M);

struct ChannelParameters {
  StaticNonlinearity nonlinearity;  // r_2..r_p
  std::vector<double> b;
  double residual_ratio = 0.0;
};

struct SeparatedParameters {
  std::vector<double> a;
  std::vector<ChannelParameters> channels;  // one per input
};

// p x (m+1) block of theta holding r_i b_l for input j.
Eigen::MatrixXd product_matrix(const Eigen::VectorXd& theta,
                               const OutputOrders& orders, std::size_t input);

// Products r_i b_l of an explicit channel, in product_matrix layout.
Eigen::MatrixXd product_matrix(const HammersteinChannel& channel);

SeparatedParameters separate_parameters(const Eigen::VectorXd& theta,
                                        const OutputOrders& orders);

struct OutputEstimate {
  OutputOrders orders;
  LsSolution solution;
  SeparatedParameters parameters;
};

// build_regressor + batch_ls + separate_parameters for one output.
OutputEstimate estimate_output(const Dataset& data, const OutputOrders& orders,
                               std::size_t output);

// Identifies every output with the given orders and assembles a model whose
// signal labels come from the dataset. Operating points are taken from
// `input_offsets`/`output_offsets` when supplied.
MimoHammersteinModel estimate_model(const Dataset& data,
                                    const StructureOrders& orders,
                                    const std::vector<double>& input_offsets = {},
                                    const std::vector<double>& output_offsets = {});

MimoHammersteinModel assemble_model(const Dataset& data,
                                    const std::vector<OutputEstimate>& estimates,
                                    const std::vector<double>& input_offsets = {},
                                    const std::vector<double>& output_offsets = {});

}  // namespace hsid

#endif  // HSID_ESTIMATE_HPP_
