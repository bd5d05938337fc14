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

// Structure identification: dead times, nonlinearity degree and linear
// orders, selected by where the residual loss stops improving.
//
// Order sweeps grow the regressor one column block at a time. Each step
// reuses the previous least-squares solution and only inverts the Schur
// complement of the appended block:
//
//   B = (Phi2' Phi2 - Phi2' Phi1 (Phi1' Phi1)^-1 Phi1' Phi2)^-1
//   A = (Phi1' Phi1)^-1 Phi1' Phi2 B
//   theta_1 = theta_0 - A Phi2' (y - Phi1 theta_0)
//   theta_2 = B Phi2' (y - Phi1 theta_0)

#ifndef HSID_STRUCTURE_HPP_
#define HSID_STRUCTURE_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hsid/dataset.hpp"
#include "hsid/estimate.hpp"

namespace hsid {

// Mean squared residual ||y - H theta||^2 / rows.
double loss_J(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
              const Eigen::VectorXd& theta);
double loss_J(const RegressionProblem& problem, const Eigen::VectorXd& theta);

struct PartitionedUpdate {
  Eigen::MatrixXd A_mat;  // k x q
  Eigen::MatrixXd B_mat;  // q x q
  Eigen::MatrixXd Phi2;   // rows x q
};

struct AugmentResult {
  Eigen::VectorXd theta;  // [theta_1; theta_2]
  double loss = 0.0;
  PartitionedUpdate update;
};

inline constexpr double kDefaultSingularTolerance = 1e-10;

// Grows a least-squares fit by appended column blocks. Columns are
// equilibrated internally; results are reported in original units.
class AugmentationChain {
 public:
  // Solves the base problem. Throws RankDeficientError if H lacks full
  // column rank.
  AugmentationChain(Eigen::MatrixXd H, Eigen::VectorXd y,
                    double singular_tolerance = kDefaultSingularTolerance);
  // Starts from a caller-supplied least-squares solution of the base problem.
  AugmentationChain(Eigen::MatrixXd H, Eigen::VectorXd y,
                    const Eigen::VectorXd& theta_hat,
                    double singular_tolerance = kDefaultSingularTolerance);

  // Appends `new_cols`. Throws SingularAugmentationError (leaving the chain
  // unchanged) when the Schur complement is numerically singular.
  PartitionedUpdate augment(const Eigen::MatrixXd& new_cols);

  Eigen::VectorXd theta() const;
  double loss() const { return loss_; }
  Eigen::Index cols() const { return Hs_.cols(); }
  Eigen::Index rows() const { return Hs_.rows(); }

 private:
  void init_gram_inverse();

  Eigen::MatrixXd Hs_;        // equilibrated regressor
  Eigen::VectorXd scales_;    // column norms
  Eigen::VectorXd y_;
  Eigen::VectorXd theta_s_;   // equilibrated coordinates
  Eigen::MatrixXd gram_inv_;  // (Hs' Hs)^-1
  double loss_ = 0.0;
  double tolerance_;
};

// One augmentation step on a standalone problem. `theta_hat` must be the
// least-squares solution of `problem`.
AugmentResult augment_columns(const RegressionProblem& problem,
                              const Eigen::VectorXd& theta_hat,
                              const Eigen::MatrixXd& new_cols,
                              double singular_tolerance = kDefaultSingularTolerance);

struct CorrelationDelay {
  std::size_t lag = 0;              // argmax of |rho|
  double peak = 0.0;                // |rho(lag)|
  double significance_bound = 0.0;  // 2 / sqrt(N)
  bool low_confidence = false;      // peak below the bound
};

// Normalized cross-correlation rho(l) = sum u(k) y(k+l) / sqrt(Su Sy) for
// l = 0..max_lag, after mean removal. Ties go to the smaller lag. Throws
// InvalidArgument for constant series or max_lag >= N/4.
CorrelationDelay correlation_delay(const Series& u, const Series& y,
                                   std::size_t max_lag);

struct SearchBounds {
  std::size_t n_max = 5;
  std::size_t m_max = 5;
  std::size_t p_max = 4;
  std::size_t max_delay = 10;
};

struct SearchOptions {
  SearchBounds bounds;
  double plateau_threshold = 0.02;
  // Losses below loss_floor * mean(y^2) count as exact fits.
  double loss_floor = 1e-10;
  std::size_t max_passes = 3;
  // Skip delay estimation and use these, one per input.
  std::optional<std::vector<std::size_t>> delays;

  void validate() const;
};

struct DelayEstimate {
  std::size_t delay = 0;
  // Loss with the leading lags 0..l removed, l = 0..delay (+1 when the rise
  // that stopped the scan was observed).
  std::vector<double> losses;
  CorrelationDelay correlation;
  // Set when no lag removal raised the loss past the threshold, when removing
  // the input altogether raises it by less than twice what an irrelevant
  // input would, or when the correlation peak stays below 2 / sqrt(N).
  bool low_confidence = false;
};

// Dead time of every input of `output`. Fits a generously sized regression
// (n_max lags of the output, powers up to p_max, input lags up to
// max_delay + m_max) and drops leading input lags one at a time; the delay is
// the last lag count before the loss rises by more than the plateau
// threshold. Inputs are processed in index order.
std::vector<DelayEstimate> estimate_delays(const Dataset& data,
                                           std::size_t output,
                                           const SearchOptions& options = {});

// Single-input single-output form of estimate_delays. Both series are used
// at the scale given; mean-removed inputs are expected.
DelayEstimate estimate_delay(const Series& u, const Series& y,
                             std::size_t max_lag,
                             const SearchOptions& options = {});

struct StructureCandidate {
  enum class Stage { kDegree, kDenominator, kNumerator };
  Stage stage = Stage::kDegree;
  std::size_t pass = 0;
  OutputOrders orders;
  double loss = 0.0;
  // (J_prev - J) / max(J_prev, floor) relative to the previous candidate of
  // the same sweep; NaN for the first candidate.
  double relative_improvement = 0.0;
  bool rank_deficient = false;
  Eigen::VectorXd theta;  // in the sweep's column order
  std::vector<std::string> columns;
};

struct StructureSearchResult {
  std::size_t output = 0;
  std::vector<DelayEstimate> delays;  // losses empty for fixed delays
  std::vector<StructureCandidate> candidates;
  OutputOrders selected;
  double plateau_threshold = 0.0;
  std::size_t passes = 0;
};

// Index of the last candidate that improved on its predecessor by at least
// `threshold` (relative), or 0 when none did. Later steps below the threshold
// form the plateau; a flat stretch followed by a real drop does not stop the
// sweep.
std::size_t plateau_index(const std::vector<double>& losses, double threshold,
                          double floor);

// Delays first, then per pass: a degree sweep p = 1..p_max at the current
// linear orders (initially the bounds), a denominator sweep n = 0..n_max with
// the numerator at its bound, and a numerator sweep m = 0..m_max at the
// selected n. Passes repeat until the linear orders feeding the degree sweep
// are reproduced, or max_passes is reached.
StructureSearchResult select_structure(const Dataset& data, std::size_t output,
                                       const SearchOptions& options = {});

std::string stage_name(StructureCandidate::Stage stage);

// Plain-text audit table of a search.
std::string format_structure_report(const Dataset& data,
                                    const StructureSearchResult& result);

}  // namespace hsid

#endif  // HSID_STRUCTURE_HPP_
