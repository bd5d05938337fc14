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

#include "hsid/structure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "hsid/error.hpp"

namespace hsid {

double loss_J(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
              const Eigen::VectorXd& theta) {
  if (H.rows() != y.size() || H.cols() != theta.size()) {
    throw InvalidArgument("loss: dimension mismatch");
  }
  if (y.size() == 0) return 0.0;
  return (y - H * theta).squaredNorm() / static_cast<double>(y.size());
}

double loss_J(const RegressionProblem& problem, const Eigen::VectorXd& theta) {
  return loss_J(problem.H, problem.y, theta);
}

namespace {

Eigen::VectorXd nonzero_norms(const Eigen::MatrixXd& M) {
  Eigen::VectorXd norms = M.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < norms.size(); ++c) {
    if (norms(c) == 0.0) norms(c) = 1.0;
  }
  return norms;
}

}  // namespace

AugmentationChain::AugmentationChain(Eigen::MatrixXd H, Eigen::VectorXd y,
                                     double singular_tolerance)
    : y_(std::move(y)), tolerance_(singular_tolerance) {
  if (H.rows() != y_.size()) {
    throw InvalidArgument("augmentation: H and y row counts differ");
  }
  scales_ = nonzero_norms(H);
  Hs_ = H * scales_.cwiseInverse().asDiagonal();
  theta_s_ = Eigen::VectorXd::Zero(Hs_.cols());
  init_gram_inverse();
  if (Hs_.cols() > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Hs_);
    theta_s_ = qr.solve(y_);
  }
  loss_ = loss_J(Hs_, y_, theta_s_);
}

AugmentationChain::AugmentationChain(Eigen::MatrixXd H, Eigen::VectorXd y,
                                     const Eigen::VectorXd& theta_hat,
                                     double singular_tolerance)
    : y_(std::move(y)), tolerance_(singular_tolerance) {
  if (H.rows() != y_.size() || H.cols() != theta_hat.size()) {
    throw InvalidArgument("augmentation: dimension mismatch");
  }
  scales_ = nonzero_norms(H);
  Hs_ = H * scales_.cwiseInverse().asDiagonal();
  theta_s_ = theta_hat.cwiseProduct(scales_);
  init_gram_inverse();
  loss_ = loss_J(Hs_, y_, theta_s_);
}

void AugmentationChain::init_gram_inverse() {
  const Eigen::Index k = Hs_.cols();
  if (k == 0) {
    gram_inv_.resize(0, 0);
    return;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
  qr.setThreshold(tolerance_);
  qr.compute(Hs_);
  if (qr.rank() < k) {
    throw RankDeficientError(
        "augmentation: base regressor has numerical rank " +
            std::to_string(qr.rank()) + " of " + std::to_string(k),
        static_cast<std::size_t>(qr.rank()), static_cast<std::size_t>(k), {});
  }
  // Hs P = Q R  =>  (Hs' Hs)^-1 = P R^-1 R^-T P'.
  const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(k, k)
                                .triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv = R.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd inner = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation();
  gram_inv_ = perm * inner * perm.transpose();
}

PartitionedUpdate AugmentationChain::augment(const Eigen::MatrixXd& new_cols) {
  if (new_cols.rows() != Hs_.rows()) {
    throw InvalidArgument("augmentation: appended block has " +
                          std::to_string(new_cols.rows()) + " rows, expected " +
                          std::to_string(Hs_.rows()));
  }
  const Eigen::Index k = Hs_.cols();
  const Eigen::Index q = new_cols.cols();
  if (q == 0) return {Eigen::MatrixXd(k, 0), Eigen::MatrixXd(0, 0), new_cols};

  const Eigen::VectorXd raw_norms = new_cols.colwise().norm().transpose();
  if (!(raw_norms.minCoeff() > 0.0)) {
    throw SingularAugmentationError(
        "augmentation: appended block contains an all-zero column");
  }
  const Eigen::MatrixXd phi2 = new_cols * raw_norms.cwiseInverse().asDiagonal();

  // K = (Phi1' Phi1)^-1 Phi1' Phi2; R2 is Phi2 with its projection removed.
  const Eigen::MatrixXd K = gram_inv_ * (Hs_.transpose() * phi2);
  const Eigen::MatrixXd R2 = phi2 - Hs_ * K;
  Eigen::MatrixXd schur = R2.transpose() * R2;
  schur = 0.5 * (schur + schur.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(schur,
                                                     Eigen::EigenvaluesOnly);
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(smallest > tolerance_)) {
    std::ostringstream msg;
    msg << "augmentation: Schur complement is numerically singular "
        << "(smallest eigenvalue " << smallest << " of the equilibrated block)";
    throw SingularAugmentationError(msg.str());
  }

  const Eigen::MatrixXd B =
      schur.llt().solve(Eigen::MatrixXd::Identity(q, q));
  const Eigen::MatrixXd A = K * B;
  const Eigen::VectorXd resid = y_ - Hs_ * theta_s_;
  const Eigen::VectorXd c = phi2.transpose() * resid;

  Eigen::VectorXd theta(k + q);
  theta.head(k) = theta_s_ - A * c;
  theta.tail(q) = B * c;

  Eigen::MatrixXd gram(k + q, k + q);
  gram.topLeftCorner(k, k) = gram_inv_ + A * K.transpose();
  gram.topRightCorner(k, q) = -A;
  gram.bottomLeftCorner(q, k) = -A.transpose();
  gram.bottomRightCorner(q, q) = B;

  Eigen::MatrixXd H(Hs_.rows(), k + q);
  H << Hs_, phi2;
  Eigen::VectorXd scales(k + q);
  scales << scales_, raw_norms;

  Hs_ = std::move(H);
  scales_ = std::move(scales);
  theta_s_ = std::move(theta);
  gram_inv_ = std::move(gram);
  loss_ = loss_J(Hs_, y_, theta_s_);

  const Eigen::VectorXd inv1 = scales_.head(k).cwiseInverse();
  const Eigen::VectorXd inv2 = raw_norms.cwiseInverse();
  return {inv1.asDiagonal() * A * inv2.asDiagonal(),
          inv2.asDiagonal() * B * inv2.asDiagonal(), new_cols};
}

Eigen::VectorXd AugmentationChain::theta() const {
  return theta_s_.cwiseQuotient(scales_);
}

AugmentResult augment_columns(const RegressionProblem& problem,
                              const Eigen::VectorXd& theta_hat,
                              const Eigen::MatrixXd& new_cols,
                              double singular_tolerance) {
  AugmentationChain chain(problem.H, problem.y, theta_hat, singular_tolerance);
  AugmentResult out;
  out.update = chain.augment(new_cols);
  out.theta = chain.theta();
  out.loss = chain.loss();
  return out;
}

CorrelationDelay correlation_delay(const Series& u, const Series& y,
                                   std::size_t max_lag) {
  if (u.size() != y.size()) {
    throw InvalidArgument("delay: input and output lengths differ");
  }
  const std::size_t n = u.size();
  if (n == 0 || 4 * max_lag >= n) {
    throw InvalidArgument("delay: max lag " + std::to_string(max_lag) +
                          " must stay below a quarter of the length " +
                          std::to_string(n));
  }
  auto centered = [n](const Series& x) {
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) /
                        static_cast<double>(n);
    Series out(n);
    std::transform(x.begin(), x.end(), out.begin(),
                   [mean](double v) { return v - mean; });
    return out;
  };
  const Series uc = centered(u);
  const Series yc = centered(y);
  double su = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    su += uc[k] * uc[k];
    sy += yc[k] * yc[k];
  }
  if (su == 0.0 || sy == 0.0) {
    throw InvalidArgument("delay: constant series has no correlation");
  }
  CorrelationDelay out;
  out.significance_bound = 2.0 / std::sqrt(static_cast<double>(n));
  const double norm = std::sqrt(su * sy);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::size_t k = 0; k + lag < n; ++k) acc += uc[k] * yc[k + lag];
    const double rho = std::abs(acc) / norm;
    if (rho > out.peak) {
      out.peak = rho;
      out.lag = lag;
    }
  }
  out.low_confidence = out.peak < out.significance_bound;
  return out;
}

void SearchOptions::validate() const {
  if (bounds.p_max < 1) throw InvalidArgument("search: p_max must be >= 1");
  if (!(plateau_threshold > 0.0)) {
    throw InvalidArgument("search: plateau threshold must be positive");
  }
  if (!(loss_floor >= 0.0)) {
    throw InvalidArgument("search: loss floor must be non-negative");
  }
  if (max_passes < 1) throw InvalidArgument("search: max_passes must be >= 1");
}

std::size_t plateau_index(const std::vector<double>& losses, double threshold,
                          double floor) {
  if (losses.empty()) throw InvalidArgument("plateau: no candidates");
  std::size_t selected = 0;
  for (std::size_t k = 0; k + 1 < losses.size(); ++k) {
    const double gain =
        (losses[k] - losses[k + 1]) / std::max(losses[k], floor);
    if (gain >= threshold) selected = k + 1;
  }
  return selected;
}

namespace {

// Least-squares fit grown block by block. Runs on the augmentation chain and
// drops to rank-revealing direct solves once a block is numerically
// dependent on what is already there.
class GrowingFit {
 public:
  GrowingFit(Eigen::MatrixXd H, Eigen::VectorXd y) : H_(std::move(H)), y_(std::move(y)) {
    try {
      chain_.emplace(H_, y_);
    } catch (const RankDeficientError&) {
      solve_direct();
    }
  }

  void append(const Eigen::MatrixXd& cols) {
    Eigen::MatrixXd grown(H_.rows(), H_.cols() + cols.cols());
    grown << H_, cols;
    H_ = std::move(grown);
    if (chain_) {
      try {
        chain_->augment(cols);
        return;
      } catch (const SingularAugmentationError&) {
        chain_.reset();
      }
    }
    solve_direct();
  }

  double loss() const { return chain_ ? chain_->loss() : direct_.loss; }
  Eigen::VectorXd theta() const { return chain_ ? chain_->theta() : direct_.theta; }
  bool rank_deficient() const { return !chain_; }

 private:
  void solve_direct() { direct_ = rank_revealing_ls(H_, y_); }

  Eigen::MatrixXd H_;
  Eigen::VectorXd y_;
  std::optional<AugmentationChain> chain_;
  LsSolution direct_;
};

struct SweepContext {
  const Dataset& data;
  std::size_t output;
  std::size_t first;
  Eigen::VectorXd y;
  double floor_abs;
};

SweepContext make_context(const Dataset& data, std::size_t output,
                          std::size_t first, std::size_t needed_columns,
                          double loss_floor) {
  const std::size_t n = data.size();
  if (n <= first || n - first < needed_columns) {
    throw InvalidArgument(
        "structure search: dataset has " + std::to_string(n) +
        " samples but the search bounds need at least " +
        std::to_string(first + needed_columns) + " (" + std::to_string(first) +
        " lags plus " + std::to_string(needed_columns) + " rows)");
  }
  SweepContext ctx{data, output, first, {}, 0.0};
  const Series& y = data.outputs[output].values;
  ctx.y = Eigen::Map<const Eigen::VectorXd>(y.data() + first,
                                            static_cast<Eigen::Index>(n - first));
  ctx.floor_abs = loss_floor * ctx.y.squaredNorm() /
                  static_cast<double>(ctx.y.size());
  return ctx;
}

struct Block {
  std::vector<RegressorColumn> columns;
  Eigen::MatrixXd values;
};

Block make_block(const SweepContext& ctx, std::vector<RegressorColumn> columns) {
  Block b{std::move(columns), {}};
  b.values.resize(ctx.y.size(), static_cast<Eigen::Index>(b.columns.size()));
  for (std::size_t c = 0; c < b.columns.size(); ++c) {
    b.values.col(static_cast<Eigen::Index>(c)) =
        column_values(ctx.data, ctx.output, b.columns[c], ctx.first);
  }
  return b;
}

void add_output_lags(const SweepContext& ctx, std::vector<RegressorColumn>& cols,
                     std::size_t from, std::size_t to) {
  for (std::size_t i = from; i <= to; ++i) {
    cols.push_back(output_column(ctx.data, ctx.output, i));
  }
}

// Powers [p_lo, p_hi] at lag offsets [l_lo, l_hi] after each input's delay.
void add_input_terms(const SweepContext& ctx, std::vector<RegressorColumn>& cols,
                     const std::vector<std::size_t>& delays, std::size_t p_lo,
                     std::size_t p_hi, std::size_t l_lo, std::size_t l_hi) {
  for (std::size_t j = 0; j < delays.size(); ++j) {
    for (std::size_t pw = p_lo; pw <= p_hi; ++pw) {
      for (std::size_t l = l_lo; l <= l_hi; ++l) {
        cols.push_back(input_column(ctx.data, j, pw, delays[j] + l));
      }
    }
  }
}

OutputOrders uniform_orders(std::size_t n, std::size_t m, std::size_t p,
                            const std::vector<std::size_t>& delays) {
  OutputOrders o;
  o.n = n;
  for (std::size_t d : delays) o.inputs.push_back({m, d, p});
  return o;
}

std::vector<std::string> labels_of(const std::vector<RegressorColumn>& cols) {
  std::vector<std::string> out;
  out.reserve(cols.size());
  for (const auto& c : cols) out.push_back(c.label);
  return out;
}

// Runs base + successive blocks, records candidates and returns the losses.
std::vector<double> run_sweep(const SweepContext& ctx, Block base,
                              const std::vector<Block>& steps,
                              const std::vector<OutputOrders>& orders,
                              StructureCandidate::Stage stage, std::size_t pass,
                              std::vector<StructureCandidate>& candidates) {
  std::vector<double> losses;
  std::vector<RegressorColumn> columns = base.columns;
  GrowingFit fit(base.values, ctx.y);
  auto record = [&](std::size_t idx) {
    StructureCandidate cand;
    cand.stage = stage;
    cand.pass = pass;
    cand.orders = orders[idx];
    cand.loss = fit.loss();
    cand.rank_deficient = fit.rank_deficient();
    cand.theta = fit.theta();
    cand.columns = labels_of(columns);
    cand.relative_improvement =
        losses.empty() ? std::numeric_limits<double>::quiet_NaN()
                       : (losses.back() - cand.loss) /
                             std::max(losses.back(), ctx.floor_abs);
    losses.push_back(cand.loss);
    candidates.push_back(std::move(cand));
  };
  record(0);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    fit.append(steps[i].values);
    columns.insert(columns.end(), steps[i].columns.begin(),
                   steps[i].columns.end());
    record(i + 1);
  }
  return losses;
}

}  // namespace

std::vector<DelayEstimate> estimate_delays(const Dataset& data,
                                           std::size_t output,
                                           const SearchOptions& options) {
  data.validate();
  options.validate();
  if (output >= data.n_outputs()) {
    throw InvalidArgument("delay: output index out of range");
  }
  const auto& bounds = options.bounds;
  const std::size_t top_lag = bounds.max_delay + bounds.m_max;
  const std::size_t first = std::max(bounds.n_max, top_lag);
  const std::size_t probe_cols =
      bounds.n_max + data.n_inputs() * bounds.p_max * (top_lag + 1);
  const auto ctx =
      make_context(data, output, first, probe_cols, options.loss_floor);

  std::vector<std::size_t> lows(data.n_inputs(), 0);
  auto probe_loss = [&]() {
    std::vector<RegressorColumn> cols;
    add_output_lags(ctx, cols, 1, bounds.n_max);
    for (std::size_t j = 0; j < data.n_inputs(); ++j) {
      for (std::size_t pw = 1; pw <= bounds.p_max; ++pw) {
        for (std::size_t l = lows[j]; l <= top_lag; ++l) {
          cols.push_back(input_column(data, j, pw, l));
        }
      }
    }
    const Block block = make_block(ctx, std::move(cols));
    return rank_revealing_ls(block.values, ctx.y).loss;
  };

  std::vector<DelayEstimate> out;
  const std::size_t xcorr_lag =
      std::min(bounds.max_delay, data.size() / 4 == 0 ? 0 : data.size() / 4 - 1);
  for (std::size_t j = 0; j < data.n_inputs(); ++j) {
    DelayEstimate est;
    lows[j] = 0;
    est.losses.push_back(probe_loss());
    bool rose = false;
    for (std::size_t l = 1; l <= bounds.max_delay; ++l) {
      lows[j] = l;
      const double loss = probe_loss();
      const double prev = est.losses.back();
      est.losses.push_back(loss);
      if ((loss - prev) / std::max(prev, ctx.floor_abs) >
          options.plateau_threshold) {
        rose = true;
        break;
      }
      est.delay = l;
    }
    // Contribution of the whole input: with q columns removed from a k-column
    // fit on `rows` samples, an irrelevant input raises J by about q / (rows - k).
    const double with_input = est.losses.front();
    lows[j] = top_lag + 1;
    const double without_input = probe_loss();
    std::size_t k = bounds.n_max;
    for (std::size_t i = 0; i < data.n_inputs(); ++i) {
      k += bounds.p_max * (top_lag + 1 - (i == j ? 0 : lows[i]));
    }
    const auto rows = static_cast<double>(ctx.y.size());
    const double null_rise =
        static_cast<double>(bounds.p_max * (top_lag + 1)) / (rows - static_cast<double>(k));
    const bool insignificant =
        (without_input - with_input) / std::max(with_input, ctx.floor_abs) < 2.0 * null_rise;
    lows[j] = est.delay;
    est.correlation =
        correlation_delay(data.inputs[j].values, data.outputs[output].values,
                          xcorr_lag);
    est.low_confidence = est.correlation.low_confidence || !rose || insignificant;
    out.push_back(std::move(est));
  }
  return out;
}

DelayEstimate estimate_delay(const Series& u, const Series& y,
                             std::size_t max_lag, const SearchOptions& options) {
  Dataset data;
  data.inputs.push_back({"u", "", std::nullopt, u});
  data.outputs.push_back({"y", "", std::nullopt, y});
  SearchOptions opts = options;
  opts.bounds.max_delay = max_lag;
  return estimate_delays(data, 0, opts).front();
}

StructureSearchResult select_structure(const Dataset& data, std::size_t output,
                                       const SearchOptions& options) {
  data.validate();
  options.validate();
  if (output >= data.n_outputs()) {
    throw InvalidArgument("structure search: output index out of range");
  }
  const auto& bounds = options.bounds;
  StructureSearchResult result;
  result.output = output;
  result.plateau_threshold = options.plateau_threshold;

  std::vector<std::size_t> delays;
  if (options.delays) {
    delays = *options.delays;
    if (delays.size() != data.n_inputs()) {
      throw InvalidArgument("structure search: one delay per input required");
    }
    for (std::size_t d : delays) {
      DelayEstimate fixed;
      fixed.delay = d;
      result.delays.push_back(fixed);
    }
  } else {
    result.delays = estimate_delays(data, output, options);
    for (const auto& d : result.delays) delays.push_back(d.delay);
  }

  const std::size_t max_delay = *std::max_element(delays.begin(), delays.end());
  const std::size_t first = std::max(bounds.n_max, max_delay + bounds.m_max);
  const std::size_t widest =
      bounds.n_max + data.n_inputs() * bounds.p_max * (bounds.m_max + 1);
  const auto ctx = make_context(data, output, first, widest, options.loss_floor);
  const double thr = options.plateau_threshold;

  std::size_t n_cur = bounds.n_max;
  std::size_t m_cur = bounds.m_max;
  OutputOrders selected;
  for (std::size_t pass = 1; pass <= options.max_passes; ++pass) {
    result.passes = pass;

    // Degree sweep at (n_cur, m_cur).
    std::vector<RegressorColumn> base_cols;
    add_output_lags(ctx, base_cols, 1, n_cur);
    add_input_terms(ctx, base_cols, delays, 1, 1, 0, m_cur);
    std::vector<Block> steps;
    std::vector<OutputOrders> orders{uniform_orders(n_cur, m_cur, 1, delays)};
    for (std::size_t p = 2; p <= bounds.p_max; ++p) {
      std::vector<RegressorColumn> cols;
      add_input_terms(ctx, cols, delays, p, p, 0, m_cur);
      steps.push_back(make_block(ctx, std::move(cols)));
      orders.push_back(uniform_orders(n_cur, m_cur, p, delays));
    }
    auto losses = run_sweep(ctx, make_block(ctx, base_cols), steps, orders,
                            StructureCandidate::Stage::kDegree, pass,
                            result.candidates);
    const std::size_t p_hat = plateau_index(losses, thr, ctx.floor_abs) + 1;

    // Denominator sweep with the numerator at its bound.
    base_cols.clear();
    add_input_terms(ctx, base_cols, delays, 1, p_hat, 0, bounds.m_max);
    steps.clear();
    orders = {uniform_orders(0, bounds.m_max, p_hat, delays)};
    for (std::size_t n = 1; n <= bounds.n_max; ++n) {
      std::vector<RegressorColumn> cols;
      add_output_lags(ctx, cols, n, n);
      steps.push_back(make_block(ctx, std::move(cols)));
      orders.push_back(uniform_orders(n, bounds.m_max, p_hat, delays));
    }
    losses = run_sweep(ctx, make_block(ctx, base_cols), steps, orders,
                       StructureCandidate::Stage::kDenominator, pass,
                       result.candidates);
    const std::size_t n_hat = plateau_index(losses, thr, ctx.floor_abs);

    // Numerator sweep at the selected denominator.
    base_cols.clear();
    add_output_lags(ctx, base_cols, 1, n_hat);
    add_input_terms(ctx, base_cols, delays, 1, p_hat, 0, 0);
    steps.clear();
    orders = {uniform_orders(n_hat, 0, p_hat, delays)};
    for (std::size_t m = 1; m <= bounds.m_max; ++m) {
      std::vector<RegressorColumn> cols;
      add_input_terms(ctx, cols, delays, 1, p_hat, m, m);
      steps.push_back(make_block(ctx, std::move(cols)));
      orders.push_back(uniform_orders(n_hat, m, p_hat, delays));
    }
    losses = run_sweep(ctx, make_block(ctx, base_cols), steps, orders,
                       StructureCandidate::Stage::kNumerator, pass,
                       result.candidates);
    const std::size_t m_hat = plateau_index(losses, thr, ctx.floor_abs);

    selected = uniform_orders(n_hat, m_hat, p_hat, delays);
    if (n_hat == n_cur && m_hat == m_cur) break;
    n_cur = n_hat;
    m_cur = m_hat;
  }
  result.selected = selected;
  return result;
}

std::string stage_name(StructureCandidate::Stage stage) {
  switch (stage) {
    case StructureCandidate::Stage::kDegree:
      return "degree";
    case StructureCandidate::Stage::kDenominator:
      return "denominator";
    case StructureCandidate::Stage::kNumerator:
      return "numerator";
  }
  return "unknown";
}

std::string format_structure_report(const Dataset& data,
                                    const StructureSearchResult& result) {
  std::ostringstream os;
  char buf[160];
  const auto& out_name = data.outputs.at(result.output).name;
  os << "# structure search for output " << result.output << " (" << out_name
     << ")\n";
  std::snprintf(buf, sizeof buf, "# plateau threshold %.6g, passes %zu\n",
                result.plateau_threshold, result.passes);
  os << buf;
  for (std::size_t j = 0; j < result.delays.size(); ++j) {
    const auto& d = result.delays[j];
    if (d.losses.empty()) {
      std::snprintf(buf, sizeof buf, "# delay %s: %zu (fixed)\n",
                    data.inputs.at(j).name.c_str(), d.delay);
      os << buf;
      continue;
    }
    std::snprintf(buf, sizeof buf,
                  "# delay %s: %zu (xcorr peak %.4f at lag %zu, bound %.4f%s)\n",
                  data.inputs.at(j).name.c_str(), d.delay, d.correlation.peak,
                  d.correlation.lag, d.correlation.significance_bound,
                  d.low_confidence ? ", low confidence" : "");
    os << buf;
  }
  os << "pass stage        n  m  p  J                rel_improvement  note\n";
  for (const auto& c : result.candidates) {
    const auto& ch = c.orders.inputs.front();
    std::string rel = "-";
    if (!std::isnan(c.relative_improvement)) {
      std::snprintf(buf, sizeof buf, "%.6e", c.relative_improvement);
      rel = buf;
    }
    std::snprintf(buf, sizeof buf, "%-4zu %-12s %2zu %2zu %2zu  %.9e  %-15s  %s\n",
                  c.pass, stage_name(c.stage).c_str(), c.orders.n, ch.m, ch.p,
                  c.loss, rel.c_str(), c.rank_deficient ? "rank-deficient" : "");
    os << buf;
  }
  const auto& sel = result.selected;
  os << "selected n=" << sel.n;
  if (!sel.inputs.empty()) {
    os << " m=" << sel.inputs.front().m << " p=" << sel.inputs.front().p
       << " delays=";
    for (std::size_t j = 0; j < sel.inputs.size(); ++j) {
      os << (j ? "," : "") << sel.inputs[j].delay;
    }
  }
  os << '\n';
  return os.str();
}

}  // namespace hsid
