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

#include "hsid/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <string>

namespace hsid {

std::size_t OutputOrders::max_lag() const {
  std::size_t lag = n;
  for (const auto& ch : inputs) lag = std::max(lag, ch.delay + ch.m);
  return lag;
}

std::size_t OutputOrders::parameter_count() const {
  std::size_t count = n;
  for (const auto& ch : inputs) count += ch.p * (ch.m + 1);
  return count;
}

void OutputOrders::validate() const {
  if (inputs.empty()) throw InvalidArgument("orders: no inputs");
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    if (inputs[j].p < 1) {
      throw InvalidArgument("orders: input " + std::to_string(j) +
                            " has nonlinearity degree 0");
    }
  }
}

StructureOrders orders_of(const MimoHammersteinModel& model) {
  model.validate();
  StructureOrders orders;
  for (std::size_t s = 0; s < model.n_outputs(); ++s) {
    OutputOrders out;
    out.n = model.denominator(s).size();
    for (std::size_t j = 0; j < model.n_inputs(); ++j) {
      const auto& ch = model.channel(s, j);
      out.inputs.push_back(
          {ch.dynamics.m(), ch.dynamics.delay, ch.nonlinearity.degree()});
    }
    orders.outputs.push_back(std::move(out));
  }
  return orders;
}

namespace {

std::string signal_name(const std::vector<Signal>& signals, std::size_t index,
                        char fallback) {
  if (index < signals.size() && !signals[index].name.empty()) {
    return signals[index].name;
  }
  return std::string(1, fallback) + std::to_string(index);
}

double integer_power(double x, std::size_t power) {
  double out = 1.0;
  for (std::size_t i = 0; i < power; ++i) out *= x;
  return out;
}

}  // namespace

RegressorColumn output_column(const Dataset& data, std::size_t output,
                              std::size_t lag) {
  RegressorColumn col{RegressorColumn::Kind::kOutput, output, 1, lag, {}};
  col.label = "-" + signal_name(data.outputs, output, 'y') + "(k-" +
              std::to_string(lag) + ")";
  return col;
}

RegressorColumn input_column(const Dataset& data, std::size_t input,
                             std::size_t power, std::size_t lag) {
  RegressorColumn col{RegressorColumn::Kind::kInput, input, power, lag, {}};
  col.label = signal_name(data.inputs, input, 'u');
  if (power != 1) col.label += "^" + std::to_string(power);
  col.label += lag == 0 ? "(k)" : "(k-" + std::to_string(lag) + ")";
  return col;
}

Eigen::VectorXd column_values(const Dataset& data, std::size_t output,
                              const RegressorColumn& column,
                              std::size_t first_sample) {
  const std::size_t n = data.size();
  if (first_sample < column.lag || first_sample > n) {
    throw InvalidArgument("regressor: first sample " +
                          std::to_string(first_sample) +
                          " does not cover lag " + std::to_string(column.lag));
  }
  const bool is_output = column.kind == RegressorColumn::Kind::kOutput;
  const Series& src = is_output ? data.outputs.at(output).values
                                : data.inputs.at(column.signal).values;
  Eigen::VectorXd out(static_cast<Eigen::Index>(n - first_sample));
  for (std::size_t k = first_sample; k < n; ++k) {
    const double x = src[k - column.lag];
    out(static_cast<Eigen::Index>(k - first_sample)) =
        is_output ? -x : integer_power(x, column.power);
  }
  return out;
}

RegressionProblem build_regressor(const Dataset& data,
                                  const OutputOrders& orders,
                                  std::size_t output,
                                  std::optional<std::size_t> first_sample) {
  data.validate();
  orders.validate();
  if (output >= data.n_outputs()) {
    throw InvalidArgument("regressor: output index " + std::to_string(output) +
                          " out of range");
  }
  if (orders.inputs.size() != data.n_inputs()) {
    throw InvalidArgument("regressor: orders cover " +
                          std::to_string(orders.inputs.size()) +
                          " inputs, dataset has " +
                          std::to_string(data.n_inputs()));
  }
  const std::size_t lag = orders.max_lag();
  const std::size_t start = first_sample.value_or(lag);
  const std::size_t n = data.size();
  if (start < lag) {
    throw InvalidArgument("regressor: first sample " + std::to_string(start) +
                          " is below the maximum lag " + std::to_string(lag));
  }
  if (n <= start) {
    throw InvalidArgument("regressor: series too short, orders need more than " +
                          std::to_string(start) + " samples, dataset has " +
                          std::to_string(n));
  }

  RegressionProblem prob;
  prob.first_sample = start;
  for (std::size_t i = 1; i <= orders.n; ++i) {
    prob.columns.push_back(output_column(data, output, i));
  }
  for (std::size_t j = 0; j < orders.inputs.size(); ++j) {
    const auto& ch = orders.inputs[j];
    for (std::size_t pw = 1; pw <= ch.p; ++pw) {
      for (std::size_t l = 0; l <= ch.m; ++l) {
        prob.columns.push_back(input_column(data, j, pw, ch.delay + l));
      }
    }
  }

  const auto rows = static_cast<Eigen::Index>(n - start);
  prob.H.resize(rows, static_cast<Eigen::Index>(prob.columns.size()));
  for (std::size_t c = 0; c < prob.columns.size(); ++c) {
    prob.H.col(static_cast<Eigen::Index>(c)) =
        column_values(data, output, prob.columns[c], start);
  }
  prob.y.resize(rows);
  const Series& y = data.outputs[output].values;
  for (Eigen::Index r = 0; r < rows; ++r) {
    prob.y(r) = y[start + static_cast<std::size_t>(r)];
  }
  return prob;
}

RegressionProblem build_regressor(const Dataset& data,
                                  const StructureOrders& orders,
                                  std::size_t output) {
  if (output >= orders.outputs.size()) {
    throw InvalidArgument("regressor: no orders for output " +
                          std::to_string(output));
  }
  return build_regressor(data, orders.outputs[output], output);
}

namespace {

struct EquilibratedQr {
  Eigen::VectorXd scales;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
};

EquilibratedQr factor(const Eigen::MatrixXd& H, double tolerance) {
  EquilibratedQr out;
  out.scales = H.colwise().norm().transpose();
  for (Eigen::Index c = 0; c < out.scales.size(); ++c) {
    if (out.scales(c) == 0.0) out.scales(c) = 1.0;
  }
  out.qr.setThreshold(tolerance);
  out.qr.compute(H * out.scales.cwiseInverse().asDiagonal());
  return out;
}

}  // namespace

LsSolution rank_revealing_ls(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                             const LsOptions& options) {
  if (H.rows() != y.size()) {
    throw InvalidArgument("least squares: H has " + std::to_string(H.rows()) +
                          " rows, y has " + std::to_string(y.size()));
  }
  LsSolution sol;
  if (H.cols() == 0) {
    sol.theta = Eigen::VectorXd::Zero(0);
    sol.loss = y.size() ? y.squaredNorm() / static_cast<double>(y.size()) : 0.0;
    return sol;
  }
  if (!H.allFinite() || !y.allFinite()) {
    throw InvalidArgument("least squares: non-finite data");
  }
  const auto eq = factor(H, options.rank_tolerance);
  sol.rank = static_cast<std::size_t>(eq.qr.rank());
  sol.theta = eq.qr.solve(y).cwiseQuotient(eq.scales);
  if (sol.rank > 0) {
    const auto& r = eq.qr.matrixQR();
    sol.condition_estimate =
        std::abs(r(0, 0)) /
        std::abs(r(static_cast<Eigen::Index>(sol.rank) - 1,
                   static_cast<Eigen::Index>(sol.rank) - 1));
  } else {
    sol.condition_estimate = std::numeric_limits<double>::infinity();
  }
  sol.loss = (y - H * sol.theta).squaredNorm() / static_cast<double>(y.size());
  return sol;
}

LsSolution batch_ls(const RegressionProblem& problem, const LsOptions& options) {
  const auto& H = problem.H;
  LsSolution sol = rank_revealing_ls(H, problem.y, options);
  const auto cols = static_cast<std::size_t>(H.cols());
  if (sol.rank == cols) return sol;

  // Name every dependent column and the independent columns that span it.
  const auto eq = factor(H, options.rank_tolerance);
  const auto rank = static_cast<Eigen::Index>(sol.rank);
  const auto& perm = eq.qr.colsPermutation().indices();
  const Eigen::MatrixXd R =
      eq.qr.matrixQR().topRows(std::min(H.rows(), H.cols()))
          .template triangularView<Eigen::Upper>();
  auto label = [&](Eigen::Index c) {
    const auto idx = static_cast<std::size_t>(c);
    return idx < problem.columns.size() ? problem.columns[idx].label
                                         : "column " + std::to_string(idx);
  };

  std::set<Eigen::Index> offending;
  std::ostringstream msg;
  msg << "rank-deficient regressor: numerical rank " << sol.rank << " of "
      << cols << " columns";
  if (H.rows() < H.cols()) msg << " (only " << H.rows() << " rows)";
  for (Eigen::Index k = rank; k < H.cols(); ++k) {
    const Eigen::Index dep = perm(k);
    offending.insert(dep);
    msg << "; '" << label(dep) << "'";
    if (rank == 0 || k >= R.rows()) {
      msg << " is numerically zero or unsupported";
      continue;
    }
    const Eigen::VectorXd coeff =
        R.topLeftCorner(rank, rank)
            .triangularView<Eigen::Upper>()
            .solve(R.block(0, k, rank, 1));
    const double biggest = coeff.cwiseAbs().maxCoeff();
    if (!(biggest > 0.0)) {
      msg << " is numerically zero";
      continue;
    }
    msg << " depends on";
    for (Eigen::Index i = 0; i < rank; ++i) {
      if (std::abs(coeff(i)) > 1e-6 * biggest) {
        offending.insert(perm(i));
        msg << " '" << label(perm(i)) << "'";
      }
    }
  }
  std::vector<std::string> names;
  for (auto c : offending) names.push_back(label(c));
  throw RankDeficientError(msg.str(), sol.rank, cols, std::move(names));
}

bool EstimatorState::is_positive_definite() const {
  if (P.rows() == 0 || P.rows() != P.cols()) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(P);
  return llt.info() == Eigen::Success;
}

EstimatorState init_estimator(std::size_t dim, double alpha_sq,
                              const WarningSink& warn) {
  if (dim == 0) throw InvalidArgument("estimator: dimension must be positive");
  if (!(alpha_sq > 0.0) || !std::isfinite(alpha_sq)) {
    throw InvalidArgument("estimator: alpha^2 must be positive and finite");
  }
  if ((alpha_sq < kMinAlphaSq || alpha_sq > kMaxAlphaSq) && warn) {
    std::ostringstream msg;
    msg << "estimator: alpha^2 = " << alpha_sq
        << " lies outside the recommended range [1e5, 1e10]";
    warn(msg.str());
  }
  const auto d = static_cast<Eigen::Index>(dim);
  return {Eigen::VectorXd::Zero(d), alpha_sq * Eigen::MatrixXd::Identity(d, d),
          0};
}

EstimatorState rls_update(EstimatorState state, const Eigen::VectorXd& phi,
                          double y) {
  if (phi.size() != state.theta.size() || state.P.rows() != phi.size() ||
      state.P.cols() != phi.size()) {
    throw InvalidArgument("rls: regressor has " + std::to_string(phi.size()) +
                          " entries, state has " +
                          std::to_string(state.theta.size()));
  }
  if (!phi.allFinite() || !std::isfinite(y)) {
    throw InvalidArgument("rls: non-finite regressor or observation");
  }
  const Eigen::VectorXd p_phi = state.P * phi;
  const double denom = 1.0 + phi.dot(p_phi);
  const Eigen::VectorXd gain = p_phi / denom;
  state.theta += gain * (y - phi.dot(state.theta));
  state.P.noalias() -= gain * p_phi.transpose();
  state.P = 0.5 * (state.P + state.P.transpose()).eval();
  ++state.samples_seen;
  return state;
}

EstimatorState rls_fit(const RegressionProblem& problem, double alpha_sq,
                       const WarningSink& warn) {
  auto state =
      init_estimator(static_cast<std::size_t>(problem.H.cols()), alpha_sq, warn);
  for (Eigen::Index r = 0; r < problem.H.rows(); ++r) {
    state = rls_update(std::move(state), problem.H.row(r).transpose(),
                       problem.y(r));
  }
  return state;
}

RankOneSplit rank_one_split(const Eigen::MatrixXd& M) {
  if (M.rows() == 0 || M.cols() == 0) {
    throw InvalidArgument("separation: empty product matrix");
  }
  const double total = M.norm();
  if (!(M.row(0).norm() > 1e-12 * total)) {
    throw InvalidArgument(
        "separation: linear-term row is numerically zero, numerator is "
        "indeterminate under the unit linear coefficient normalization");
  }
  RankOneSplit out;
  Eigen::VectorXd r, b;
  if (M.rows() == 1) {
    r = Eigen::VectorXd::Ones(1);
    b = M.row(0).transpose();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M,
                                          Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd u = svd.matrixU().col(0);
    const Eigen::VectorXd v = svd.matrixV().col(0);
    const double sigma = svd.singularValues()(0);
    if (!(std::abs(u(0)) > 1e-12)) {
      throw InvalidArgument(
          "separation: dominant factor has no linear-term component");
    }
    r = u / u(0);
    b = sigma * u(0) * v;
  }
  out.r.assign(r.data(), r.data() + r.size());
  out.b.assign(b.data(), b.data() + b.size());
  out.residual_ratio = (M - r * b.transpose()).norm() / total;
  return out;
}

Eigen::MatrixXd product_matrix(const Eigen::VectorXd& theta,
                               const OutputOrders& orders, std::size_t input) {
  if (static_cast<std::size_t>(theta.size()) != orders.parameter_count()) {
    throw InvalidArgument("separation: theta has " +
                          std::to_string(theta.size()) + " entries, orders need " +
                          std::to_string(orders.parameter_count()));
  }
  if (input >= orders.inputs.size()) {
    throw InvalidArgument("separation: input index out of range");
  }
  std::size_t offset = orders.n;
  for (std::size_t j = 0; j < input; ++j) {
    offset += orders.inputs[j].p * (orders.inputs[j].m + 1);
  }
  const auto& ch = orders.inputs[input];
  const auto p = static_cast<Eigen::Index>(ch.p);
  const auto width = static_cast<Eigen::Index>(ch.m + 1);
  Eigen::MatrixXd M(p, width);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index l = 0; l < width; ++l) {
      M(i, l) = theta(static_cast<Eigen::Index>(offset) + i * width + l);
    }
  }
  return M;
}

Eigen::MatrixXd product_matrix(const HammersteinChannel& channel) {
  const auto& b = channel.dynamics.b;
  const auto p = static_cast<Eigen::Index>(channel.nonlinearity.degree());
  Eigen::MatrixXd M(p, static_cast<Eigen::Index>(b.size()));
  for (Eigen::Index i = 0; i < p; ++i) {
    const double r = i == 0 ? 1.0 : channel.nonlinearity.coeffs[i - 1];
    for (Eigen::Index l = 0; l < M.cols(); ++l) M(i, l) = r * b[l];
  }
  return M;
}

SeparatedParameters separate_parameters(const Eigen::VectorXd& theta,
                                        const OutputOrders& orders) {
  orders.validate();
  SeparatedParameters out;
  // product_matrix checks the total length.
  for (std::size_t j = 0; j < orders.inputs.size(); ++j) {
    const auto split = rank_one_split(product_matrix(theta, orders, j));
    ChannelParameters ch;
    ch.nonlinearity.coeffs.assign(split.r.begin() + 1, split.r.end());
    ch.b = split.b;
    ch.residual_ratio = split.residual_ratio;
    out.channels.push_back(std::move(ch));
  }
  out.a.assign(theta.data(), theta.data() + orders.n);
  return out;
}

OutputEstimate estimate_output(const Dataset& data, const OutputOrders& orders,
                               std::size_t output) {
  const auto prob = build_regressor(data, orders, output);
  OutputEstimate est{orders, batch_ls(prob), {}};
  est.parameters = separate_parameters(est.solution.theta, orders);
  return est;
}

MimoHammersteinModel assemble_model(const Dataset& data,
                                    const std::vector<OutputEstimate>& estimates,
                                    const std::vector<double>& input_offsets,
                                    const std::vector<double>& output_offsets) {
  MimoHammersteinModel model;
  for (std::size_t j = 0; j < data.n_inputs(); ++j) {
    const auto& sig = data.inputs[j];
    model.inputs.push_back(
        {sig.name, sig.unit,
         j < input_offsets.size() ? input_offsets[j]
                                  : sig.operating_point.value_or(0.0)});
  }
  for (std::size_t s = 0; s < data.n_outputs(); ++s) {
    const auto& sig = data.outputs[s];
    model.outputs.push_back(
        {sig.name, sig.unit,
         s < output_offsets.size() ? output_offsets[s]
                                   : sig.operating_point.value_or(0.0)});
  }
  if (estimates.size() != data.n_outputs()) {
    throw InvalidArgument("assemble: one estimate per output required");
  }
  for (const auto& est : estimates) {
    std::vector<HammersteinChannel> row;
    for (std::size_t j = 0; j < est.parameters.channels.size(); ++j) {
      const auto& par = est.parameters.channels[j];
      row.push_back({par.nonlinearity,
                     {est.parameters.a, par.b, est.orders.inputs[j].delay}});
    }
    model.channels.push_back(std::move(row));
  }
  model.validate();
  return model;
}

MimoHammersteinModel estimate_model(const Dataset& data,
                                    const StructureOrders& orders,
                                    const std::vector<double>& input_offsets,
                                    const std::vector<double>& output_offsets) {
  if (orders.outputs.size() != data.n_outputs()) {
    throw InvalidArgument("estimate: orders cover " +
                          std::to_string(orders.outputs.size()) +
                          " outputs, dataset has " +
                          std::to_string(data.n_outputs()));
  }
  std::vector<OutputEstimate> estimates;
  for (std::size_t s = 0; s < data.n_outputs(); ++s) {
    estimates.push_back(estimate_output(data, orders.outputs[s], s));
  }
  return assemble_model(data, estimates, input_offsets, output_offsets);
}

}  // namespace hsid
