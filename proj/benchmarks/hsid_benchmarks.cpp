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

#include <benchmark/benchmark.h>

#include <random>

#include "hsid/estimate.hpp"
#include "hsid/excitation.hpp"
#include "hsid/model.hpp"
#include "hsid/preprocess.hpp"
#include "hsid/structure.hpp"
#include "hsid/validate.hpp"

namespace {

using namespace hsid;

std::vector<Series> deviation_inputs(std::size_t n) {
  auto ip = generate_excitation({130.0, 170.0, 2.0}, n, excitation_stream(12345, 0));
  auto vf = generate_excitation({4.0, 10.0, 1.0}, n, excitation_stream(12345, 1));
  for (auto& x : ip) x -= 150.0;
  for (auto& x : vf) x -= 7.0;
  return {ip, vf};
}

Dataset preset_data(std::size_t n) {
  const auto model = paper_preset();
  const auto u = deviation_inputs(n);
  auto y = simulate_mimo(model, u);
  for (std::size_t s = 0; s < y.size(); ++s) {
    const auto e = gaussian_noise(n, 0.01, 10 + s);
    for (std::size_t k = 0; k < n; ++k) y[s][k] += e[k];
  }
  Dataset d;
  d.inputs = {{"I_p", "A", 0.0, u[0]}, {"V_f", "cm/s", 0.0, u[1]}};
  d.outputs = {{"W_b", "mm", 0.0, y[0]}, {"H_f", "mm", 0.0, y[1]}};
  return d;
}

void BM_SimulateMimo(benchmark::State& state) {
  const auto model = paper_preset();
  const auto u = deviation_inputs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_mimo(model, u));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateMimo)->Arg(1070)->Arg(100000);

void BM_Excitation(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        generate_excitation({130.0, 170.0, 2.0}, static_cast<std::size_t>(state.range(0)), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Excitation)->Arg(1070)->Arg(100000);

void BM_MedianFilter(benchmark::State& state) {
  const auto x = deviation_inputs(10000)[0];
  for (auto _ : state) {
    benchmark::DoNotOptimize(median_filter(x, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_MedianFilter)->Arg(5)->Arg(51);

void BM_BatchLs(benchmark::State& state) {
  const auto data = preset_data(static_cast<std::size_t>(state.range(0)));
  const auto problem = build_regressor(data, orders_of(paper_preset()), 1);
  for (auto _ : state) benchmark::DoNotOptimize(batch_ls(problem));
  state.counters["columns"] = static_cast<double>(problem.H.cols());
}
BENCHMARK(BM_BatchLs)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_RlsFit(benchmark::State& state) {
  const auto data = preset_data(static_cast<std::size_t>(state.range(0)));
  const auto problem = build_regressor(data, orders_of(paper_preset()), 1);
  for (auto _ : state) benchmark::DoNotOptimize(rls_fit(problem, 1e6));
}
BENCHMARK(BM_RlsFit)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_AugmentationChain(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const Eigen::Index rows = 1000, base = 10, blocks = state.range(0);
  Eigen::MatrixXd H = Eigen::MatrixXd::NullaryExpr(rows, base, [&] { return g(rng); });
  Eigen::VectorXd y = Eigen::VectorXd::NullaryExpr(rows, [&] { return g(rng); });
  std::vector<Eigen::MatrixXd> extra;
  for (Eigen::Index b = 0; b < blocks; ++b) {
    extra.push_back(Eigen::MatrixXd::NullaryExpr(rows, 2, [&] { return g(rng); }));
  }
  for (auto _ : state) {
    AugmentationChain chain(H, y);
    for (const auto& cols : extra) chain.augment(cols);
    benchmark::DoNotOptimize(chain.loss());
  }
}
BENCHMARK(BM_AugmentationChain)->Arg(5)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_SelectStructure(benchmark::State& state) {
  const auto data = preset_data(1000);
  for (auto _ : state) benchmark::DoNotOptimize(select_structure(data, 0));
}
BENCHMARK(BM_SelectStructure)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const auto model = paper_preset();
  const auto split = split_dataset(preset_data(1070), 1000);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(model, split.train, split.test));
}
BENCHMARK(BM_Evaluate);

}  // namespace

BENCHMARK_MAIN();
