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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include "commands.hpp"
#include "hsid/error.hpp"
#include "hsid/persistence.hpp"
#include "oracle.hpp"
#include "run_config.hpp"

namespace hsid::cli {
namespace {

namespace fs = std::filesystem;
using hsid::testing::oracle_dataset;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("hsid_cli_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig config(const std::string& sub = "") const {
    auto c = default_config();
    c.output_dir = dir_ / sub;
    return c;
  }
  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
};

// Coefficient of v^(i+1)(k - lag) in output s, input j.
double product(const HammersteinChannel& c, std::size_t i, std::size_t lag) {
  const auto& dyn = c.dynamics;
  if (i >= c.nonlinearity.degree() || lag < dyn.delay || lag > dyn.delay + dyn.m()) return 0.0;
  const double r = i == 0 ? 1.0 : c.nonlinearity.coeffs[i - 1];
  return r * dyn.b[lag - dyn.delay];
}

TEST_F(Cli, ExciteWritesGridSeries) {
  const auto files = cmd_excite(config());
  ASSERT_EQ(files.size(), 2U);
  EXPECT_EQ(files[0].filename(), "I_p.csv");
  EXPECT_EQ(files[1].filename(), "V_f.csv");
  const auto ip = load_series(files[0]);
  const auto vf = load_series(files[1]);
  ASSERT_EQ(ip.values.size(), 1070U);
  EXPECT_EQ(ip.values[0], 134.0);
  EXPECT_EQ(vf.values[0], 4.0);
  for (double x : ip.values) {
    EXPECT_TRUE(x >= 130 && x <= 170 && std::fmod(x, 2.0) == 0.0) << x;
  }
  for (double x : vf.values) EXPECT_TRUE(x >= 4 && x <= 10 && x == std::floor(x)) << x;
  EXPECT_TRUE(fs::exists(path(kResolvedConfigFile)));
}

TEST_F(Cli, ExciteIsDeterministic) {
  const auto a = cmd_excite(config("a"));
  const auto b = cmd_excite(config("b"));
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_EQ(read_text_file(a[j]), read_text_file(b[j]));
  auto other = config("c");
  other.excitation.seed = 7;
  EXPECT_NE(read_text_file(cmd_excite(other)[0]), read_text_file(a[0]));
}

TEST_F(Cli, ExciteRejectsZeroLength) {
  auto c = config();
  c.excitation.length = 0;
  EXPECT_THROW(cmd_excite(c), InvalidArgument);
}

TEST_F(Cli, IdentifyRecoversPresetProducts) {
  save_dataset(oracle_dataset(), path("oracle.csv"));
  auto c = config("out");
  c.preprocess.median_window = 1;
  const auto result = cmd_identify(c, path("oracle.csv"));
  const auto preset = paper_preset();
  ASSERT_EQ(result.model.n_outputs(), 2U);
  for (std::size_t s = 0; s < 2; ++s) {
    EXPECT_EQ(result.model.denominator(s).size(), preset.denominator(s).size());
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& got = result.model.channel(s, j);
      const auto& want = preset.channel(s, j);
      EXPECT_EQ(got.dynamics.delay, want.dynamics.delay) << s << "," << j;
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t lag = 0; lag < 12; ++lag) {
          EXPECT_NEAR(product(got, i, lag), product(want, i, lag), 1e-4)
              << "s=" << s << " j=" << j << " power=" << i + 1 << " lag=" << lag;
        }
      }
    }
  }
  EXPECT_TRUE(result.validated);
  for (const auto& o : result.validation.outputs) EXPECT_LT(o.std_error, 1e-8);
  for (const char* f : {"model.json", "structure_report.txt", "validation_report.txt",
                        "validation_trace.txt", kResolvedConfigFile}) {
    EXPECT_TRUE(fs::exists(path("out") / f)) << f;
  }
  EXPECT_EQ(load_model(path("out/model.json")), result.model);
  EXPECT_EQ(result.model.metadata.at("estimation_method"), "batch");
  EXPECT_EQ(result.model.inputs[0].operating_point, 150.0);
}

TEST_F(Cli, IdentifyIsDeterministic) {
  save_dataset(oracle_dataset(400), path("d.csv"));
  auto c = config("a");
  c.validation.n_train = 300;
  c.search.bounds = {3, 3, 2, 5};
  cmd_identify(c, path("d.csv"));
  c.output_dir = path("b");
  cmd_identify(c, path("d.csv"));
  for (const char* f : {"model.json", "structure_report.txt", "validation_report.txt"}) {
    EXPECT_EQ(read_text_file(path("a") / f), read_text_file(path("b") / f)) << f;
  }
}

TEST_F(Cli, IdentifyReportsLinearChannel) {
  auto data = hsid::testing::make_synthetic(31, 2, 1, 1, 2, 600, 40.0).data;
  save_dataset(data, path("lin.csv"));
  auto c = config("out");
  c.preprocess.median_window = 1;
  c.validation.n_train = 500;
  c.search.bounds = {3, 3, 3, 5};
  const auto result = cmd_identify(c, path("lin.csv"));
  EXPECT_EQ(result.model.channel(0, 0).nonlinearity.degree(), 1U);
  const auto report = read_text_file(path("out/structure_report.txt"));
  EXPECT_NE(report.find(" p=1 "), std::string::npos) << report;
}

TEST_F(Cli, IdentifyTooShortNamesShortfall) {
  save_dataset(oracle_dataset(10), path("short.csv"));
  auto c = config();
  c.validation.n_train = 0;
  try {
    cmd_identify(c, path("short.csv"));
    FAIL() << "accepted a 10-sample record";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("sample"), std::string::npos) << msg;
  }
}

TEST_F(Cli, IdentifyTrainingSplitBounds) {
  save_dataset(oracle_dataset(100), path("d.csv"));
  auto c = config();
  c.validation.n_train = 100;
  EXPECT_THROW(cmd_identify(c, path("d.csv")), Error);
  EXPECT_THROW(cmd_identify(c, path("absent.csv")), Error);
}

TEST_F(Cli, IdentifyWithFixedOrdersAndRls) {
  save_dataset(oracle_dataset(), path("d.csv"));
  auto c = config("out");
  c.preprocess.median_window = 1;
  c.estimation.method = EstimationMethod::kRls;
  c.estimation.alpha_sq = 1e9;
  c.estimation.orders = orders_of(paper_preset());
  const auto result = cmd_identify(c, path("d.csv"));
  EXPECT_TRUE(result.searches.empty());
  EXPECT_EQ(orders_of(result.model), orders_of(paper_preset()));
  EXPECT_EQ(result.model.metadata.at("estimation_method"), "rls");
  for (const auto& o : result.validation.outputs) EXPECT_LT(o.std_error, 1e-3);
}

TEST_F(Cli, SimulateZeroAndStep) {
  cmd_preset(config(), "paper-gtaw");
  const auto model = path("paper-gtaw.json");
  save_series({"I_p", Series(20, 150.0)}, path("ip0.csv"));
  save_series({"V_f", Series(20, 7.0)}, path("vf0.csv"));
  auto zero = load_dataset(cmd_simulate(config("zero"), model, {path("ip0.csv"), path("vf0.csv")}));
  for (const auto& o : zero.outputs) EXPECT_EQ(o.values, Series(20, 0.0));

  // Unit deviation steps on both inputs; reference values from exact rational
  // arithmetic on the preset coefficients.
  const Series width = {
      0.0, 0.00467397856, 0.0097339015595168006, 0.016816813769227151,
      0.016730373194952807, 0.0053694499206580213, -0.015557252200354824,
      -0.047979147624944457, -0.081947447987608654, -0.11484385619479293};
  const Series height = {
      0.0, 0.0056798523199999996, 0.015364900502199999, 0.034523473438261433,
      0.033255334253419526, 0.035940538685579247, 0.014363505683491391,
      -0.0074392862366233752, -0.073372956765779318, -0.13908302827983854};
  save_series({"I_p", Series(10, 151.0)}, path("ip1.csv"));
  save_series({"V_f", Series(10, 8.0)}, path("vf1.csv"));
  const auto step = load_dataset(cmd_simulate(config("step"), model, {path("ip1.csv"), path("vf1.csv")}));
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_NEAR(step.outputs[0].values[k], width[k], 1e-15) << k;
    EXPECT_NEAR(step.outputs[1].values[k], height[k], 1e-15) << k;
  }
  EXPECT_EQ(step.inputs[0].values, Series(10, 151.0));
  EXPECT_EQ(step.inputs[0].operating_point, 150.0);
}

TEST_F(Cli, SimulateNoiseIsSeeded) {
  cmd_preset(config(), "paper-gtaw");
  save_series({"I_p", Series(50, 150.0)}, path("ip.csv"));
  save_series({"V_f", Series(50, 7.0)}, path("vf.csv"));
  auto c = config("a");
  c.simulation.noise_sigma = 0.1;
  const auto a = read_text_file(cmd_simulate(c, path("paper-gtaw.json"), {path("ip.csv"), path("vf.csv")}));
  c.output_dir = path("b");
  const auto b = read_text_file(cmd_simulate(c, path("paper-gtaw.json"), {path("ip.csv"), path("vf.csv")}));
  EXPECT_EQ(a, b);
  EXPECT_NE(load_dataset(path("a/simulated.csv")).outputs[0].values, Series(50, 0.0));
}

TEST_F(Cli, SimulateRejectsBadInputs) {
  cmd_preset(config(), "paper-gtaw");
  const auto model = path("paper-gtaw.json");
  save_series({"I_p", Series(5, 150.0)}, path("ip.csv"));
  save_series({"V_f", Series(6, 7.0)}, path("vf.csv"));
  save_series({"X", Series(5, 7.0)}, path("x.csv"));
  EXPECT_THROW(cmd_simulate(config(), model, {path("ip.csv")}), Error);
  EXPECT_THROW(cmd_simulate(config(), model, {path("ip.csv"), path("missing.csv")}), Error);
  EXPECT_THROW(cmd_simulate(config(), model, {path("ip.csv"), path("vf.csv")}), Error);
  EXPECT_THROW(cmd_simulate(config(), model, {path("ip.csv"), path("x.csv")}), Error);
}

TEST_F(Cli, ValidatePresetOnOracle) {
  cmd_preset(config(), "paper-gtaw");
  save_dataset(oracle_dataset(), path("d.csv"));
  const auto report = cmd_validate(config("v"), path("paper-gtaw.json"), path("d.csv"));
  EXPECT_EQ(report.first_index, 1000U);
  for (const auto& o : report.outputs) {
    EXPECT_EQ(o.n_test, 70U);
    EXPECT_LT(o.std_error, 1e-12);
  }
  auto whole = config("w");
  whole.validation.n_train = 0;
  EXPECT_EQ(cmd_validate(whole, path("paper-gtaw.json"), path("d.csv")).outputs[0].n_test, 1070U);
  EXPECT_TRUE(fs::exists(path("v/validation_trace.txt")));
}

TEST_F(Cli, PresetMatchesBuiltIn) {
  const auto a = cmd_preset(config("a"), "paper-gtaw");
  const auto b = cmd_preset(config("b"), "paper-gtaw");
  EXPECT_EQ(load_model(a), paper_preset());
  EXPECT_EQ(read_text_file(a), read_text_file(b));
  try {
    cmd_preset(config(), "nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("paper-gtaw"), std::string::npos) << e.what();
  }
}

TEST(Config, DefaultsAndEcho) {
  const auto d = default_config();
  EXPECT_EQ(d.excitation.length, 1070U);
  EXPECT_EQ(d.excitation.seed, 12345U);
  EXPECT_EQ(d.validation.n_train, 1000U);
  EXPECT_EQ(d.preprocess.median_window, 5U);
  ASSERT_EQ(d.excitation.inputs.size(), 2U);
  EXPECT_EQ(d.excitation.inputs[0].operating_point, 150.0);
  const auto text = serialize_config(d);
  EXPECT_EQ(serialize_config(parse_config(text)), text);
  EXPECT_EQ(serialize_config(parse_config("{}")), text);
}

TEST(Config, OverlayAndEcho) {
  const auto c = parse_config(R"({
    "excitation": {"seed": 9, "hold": 3},
    "search": {"delays": [1, 3], "n_max": 4},
    "estimation": {"method": "rls", "alpha_sq": 1e8,
                   "orders": [{"n": 2, "inputs": [{"d": 1, "m": 1, "p": 2}]}]},
    "validation": {"std_mode": "sample"}
  })");
  EXPECT_EQ(c.excitation.seed, 9U);
  EXPECT_EQ(c.excitation.hold, 3U);
  EXPECT_EQ(c.excitation.length, 1070U);
  EXPECT_EQ(c.search.delays, (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(c.search.bounds.n_max, 4U);
  EXPECT_EQ(c.search.bounds.m_max, 5U);
  EXPECT_EQ(c.estimation.method, EstimationMethod::kRls);
  EXPECT_EQ(c.estimation.alpha_sq, 1e8);
  ASSERT_TRUE(c.estimation.orders);
  EXPECT_EQ(c.estimation.orders->outputs[0].inputs[0].p, 2U);
  EXPECT_EQ(c.validation.std_mode, StdMode::kSample);
  const auto text = serialize_config(c);
  EXPECT_EQ(serialize_config(parse_config(text)), text);
}

TEST(Config, RejectsUnknownAndInvalid) {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string("accepted");
  };
  EXPECT_NE(message(R"({"excitation": {"lenght": 5}})").find("excitation.lenght"), std::string::npos);
  EXPECT_NE(message(R"({"colour": 1})").find("colour"), std::string::npos);
  EXPECT_NE(message(R"({"estimation": {"method": "magic"}})").find("method"), std::string::npos);
  EXPECT_NE(message(R"({"preprocess": {"median_window": 4}})"), "accepted");
  EXPECT_NE(message(R"({"excitation": {"seed": -1}})"), "accepted");
  EXPECT_NE(message("{"), "accepted");
}

#ifdef HSID_BINARY
int run(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("\"") + HSID_BINARY + "\" " + args + " > \"" +
                          (out / "stdout.txt").string() + "\" 2> \"" +
                          (out / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(Cli, BinaryExitCodes) {
  const std::string od = " --output-dir \"" + dir_.string() + "\"";
  EXPECT_EQ(run("preset --list", dir_), 0);
  EXPECT_NE(read_text_file(path("stdout.txt")).find("paper-gtaw"), std::string::npos);
  EXPECT_EQ(run("preset paper-gtaw" + od, dir_), 0);
  EXPECT_EQ(read_text_file(path("paper-gtaw.json")), serialize_model(paper_preset()));

  EXPECT_EQ(run("identify \"" + path("absent.csv").string() + "\"" + od, dir_), 1);
  const auto err = read_text_file(path("stderr.txt"));
  EXPECT_EQ(err.rfind("hsid: error:", 0), 0U) << err;
  EXPECT_TRUE(read_text_file(path("stdout.txt")).empty());

  EXPECT_NE(run("", dir_), 0);
  EXPECT_NE(run("frobnicate", dir_), 0);
  EXPECT_NE(run("preset nope" + od, dir_), 0);
  EXPECT_EQ(run("excite --seed 5" + od, dir_), 0);
  EXPECT_TRUE(fs::exists(path("I_p.csv")));
}
#endif

}  // namespace
}  // namespace hsid::cli
