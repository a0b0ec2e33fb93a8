// SPDX-License-Identifier: Apache-2.0
//
// orient3d: absolute 3D orientation from mmWave angle-of-arrival measurements
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "orient3d/cli.hpp"
#include "orient3d/scenario.hpp"
#include "orient3d/sim.hpp"

namespace orient3d {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("orient3d_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  std::string noiseless_measurements(const Scenario& sc, bool with_kappa) const {
    const Eigen::VectorXd t =
        stacked_aoa(euler_to_rotation(sc.true_orientation), sc.ue_position, sc.bs_positions);
    std::string text = with_kappa ? "bs_index,el_rad,az_rad,kappa_el,kappa_az\n" : "bs_index,el_rad,az_rad\n";
    for (std::size_t m = 0; m < sc.bs_count(); ++m) {
      char row[128];
      std::snprintf(row, sizeof row, "%zu,%.17g,%.17g", m + 1, t[2 * m], t[2 * m + 1]);
      text += row;
      text += with_kappa ? ",500,800\n" : "\n";
    }
    return text;
  }

  fs::path dir_;
};

// Rows of the rotation block printed after the line starting with `name:`.
Mat3 printed_rotation(const std::string& out, const std::string& name) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line) && line.rfind(name + ":", 0) != 0) {
  }
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    std::getline(in, line);
    EXPECT_EQ(std::sscanf(line.c_str(), " [%lf, %lf, %lf]", &m(i, 0), &m(i, 1), &m(i, 2)), 3) << line;
  }
  return m;
}

TEST_F(CliTest, NoCommandIsConfigError) { EXPECT_EQ(invoke({}).code, cli::kExitConfig); }

TEST_F(CliTest, UnknownFlagIsConfigError) {
  EXPECT_EQ(invoke({"rmse-sweep", "--bogus"}).code, cli::kExitConfig);
}

TEST_F(CliTest, MissingScenarioNamesPath) {
  const std::string missing = path("absent.json");
  const CliRun r = invoke({"oeb-grid", "--scenario", missing, "--out", path("g.csv")});
  EXPECT_EQ(r.code, cli::kExitConfig);
  EXPECT_NE(r.err.find(missing), std::string::npos) << r.err;
}

TEST_F(CliTest, ThreeStationGridHasNoTruncatedCells) {
  const CliRun r = invoke({"oeb-grid", "--scenario", std::string(ORIENT3D_DATA_DIR) + "/three_bs.json", "--grid",
                           "16", "--out", path("g3.csv")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("cells_above_1: 0\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("flagged_infinite: 0\n"), std::string::npos) << r.out;
  EXPECT_EQ(read_results(path("g3.csv")).points.size(), 256u);
}

TEST_F(CliTest, SweepIsDeterministic) {
  const std::vector<std::string> base{"rmse-sweep", "--trials", "1", "--seed", "7"};
  std::vector<std::string> a = base, b = base;
  a.insert(a.end(), {"--out", path("a.csv")});
  b.insert(b.end(), {"--out", path("b.csv")});
  ASSERT_EQ(invoke(a).code, cli::kExitOk);
  ASSERT_EQ(invoke(b).code, cli::kExitOk);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(read_results(path("a.csv")).points.size(), 9u);
}

TEST_F(CliTest, ThreadCapDoesNotChangeOutput) {
  ASSERT_EQ(setenv("ORIENT3D_THREADS", "1", 1), 0);
  ASSERT_EQ(invoke({"rmse-sweep", "--trials", "8", "--snr", "-10", "--out", path("t1.csv")}).code, cli::kExitOk);
  ASSERT_EQ(setenv("ORIENT3D_THREADS", "3", 1), 0);
  ASSERT_EQ(invoke({"rmse-sweep", "--trials", "8", "--snr", "-10", "--out", path("t3.csv")}).code, cli::kExitOk);
  ASSERT_EQ(setenv("ORIENT3D_THREADS", "zero", 1), 0);
  EXPECT_EQ(invoke({"rmse-sweep", "--trials", "1", "--snr", "0", "--out", path("tx.csv")}).code, cli::kExitConfig);
  unsetenv("ORIENT3D_THREADS");
  EXPECT_EQ(slurp(path("t1.csv")), slurp(path("t3.csv")));
}

TEST_F(CliTest, VeryLowSnrApproachesRandomRotationBaseline) {
  const CliRun r = invoke({"rmse-sweep", "--snr", "-200", "--trials", "200", "--out", path("low.csv")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const SweepResult sr = read_results(path("low.csv"));
  ASSERT_EQ(sr.points.size(), 1u);

  Rng rng(31337);
  double acc = 0.0;
  const int pairs = 100000;
  for (int i = 0; i < pairs; ++i) {
    acc += (sample_uniform_rotation(rng).matrix() - sample_uniform_rotation(rng).matrix()).squaredNorm();
  }
  const double baseline = std::sqrt(acc / pairs);
  EXPECT_NEAR(sr.points[0].rmse_ls / baseline, 1.0, 0.1);
  EXPECT_NEAR(sr.points[0].rmse_ml / baseline, 1.0, 0.1);
}

TEST_F(CliTest, EstimateRecoversNoiselessTruth) {
  const Scenario sc = default_scenario();
  const std::string file = write("m.csv", noiseless_measurements(sc, true));
  const CliRun r = invoke({"estimate", "--measurements", file});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const Mat3 truth = euler_to_rotation(sc.true_orientation).matrix();
  EXPECT_LT((printed_rotation(r.out, "ls") - truth).cwiseAbs().maxCoeff(), 5e-7) << r.out;
  EXPECT_LT((printed_rotation(r.out, "ml") - truth).cwiseAbs().maxCoeff(), 5e-7) << r.out;
  EXPECT_NE(r.out.find("ls_subset: 1 2"), std::string::npos);
  EXPECT_NE(r.out.find("oeb: "), std::string::npos);
}

TEST_F(CliTest, EstimateWithoutKappaOmitsBound) {
  const Scenario sc = default_scenario_three_bs();
  const std::string scen = write("s.json", scenario_to_json_text(sc));
  const std::string file = write("m.csv", noiseless_measurements(sc, false));
  const CliRun r = invoke({"estimate", "--scenario", scen, "--measurements", file});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(r.out.find("oeb: "), std::string::npos);
  const Mat3 truth = euler_to_rotation(sc.true_orientation).matrix();
  EXPECT_LT((printed_rotation(r.out, "ml") - truth).cwiseAbs().maxCoeff(), 5e-7) << r.out;
}

TEST_F(CliTest, SingleStationIsRuntimeFailure) {
  const std::string file = write("m.csv", "bs_index,el_rad,az_rad\n1,1.2,0.3\n");
  const CliRun r = invoke({"estimate", "--measurements", file});
  EXPECT_EQ(r.code, cli::kExitRuntime);
  EXPECT_NE(r.err.find("at least 2 BSs should be used"), std::string::npos) << r.err;
}

TEST_F(CliTest, ElevationOutOfRangeIsValidationError) {
  const std::string file = write("m.csv", "bs_index,el_rad,az_rad\n1,4.0,0.3\n2,1.0,0.1\n");
  const CliRun r = invoke({"estimate", "--measurements", file});
  EXPECT_EQ(r.code, cli::kExitConfig);
  EXPECT_NE(r.err.find("el_rad"), std::string::npos) << r.err;
}

TEST_F(CliTest, MalformedMeasurementFiles) {
  for (const std::string& text : {std::string(""), std::string("a,b,c\n"), std::string("bs_index,el_rad,az_rad\n3,1,1\n"),
                                  std::string("bs_index,el_rad,az_rad\n1,1,1\n1,1,1\n"),
                                  std::string("bs_index,el_rad,az_rad\n1,x,1\n")}) {
    const std::string file = write("bad.csv", text);
    EXPECT_EQ(invoke({"estimate", "--measurements", file}).code, cli::kExitConfig) << text;
  }
  EXPECT_EQ(invoke({"estimate", "--measurements", path("none.csv")}).code, cli::kExitConfig);
}

TEST(ParseMeasurements, OneBasedIndicesAndDefaults) {
  const Scenario sc = default_scenario_three_bs();
  const cli::ParsedMeasurements pm = cli::parse_measurements("bs_index,el_rad,az_rad\n3,1.0,-0.5\n1,0.5,2.0\n", sc);
  EXPECT_FALSE(pm.has_kappas);
  ASSERT_EQ(pm.set.bs_count(), 2u);
  EXPECT_EQ(pm.set.bs_positions[0], sc.bs_positions[2]);
  EXPECT_EQ(pm.set.bs_positions[1], sc.bs_positions[0]);
  EXPECT_EQ(pm.set.theta_hat[0], 1.0);
  EXPECT_EQ(pm.set.theta_hat[3], 2.0);
  EXPECT_EQ(pm.set.kappas, Eigen::VectorXd::Ones(4));
}

}  // namespace
}  // namespace orient3d
