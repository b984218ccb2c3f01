// Copyright 2026 The Coarselab Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "coarselab/error.hpp"
#include "coarselab/experiment.hpp"
#include "coarselab/odometer.hpp"
#include "json.hpp"

namespace coarselab {
namespace {

namespace fs = std::filesystem;

ExperimentConfig parse(const std::string& text, const std::string& out) {
  std::istringstream in(text);
  auto c = parse_config(in);
  c.output = (fs::temp_directory_path() / ("coarselab_cli_" + out)).string();
  fs::remove_all(c.output);
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') {
        quoted = !quoted;
      } else if (c == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

bool mentions(const std::vector<Diagnostic>& ds, const std::string& field,
              const std::string& text = "") {
  for (const auto& d : ds) {
    if (d.field == field && d.message.find(text) != std::string::npos) return true;
  }
  return false;
}

TEST(Config, Parsing) {
  std::istringstream in("# comment\nexperiment = orbit\n  space=Z^2 \nhorizon = 3 # trailing\nseed = 9\n");
  const auto c = parse_config(in);
  EXPECT_EQ(c.experiment, "orbit");
  EXPECT_EQ(c.get("space"), "Z^2");
  EXPECT_EQ(c.get("horizon"), "3");
  EXPECT_EQ(c.seed, 9u);
  std::istringstream dup("a = 1\na = 2\n");
  EXPECT_THROW(parse_config(dup), InvalidArgument);
  std::istringstream bad("no equals sign\n");
  EXPECT_THROW(parse_config(bad), InvalidArgument);
}

TEST(Validate, MissingHorizon) {
  const auto c = parse("experiment = orbit\nspace = Z^1\naction = shift:1\n", "v1");
  EXPECT_TRUE(mentions(validate(c), "horizon", "missing"));
}

TEST(Validate, InsufficientPrecision) {
  const auto c = parse("experiment = odometer-density\nprecision = 8\nepsilons = 2^-10\n", "v2");
  EXPECT_TRUE(mentions(validate(c), "epsilons", "insufficient precision"));
  const auto ok = parse("experiment = odometer-density\nprecision = 8\nepsilons = 2^-7\n", "v3");
  EXPECT_TRUE(validate(ok).empty());
}

TEST(Validate, WellFormedConfigs) {
  for (const auto& entry : fs::directory_iterator(fs::path(COARSELAB_SOURCE_DIR) / "configs")) {
    const auto c = load_config(entry.path());
    const auto ds = validate(c);
    EXPECT_TRUE(ds.empty()) << entry.path() << ": " << (ds.empty() ? "" : ds[0].field + " " + ds[0].message);
  }
}

TEST(Validate, NamedFields) {
  const auto c = parse("experiment = higson-defect\nspace = Q^2\nfunction = cos\nentourage = 1\n"
                       "balls = 5,50\nwindow = 10\n", "v4");
  const auto ds = validate(c);
  EXPECT_TRUE(mentions(ds, "space"));
  EXPECT_TRUE(mentions(ds, "function"));
  EXPECT_TRUE(mentions(ds, "window"));
  EXPECT_TRUE(mentions(validate(parse("experiment = dance\n", "v5")), "experiment"));
  EXPECT_TRUE(mentions(validate(parse("space = F2\n", "v6")), "experiment", "missing"));
}

TEST(Run, OdometerDensity) {
  const std::string x = "1011001110001111";
  const auto c = parse("experiment = odometer-density\nprecision = 16\ntargets = 10\n"
                       "epsilons = 2^-8\nseed = 4\nx = " + x + "\n", "density");
  const auto m = run(c);
  ASSERT_EQ(m.exit_code, 0) << m.error;
  const auto rows = read_csv(fs::path(c.output) / "density.csv");
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"target", "epsilon", "witness_n_decimal",
                                               "achieved_distance_log2"}));
  // x + n agrees with the target on the low 9 digits, by plain integer addition.
  const BigInt xv = BoundaryWord::from_string(x).value();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const BigInt target = BoundaryWord::from_string(rows[i][0]).value();
    const BigInt sum = xv + BigInt(rows[i][2]);
    EXPECT_EQ(sum % 512, target % 512) << rows[i][0];
    EXPECT_LT(std::stoi(rows[i][3]), -8);
  }
}

TEST(Run, VerifyCoarseFreeGroup) {
  const auto c = parse("experiment = verify-coarse\nspace = F2\naction = left-translation\n"
                       "radii = 1,2,4,8\nsample_radius = 5\n", "f2");
  const auto m = run(c);
  ASSERT_EQ(m.exit_code, 0) << m.error;
  EXPECT_EQ(m.verdict, "certified-at-scale");
  int bornologous_rows = 0;
  for (const auto& row : read_csv(fs::path(c.output) / "coarse.csv")) {
    if (row[1] != "bornologous") continue;
    EXPECT_EQ(row[2], row[3]);
    ++bornologous_rows;
  }
  EXPECT_EQ(bornologous_rows, 16);
  const auto report = nlohmann::json::parse(slurp(fs::path(c.output) / "report.json"));
  EXPECT_EQ(report["generators"].size(), 4u);
}

TEST(Run, ConeDiagnostic) {
  const auto c = parse("experiment = cone-diagnostic\ncone_base = cycle:16\nr_e = 5\n"
                       "heights = 10,100\n", "cone");
  const auto m = run(c);
  ASSERT_EQ(m.exit_code, 0) << m.error;
  const auto rows = read_csv(fs::path(c.output) / "cone_diagnostic.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "measured_sep", "bound", "pass"}));
  EXPECT_EQ(rows[1][0], "10");
  EXPECT_EQ(rows[2][0], "100");
  EXPECT_EQ(rows[1][3], "true");
  EXPECT_EQ(rows[2][3], "true");
}

TEST(Run, OrbitEscapeProfile) {
  const auto c = parse("experiment = orbit\nspace = Z^1\naction = shift:1\nx0 = 0\nhorizon = 20\n",
                       "orbit");
  ASSERT_EQ(run(c).exit_code, 0);
  const auto rows = read_csv(fs::path(c.output) / "escape.csv");
  ASSERT_EQ(rows.size(), 22u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"r", "last_time_within_r"}));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][0], rows[i][1]);
}

TEST(Run, RefutedExitCode) {
  const auto c = parse("experiment = verify-coarse\nspace = Z^1\naction = constant:0\n", "const");
  const auto m = run(c);
  EXPECT_EQ(m.exit_code, 1);
  EXPECT_EQ(m.verdict, "refuted");
}

TEST(Run, ExpectedFixedPointVerdict) {
  const auto good = parse("experiment = fixed-point\nspace = Z^1\naction = cyclic:5\nx0 = 0\n"
                          "horizon = 100\nexpect = bounded-orbit\n", "fp1");
  EXPECT_EQ(run(good).exit_code, 0);
  const auto bad = parse("experiment = fixed-point\nspace = Z^1\naction = shift:1\nx0 = 0\n"
                         "horizon = 100\nexpect = bounded-orbit\n", "fp2");
  const auto m = run(bad);
  EXPECT_EQ(m.exit_code, 1);
  EXPECT_EQ(m.verdict, "not-recurrent-at-horizon");  // shift is an isometry
}

TEST(Run, ManifestWrittenOnFailure) {
  const auto c = parse("experiment = orbit\nspace = Z^1\naction = shift:1\n", "fail_config");
  const auto m = run(c);
  EXPECT_EQ(m.exit_code, 2);
  const auto j = nlohmann::json::parse(slurp(fs::path(c.output) / "manifest.json"));
  EXPECT_EQ(j["verdict"], "config-error");
  EXPECT_NE(j["error"].get<std::string>().find("horizon"), std::string::npos);

  // Runtime failure: the cap trips during the orbit.
  auto capped = parse("experiment = orbit\nspace = F2\naction = left-translation\nhorizon = 8\n"
                      "cap = 50\n", "fail_cap");
  capped.cap = 50;
  const auto m2 = run(capped);
  EXPECT_EQ(m2.exit_code, 2);
  const auto j2 = nlohmann::json::parse(slurp(fs::path(capped.output) / "manifest.json"));
  EXPECT_EQ(j2["verdict"], "error");
  EXPECT_NE(j2["error"].get<std::string>().find("50"), std::string::npos);
}

TEST(Run, Reproducible) {
  const std::string text = "experiment = odometer-density\nprecision = 20\ntargets = 6\n"
                           "epsilons = 2^-5, 2^-9, 0.001\nseed = 123\n";
  const auto a = parse(text, "rep_a");
  const auto b = parse(text, "rep_b");
  run(a);
  run(b);
  const std::string csv_a = slurp(fs::path(a.output) / "density.csv");
  EXPECT_EQ(csv_a, slurp(fs::path(b.output) / "density.csv"));
  EXPECT_EQ(std::count(csv_a.begin(), csv_a.end(), '\n'), 19);
  for (const auto& entry : fs::directory_iterator(a.output)) {
    EXPECT_NE(entry.path().extension(), ".tmp");
  }
  const auto other = parse("experiment = odometer-density\nprecision = 20\ntargets = 6\n"
                           "epsilons = 2^-5, 2^-9, 0.001\nseed = 124\n", "rep_c");
  run(other);
  EXPECT_NE(csv_a, slurp(fs::path(other.output) / "density.csv"));
}

}  // namespace
}  // namespace coarselab
