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

// coarselab: run, validate or batch-run experiment configs.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coarselab/error.hpp"
#include "coarselab/experiment.hpp"

namespace fs = std::filesystem;
using coarselab::ExperimentConfig;

namespace {

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;

  void apply(ExperimentConfig& c, const std::string& subdir = "") const {
    if (out) c.output = (fs::path(*out) / subdir).string();
    if (seed) c.seed = *seed;
    if (cap) c.cap = *cap;
  }
};

int run_one(const fs::path& path, const Overrides& o, const std::string& subdir) {
  ExperimentConfig c;
  try {
    c = coarselab::load_config(path);
  } catch (const coarselab::Error& e) {
    std::cerr << path.string() << ": " << e.what() << "\n";
    return 2;
  }
  o.apply(c, subdir);
  const auto m = coarselab::run(c);
  std::cout << path.string() << ": " << m.verdict;
  if (!m.error.empty()) std::cout << " (" << m.error << ")";
  std::cout << " -> " << c.output << "\n";
  return m.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse geometry experiment runner"};
  app.require_subcommand(1);
  Overrides o;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t cap = 0;
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "seed for all sampling");
  app.add_option("--cap", cap, "cardinality cap on enumerations");

  std::string target;
  auto* run_cmd = app.add_subcommand("run", "run one experiment config");
  run_cmd->add_option("config", target)->required()->check(CLI::ExistingFile);
  auto* validate_cmd = app.add_subcommand("validate", "static checks on a config");
  validate_cmd->add_option("config", target)->required()->check(CLI::ExistingFile);
  auto* batch_cmd = app.add_subcommand("batch", "run every *.cfg in a directory");
  batch_cmd->add_option("dir", target)->required()->check(CLI::ExistingDirectory);
  for (auto* sub : {run_cmd, validate_cmd, batch_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (app.count("--out")) o.out = out;
  if (app.count("--seed")) o.seed = seed;
  if (app.count("--cap")) o.cap = cap;

  if (*validate_cmd) {
    try {
      auto c = coarselab::load_config(target);
      o.apply(c);
      const auto diags = coarselab::validate(c);
      for (const auto& d : diags) std::cout << d.field << ": " << d.message << "\n";
      if (diags.empty()) std::cout << "ok\n";
      return diags.empty() ? 0 : 2;
    } catch (const coarselab::Error& e) {
      std::cout << e.what() << "\n";
      return 2;
    }
  }
  if (*run_cmd) return run_one(target, o, "");

  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(target)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cfg") {
      configs.push_back(entry.path());
    }
  }
  std::sort(configs.begin(), configs.end());
  if (!o.out) o.out = "out";
  int worst = 0;
  for (const auto& p : configs) {
    worst = std::max(worst, run_one(p, o, p.stem().string()));
  }
  return worst;
}
