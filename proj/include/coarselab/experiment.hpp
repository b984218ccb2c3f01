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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coarselab/actions.hpp"
#include "coarselab/spaces.hpp"

namespace coarselab {

// One experiment per file, "key = value" per line, '#' comments.
//
//   experiment = verify-coarse | orbit | fixed-point | odometer-density |
//                cone-diagnostic | higson-defect
//
// The full key list per experiment is in docs/experiments.md.
struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> entries;  // everything, experiment included
  std::string output = "out";
  std::uint64_t seed = 0;
  std::size_t cap = kDefaultCap;

  bool has(const std::string& key) const { return entries.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
};

// Throws InvalidArgument on malformed lines or duplicate keys.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

struct Diagnostic {
  std::string field;
  std::string message;
};

// Static checks only. An empty list means the config can be run.
std::vector<Diagnostic> validate(const ExperimentConfig& config);

struct RunManifest {
  std::map<std::string, std::string> config;
  std::string version;
  double wall_seconds = 0.0;
  std::string verdict;
  std::vector<std::string> files;
  std::string error;
  int exit_code = 0;  // 0 pass, 1 refuted, 2 configuration or run error
};

// Runs the experiment into config.output and always writes manifest.json
// there, also when the run fails.
RunManifest run(const ExperimentConfig& config);

std::string library_version();

// Descriptor parsing shared by the runner and the tests.
//   space:  Z^k | N^k | F2 | tree | cone (the cone_* keys describe the cone)
//   action: left-translation | right-translation:<element> | shift:<vector> |
//           odometer | identity | constant:<point> | cyclic:<period> |
//           rotation:<step>
SpaceHandle make_space(const ExperimentConfig& config);
ActionSpec make_action(const ExperimentConfig& config, const SpaceHandle& space);
Point parse_point(const SpaceHandle& space, const std::string& text);

// Writes through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace coarselab
