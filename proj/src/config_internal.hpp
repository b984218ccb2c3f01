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

// Value parsing shared by config.cpp and experiment.cpp.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "coarselab/cone.hpp"
#include "coarselab/experiment.hpp"

namespace coarselab::detail {

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// Decimal, "p/q", "2^k" or "2^-k".
double parse_number(const std::string& field, const std::string& text);
std::int64_t parse_integer(const std::string& field, const std::string& text);
std::vector<double> parse_numbers(const std::string& field, const std::string& text);

// Base graph, lambda and height grid from the cone_* keys; `extra` heights
// are merged into the grid.
std::shared_ptr<const ConeMetric> make_cone_metric(const ExperimentConfig& config,
                                                   const std::vector<double>& extra);

}  // namespace coarselab::detail
