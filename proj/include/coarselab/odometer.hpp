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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "coarselab/execution.hpp"
#include "coarselab/point.hpp"

namespace coarselab {

using BigInt = boost::multiprecision::cpp_int;

// The adding machine on tree vertices: binary increment that keeps the
// length, except 1.(1,...,1) = (1,0,...,0) one digit longer and 1.* = (0).
// Throws InvalidArgument when the result would exceed TreeVertex::kMaxDepth.
TreeVertex odometer_step(const TreeVertex& v);

// Truncation of a point of the Cantor set {0,1}^N to its first `precision`
// digits, stored least significant first.
class BoundaryWord {
 public:
  BoundaryWord() = default;
  explicit BoundaryWord(std::vector<std::uint8_t> bits);
  static BoundaryWord zeros(std::size_t precision);
  static BoundaryWord ones(std::size_t precision);
  // "0110..." with digit i_0 first.
  static BoundaryWord from_string(const std::string& digits);
  // The bottom `precision` digits of a non-negative integer.
  static BoundaryWord from_integer(const BigInt& value, std::size_t precision);

  std::size_t precision() const { return bits_.size(); }
  int bit(std::size_t k) const { return bits_.at(k); }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  // Sum of i_k 2^k over the first `digits` digits.
  BigInt value(std::size_t digits) const;
  BigInt value() const { return value(precision()); }
  std::string to_string() const;

  friend bool operator==(const BoundaryWord&, const BoundaryWord&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct BoundaryStep {
  BoundaryWord word;
  bool overflow = false;  // a carry left the truncation window
};

BoundaryStep odometer_step_boundary(const BoundaryWord& z);

// n . z by exact addition on the bottom `precision` digits.
BoundaryStep odometer_advance(const BoundaryWord& z, const BigInt& n);

struct GromovProduct {
  int value = 0;
  // True when the arguments agree on every digit both carry: value is then
  // only a lower bound.
  bool lower_bound_only = false;
};

// Length of the common low-order prefix.
GromovProduct gromov_product(const TreeVertex& x, const TreeVertex& y);
GromovProduct gromov_product(const BoundaryWord& x, const BoundaryWord& y);

// 2^-exponent, or an upper bound 2^-exponent when upper_bound_only.
struct DyadicDistance {
  int exponent = 0;
  bool upper_bound_only = false;

  double to_double() const;
  // Exact comparison against 2^-k.
  bool less_than_pow2(int k) const { return exponent > k; }
};

// d(x, y) = 2^-(x|y). Equal precision required (PrecisionError otherwise).
// Words equal through the whole precision N give the bound 2^-N.
DyadicDistance boundary_distance(const BoundaryWord& x, const BoundaryWord& y);

struct MinimalityWitness {
  int target_precision = 0;  // N
  BigInt a;  // 2^(N+1) - sum_{k<=N} i_k 2^k
  BigInt b;  // sum_{k<=N} j_k 2^k
  BigInt n;  // a + b
};

// Step count n with the first N + 1 digits of n.x equal to those of y.
// Both precisions must exceed N.
MinimalityWitness minimality_witness(const BoundaryWord& x,
                                     const BoundaryWord& y, int target);

// Smallest N with 2^-N <= epsilon (N >= 0).
int precision_for_epsilon(double epsilon);

struct DensityRow {
  std::size_t target_index = 0;
  BoundaryWord target;
  double epsilon = 0.0;
  int target_precision = 0;
  BigInt witness;
  DyadicDistance achieved;
  bool verified = false;  // achieved < epsilon, checked by iteration
};

std::vector<DensityRow> density_experiment(
    const BoundaryWord& x, const std::vector<BoundaryWord>& targets,
    const std::vector<double>& epsilons);

// Exhaustive sweep over all vertices of depth <= max_depth (the root
// included), unordered pairs with i <= j.
struct LipschitzSweep {
  std::uint64_t pairs = 0;
  std::uint64_t violations = 0;
  std::int64_t max_excess = 0;  // max d(1x, 1y) - d(x, y)
  std::optional<std::pair<TreeVertex, TreeVertex>> worst;
};

std::vector<TreeVertex> vertices_up_to_depth(int max_depth);

// Checks d(1.x, 1.y) <= d(x, y) + slack on every pair.
LipschitzSweep odometer_lipschitz_sweep(int max_depth, int slack = 2,
                                        Execution exec = Execution::parallel);

struct GromovSweep {
  std::uint64_t pairs = 0;
  std::uint64_t mismatches = 0;
  std::optional<std::pair<TreeVertex, TreeVertex>> first_mismatch;
};

// Compares the common-prefix Gromov product with
// (d(x,*) + d(y,*) - d(x,y)) / 2, where d is supplied by the caller so the
// tests can plug in an independent distance.
using TreeDistance = std::int64_t (*)(const TreeVertex&, const TreeVertex&);
GromovSweep gromov_consistency_sweep(int max_depth, TreeDistance distance,
                                     Execution exec = Execution::parallel);

std::int64_t tree_distance(const TreeVertex& x, const TreeVertex& y);

}  // namespace coarselab
