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
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "coarselab/point.hpp"

namespace coarselab {

class ConeMetric;

enum class ModelTag { lattice, free_group, binary_tree, cone };

std::string to_string(ModelTag tag);

inline constexpr std::size_t kDefaultCap = 1'000'000;

// Immutable handle on one of the concrete proper metric spaces: Z^k / N^k
// with a word metric, the free group F_2, the rooted binary tree, or a cone
// over a finite graph. Lattice, word and tree distances are exact integers.
// Cone distances are the shortest-path upper bound computed by ConeMetric.
class SpaceHandle {
 public:
  // Z^k (natural = false) or N^k (natural = true) with the standard
  // generators. The N^k metric is the restriction of the Z^k word metric.
  static SpaceHandle lattice(int rank, bool natural);
  // Z^k / N^k with a custom generating set; the metric is the word metric
  // of the symmetric set {+g, -g}. Generators must span Z^k.
  static SpaceHandle lattice(int rank, bool natural,
                             std::vector<LatticePoint> generators);
  static SpaceHandle free_group();
  static SpaceHandle binary_tree();
  static SpaceHandle cone(std::shared_ptr<const ConeMetric> metric,
                          ConePoint basepoint);

  ModelTag tag() const { return tag_; }
  const Point& basepoint() const { return basepoint_; }
  std::size_t cap() const { return cap_; }
  SpaceHandle with_cap(std::size_t cap) const;
  std::string describe() const;

  // Lattice-only accessors.
  int rank() const { return rank_; }
  bool natural() const { return natural_; }
  bool standard_generators() const { return standard_; }
  const std::vector<LatticePoint>& generators() const { return generators_; }

  const ConeMetric& cone_metric() const;
  std::shared_ptr<const ConeMetric> cone_metric_ptr() const { return cone_; }

  // True if p is a point of this model (right alternative, right rank,
  // non-negative for N^k, on the grid for cones).
  bool contains(const Point& p) const;

  // Exact distance for the discrete models; throws ModelMismatch for cones.
  std::int64_t int_distance(const Point& p, const Point& q) const;
  double distance(const Point& p, const Point& q) const;

  // Every point at distance <= r from center. Throws CapExceeded rather than
  // truncating, and InvalidArgument for r < 0.
  std::vector<Point> closed_ball(const Point& center, double r) const;

  // Group law for the lattice and free-group models (left factor first).
  Point multiply(const Point& lhs, const Point& rhs) const;
  Point identity() const;
  // The generators the word metric is built from, as points (including
  // inverses for Z^k and F_2; only the positive ones for N^k).
  std::vector<Point> word_generators() const;

 private:
  SpaceHandle() = default;
  void require(const Point& p) const;
  std::int64_t lattice_distance(const LatticePoint& p,
                                const LatticePoint& q) const;

  ModelTag tag_ = ModelTag::lattice;
  Point basepoint_;
  std::size_t cap_ = kDefaultCap;
  int rank_ = 0;
  bool natural_ = false;
  bool standard_ = true;
  std::vector<LatticePoint> generators_;
  std::shared_ptr<const ConeMetric> cone_;
};

inline double distance(const SpaceHandle& s, const Point& p, const Point& q) {
  return s.distance(p, q);
}

inline std::vector<Point> closed_ball(const SpaceHandle& s, const Point& center,
                                      double r) {
  return s.closed_ball(center, r);
}

inline FreeWord reduce_word(std::string_view raw) {
  return FreeWord::reduce(raw);
}

// Breadth-first distances from the basepoint over the Cayley graph of the
// generating set, independent of the closed-form distance. For N^k the
// search only moves within N^k. Lattice and free-group models only.
std::vector<std::pair<Point, std::int64_t>> word_metric_bfs_oracle(
    const SpaceHandle& s, int radius);

}  // namespace coarselab
