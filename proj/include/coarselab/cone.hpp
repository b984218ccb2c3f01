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
#include <iosfwd>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coarselab/execution.hpp"
#include "coarselab/point.hpp"

namespace coarselab {

// Scale function lambda: [0, inf) -> [0, inf) with lambda(t) = 0 iff t = 0.
class LambdaFunction {
 public:
  enum class Kind { linear, square_root, table };

  static LambdaFunction linear();
  static LambdaFunction square_root();
  // Piecewise linear through (0, 0) and the given knots (t strictly
  // increasing, t > 0, lambda > 0), extended past the last knot with the
  // last slope. increasing_unbounded is checked against the knots.
  static LambdaFunction table(std::vector<std::pair<double, double>> knots,
                              bool increasing_unbounded);

  double operator()(double t) const;
  Kind kind() const { return kind_; }
  bool increasing_unbounded() const { return increasing_unbounded_; }
  std::string name() const;

 private:
  Kind kind_ = Kind::linear;
  bool increasing_unbounded_ = true;
  std::vector<std::pair<double, double>> knots_;
};

struct BaseEdge {
  int u = 0;
  int v = 0;
  double length = 0.0;
};

// Finite weighted graph standing in for the compact path metric space M.
// Distances are all-pairs shortest paths.
class BaseGraph {
 public:
  static BaseGraph from_edges(int node_count, std::vector<BaseEdge> edges,
                              std::vector<std::string> labels = {});
  static BaseGraph cycle(int node_count, double edge_length);
  // Text format: one edge per line, "<node> <node> <length>", where length is
  // a decimal or a rational "p/q". '#' starts a comment. Nodes are numbered
  // in order of first appearance.
  static BaseGraph parse_edge_list(std::istream& in);
  static BaseGraph load_edge_list(const std::string& path);

  int size() const { return node_count_; }
  const std::vector<BaseEdge>& edges() const { return edges_; }
  const std::string& label(int node) const { return labels_.at(node); }
  double distance(int u, int v) const {
    return dist_[static_cast<std::size_t>(u) * node_count_ + v];
  }
  double diameter() const;

 private:
  int node_count_ = 0;
  std::vector<BaseEdge> edges_;
  std::vector<std::string> labels_;
  std::vector<double> dist_;
};

// Height grid over a base graph. heights()[0] is always 0 (the apex row,
// which collapses to the single grid node 0).
class ConeGrid {
 public:
  ConeGrid(BaseGraph base, std::vector<double> heights);
  // Apex plus t_i = 2^(i/4) for i >= -8 up to t_max, merged with extra.
  static ConeGrid geometric(BaseGraph base, double t_max,
                            const std::vector<double>& extra = {});

  const BaseGraph& base() const { return base_; }
  const std::vector<double>& heights() const { return heights_; }
  std::size_t node_count() const;
  bool on_grid(const ConePoint& p) const;
  int node_id(const ConePoint& p) const;  // throws InvalidArgument off grid
  ConePoint point(int node_id) const;
  std::vector<ConePoint> points() const;
  int row_of(double height) const;  // -1 if not a grid height

  // Inserts the midpoint between each pair of consecutive heights.
  ConeGrid refined() const;

 private:
  BaseGraph base_;
  std::vector<double> heights_;
};

// Lambda-length of the polyline through the given points: the sum over
// consecutive pairs of |t_j - t_{j+1}| + max(lambda(t_j), lambda(t_{j+1}))
// * d(x_j, x_{j+1}), with base distance 0 whenever one end is the apex.
double lambda_length(const ConeGrid& grid, const LambdaFunction& lambda,
                     std::span<const ConePoint> path);

// Weighted graph on the grid points. Edges join height neighbours within a
// fibre, base neighbours within a row, and base neighbours in adjacent rows
// (fibre diagonals); each edge weighs the two-point lambda-length of its
// ends. Shortest paths therefore bound d_lambda from above.
class ConeMetric {
 public:
  ConeMetric(ConeGrid grid, LambdaFunction lambda);

  const ConeGrid& grid() const { return grid_; }
  const LambdaFunction& lambda() const { return lambda_; }

  double upper(const ConePoint& p, const ConePoint& q) const;
  double lower(const ConePoint& p, const ConePoint& q) const;

  // Single-source shortest paths, indexed by grid node id. Uncached.
  std::vector<double> distances_from(const ConePoint& source) const;
  // Same, memoised per source. Safe to call concurrently.
  std::shared_ptr<const std::vector<double>> cached_distances_from(
      const ConePoint& source) const;

 private:
  struct Arc {
    int to;
    double weight;
  };
  ConeGrid grid_;
  LambdaFunction lambda_;
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<int, std::shared_ptr<const std::vector<double>>>
      cache_;
};

inline double cone_distance_upper(const ConeMetric& metric, const ConePoint& p,
                                  const ConePoint& q) {
  return metric.upper(p, q);
}

// max(|t_p - t_q|, min over the lowest height h a path could reach of
// t_p + t_q - 2h + lambda(h) d(x_p, x_q)); the second term only when lambda
// is flagged increasing.
inline double cone_distance_lower(const ConeMetric& metric, const ConePoint& p,
                                  const ConePoint& q) {
  return metric.lower(p, q);
}

struct CompactificationRow {
  double height = 0.0;
  double measured_separation = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::size_t pairs_within = 0;
  ConePoint witness_p;
  ConePoint witness_q;
};

// For each height t: the largest base distance d(x, y) over grid pairs with
// both heights >= t and upper distance <= r_e, against r_e / lambda(t).
// Requires lambda flagged increasing-unbounded.
std::vector<CompactificationRow> compactification_diagnostic(
    const ConeMetric& metric, double r_e, std::vector<double> heights,
    double slack = 0.1, Execution exec = Execution::parallel);

}  // namespace coarselab
