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

#include "coarselab/cone.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

#include "coarselab/error.hpp"

namespace coarselab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_length(const std::string& token) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    const auto slash = token.find('/');
    if (slash == std::string::npos) {
      value = std::stod(token, &used);
      if (used != token.size()) throw InvalidArgument("");
    } else {
      const std::string num = token.substr(0, slash);
      const std::string den = token.substr(slash + 1);
      std::size_t used_num = 0;
      std::size_t used_den = 0;
      const long long p = std::stoll(num, &used_num);
      const long long q = std::stoll(den, &used_den);
      if (used_num != num.size() || used_den != den.size() || q == 0) {
        throw InvalidArgument("");
      }
      value = static_cast<double>(p) / static_cast<double>(q);
    }
  } catch (const std::exception&) {
    throw InvalidArgument("bad edge length '" + token + "'");
  }
  return value;
}

}  // namespace

LambdaFunction LambdaFunction::linear() { return {}; }

LambdaFunction LambdaFunction::square_root() {
  LambdaFunction f;
  f.kind_ = Kind::square_root;
  return f;
}

LambdaFunction LambdaFunction::table(std::vector<std::pair<double, double>> knots,
                                     bool increasing_unbounded) {
  if (knots.empty()) throw InvalidArgument("lambda table needs knots");
  double prev_t = 0.0;
  double prev_v = 0.0;
  for (const auto& [t, v] : knots) {
    if (!(t > prev_t)) throw InvalidArgument("lambda knots must increase in t");
    if (!(v > 0.0)) throw InvalidArgument("lambda must be positive for t > 0");
    if (increasing_unbounded && v < prev_v) {
      throw InvalidArgument("lambda table flagged increasing but decreases");
    }
    prev_t = t;
    prev_v = v;
  }
  if (increasing_unbounded) {
    const double last_slope =
        knots.size() == 1
            ? knots[0].second / knots[0].first
            : (knots.back().second - knots[knots.size() - 2].second) /
                  (knots.back().first - knots[knots.size() - 2].first);
    if (!(last_slope > 0.0)) {
      throw InvalidArgument("lambda table flagged unbounded but flat at the end");
    }
  }
  LambdaFunction f;
  f.kind_ = Kind::table;
  f.knots_ = std::move(knots);
  f.increasing_unbounded_ = increasing_unbounded;
  return f;
}

double LambdaFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::linear: return t;
    case Kind::square_root: return std::sqrt(t);
    case Kind::table: {
      double t0 = 0.0;
      double v0 = 0.0;
      for (const auto& [t1, v1] : knots_) {
        if (t <= t1) return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        t0 = t1;
        v0 = v1;
      }
      const auto n = knots_.size();
      const double slope =
          n == 1 ? knots_[0].second / knots_[0].first
                 : (knots_[n - 1].second - knots_[n - 2].second) /
                       (knots_[n - 1].first - knots_[n - 2].first);
      return v0 + slope * (t - t0);
    }
  }
  return t;
}

std::string LambdaFunction::name() const {
  switch (kind_) {
    case Kind::linear: return "linear";
    case Kind::square_root: return "sqrt";
    case Kind::table: return "table";
  }
  return "?";
}

BaseGraph BaseGraph::from_edges(int node_count, std::vector<BaseEdge> edges,
                                std::vector<std::string> labels) {
  if (node_count < 1) throw InvalidArgument("base graph needs a node");
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= node_count || e.v >= node_count) {
      throw InvalidArgument("edge endpoint out of range");
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw InvalidArgument("edge lengths must be positive");
    }
  }
  BaseGraph g;
  g.node_count_ = node_count;
  g.edges_ = std::move(edges);
  if (labels.empty()) {
    for (int i = 0; i < node_count; ++i) labels.push_back(std::to_string(i));
  }
  if (static_cast<int>(labels.size()) != node_count) {
    throw InvalidArgument("label count does not match node count");
  }
  g.labels_ = std::move(labels);

  std::vector<std::vector<std::pair<int, double>>> adj(node_count);
  for (const auto& e : g.edges_) {
    adj[e.u].emplace_back(e.v, e.length);
    adj[e.v].emplace_back(e.u, e.length);
  }
  const auto n = static_cast<std::size_t>(node_count);
  g.dist_.assign(n * n, kInf);
  using Item = std::pair<double, int>;
  for (int src = 0; src < node_count; ++src) {
    double* row = &g.dist_[src * n];
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    row[src] = 0.0;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > row[u]) continue;
      for (auto [v, w] : adj[u]) {
        if (d + w < row[v]) {
          row[v] = d + w;
          pq.emplace(row[v], v);
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (row[v] == kInf) throw InvalidArgument("disconnected base graph");
    }
  }
  return g;
}

BaseGraph BaseGraph::cycle(int node_count, double edge_length) {
  if (node_count < 3) throw InvalidArgument("a cycle needs at least 3 nodes");
  std::vector<BaseEdge> edges;
  for (int i = 0; i < node_count; ++i) {
    edges.push_back({i, (i + 1) % node_count, edge_length});
  }
  return from_edges(node_count, std::move(edges));
}

BaseGraph BaseGraph::parse_edge_list(std::istream& in) {
  std::map<std::string, int> ids;
  std::vector<std::string> labels;
  std::vector<BaseEdge> edges;
  auto id_of = [&](const std::string& name) {
    auto [it, inserted] = ids.emplace(name, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(name);
    return it->second;
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a, b, len, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b >> len) || (fields >> extra)) {
      throw InvalidArgument("edge list line " + std::to_string(line_no) +
                            ": expected '<node> <node> <length>'");
    }
    const int u = id_of(a);
    const int v = id_of(b);
    edges.push_back({u, v, parse_length(len)});
  }
  if (labels.empty()) throw InvalidArgument("edge list has no edges");
  const int n = static_cast<int>(labels.size());
  return from_edges(n, std::move(edges), std::move(labels));
}

BaseGraph BaseGraph::load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open edge list '" + path + "'");
  return parse_edge_list(in);
}

double BaseGraph::diameter() const {
  return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
}

ConeGrid::ConeGrid(BaseGraph base, std::vector<double> heights)
    : base_(std::move(base)), heights_(std::move(heights)) {
  if (heights_.size() < 2 || heights_.front() != 0.0) {
    throw InvalidArgument("height grid must start at 0 and have a positive row");
  }
  for (std::size_t i = 1; i < heights_.size(); ++i) {
    if (!(heights_[i] > heights_[i - 1]) || !std::isfinite(heights_[i])) {
      throw InvalidArgument("height grid must be strictly increasing");
    }
  }
}

ConeGrid ConeGrid::geometric(BaseGraph base, double t_max,
                             const std::vector<double>& extra) {
  if (!(t_max > 0.0)) throw InvalidArgument("t_max must be positive");
  std::vector<double> heights{0.0};
  for (int i = -8;; ++i) {
    const double t = std::exp2(i / 4.0);
    if (t > t_max) break;
    heights.push_back(t);
  }
  heights.push_back(t_max);
  for (double t : extra) {
    if (!(t >= 0.0) || t > t_max) {
      throw InvalidArgument("extra grid height outside [0, t_max]");
    }
    heights.push_back(t);
  }
  std::sort(heights.begin(), heights.end());
  heights.erase(std::unique(heights.begin(), heights.end()), heights.end());
  return ConeGrid(std::move(base), std::move(heights));
}

std::size_t ConeGrid::node_count() const {
  return 1 + (heights_.size() - 1) * static_cast<std::size_t>(base_.size());
}

int ConeGrid::row_of(double height) const {
  auto it = std::lower_bound(heights_.begin(), heights_.end(), height);
  if (it == heights_.end() || *it != height) return -1;
  return static_cast<int>(it - heights_.begin());
}

bool ConeGrid::on_grid(const ConePoint& p) const {
  if (p.is_apex()) return true;
  return p.vertex >= 0 && p.vertex < base_.size() && row_of(p.height) > 0;
}

int ConeGrid::node_id(const ConePoint& p) const {
  if (!on_grid(p)) throw InvalidArgument("cone point " + to_string(p) + " is off grid");
  if (p.is_apex()) return 0;
  return 1 + (row_of(p.height) - 1) * base_.size() + p.vertex;
}

ConePoint ConeGrid::point(int node_id) const {
  if (node_id == 0) return {0, 0.0};
  const int row = 1 + (node_id - 1) / base_.size();
  const int vertex = (node_id - 1) % base_.size();
  return {vertex, heights_.at(row)};
}

std::vector<ConePoint> ConeGrid::points() const {
  std::vector<ConePoint> out;
  out.reserve(node_count());
  for (std::size_t id = 0; id < node_count(); ++id) {
    out.push_back(point(static_cast<int>(id)));
  }
  return out;
}

ConeGrid ConeGrid::refined() const {
  std::vector<double> heights{heights_.front()};
  for (std::size_t i = 1; i < heights_.size(); ++i) {
    heights.push_back(0.5 * (heights_[i - 1] + heights_[i]));
    heights.push_back(heights_[i]);
  }
  return ConeGrid(base_, std::move(heights));
}

double lambda_length(const ConeGrid& grid, const LambdaFunction& lambda,
                     std::span<const ConePoint> path) {
  if (path.size() < 2) throw InvalidArgument("a path needs at least two points");
  for (const auto& p : path) {
    if (!grid.on_grid(p)) {
      throw InvalidArgument("cone point " + to_string(p) + " is off grid");
    }
  }
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < path.size(); ++j) {
    const ConePoint& p = path[j];
    const ConePoint& q = path[j + 1];
    const double base = (p.is_apex() || q.is_apex())
                            ? 0.0
                            : grid.base().distance(p.vertex, q.vertex);
    total += std::abs(p.height - q.height) +
             std::max(lambda(p.height), lambda(q.height)) * base;
  }
  return total;
}

ConeMetric::ConeMetric(ConeGrid grid, LambdaFunction lambda)
    : grid_(std::move(grid)), lambda_(std::move(lambda)) {
  const auto& heights = grid_.heights();
  const auto& base = grid_.base();
  const int n = base.size();
  for (std::size_t row = 1; row < heights.size(); ++row) {
    if (!(lambda_(heights[row]) > 0.0)) {
      throw InvalidArgument("lambda must be positive away from the apex");
    }
  }
  std::vector<std::vector<Arc>> adj(grid_.node_count());
  auto link = [&](int a, int b, double w) {
    adj[a].push_back({b, w});
    adj[b].push_back({a, w});
  };
  auto id = [&](int vertex, std::size_t row) {
    return row == 0 ? 0 : 1 + static_cast<int>(row - 1) * n + vertex;
  };
  for (std::size_t row = 0; row + 1 < heights.size(); ++row) {
    const double dt = heights[row + 1] - heights[row];
    for (int v = 0; v < n; ++v) link(id(v, row), id(v, row + 1), dt);
    if (row == 0) continue;
    const double lam = std::max(lambda_(heights[row]), lambda_(heights[row + 1]));
    for (const auto& e : base.edges()) {
      const double d = base.distance(e.u, e.v);
      link(id(e.u, row), id(e.v, row + 1), dt + lam * d);
      link(id(e.v, row), id(e.u, row + 1), dt + lam * d);
    }
  }
  for (std::size_t row = 1; row < heights.size(); ++row) {
    const double lam = lambda_(heights[row]);
    for (const auto& e : base.edges()) {
      link(id(e.u, row), id(e.v, row), lam * base.distance(e.u, e.v));
    }
  }
  offsets_.assign(adj.size() + 1, 0);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    offsets_[i + 1] = offsets_[i] + adj[i].size();
  }
  arcs_.reserve(offsets_.back());
  for (const auto& list : adj) arcs_.insert(arcs_.end(), list.begin(), list.end());
}

std::vector<double> ConeMetric::distances_from(const ConePoint& source) const {
  const int src = grid_.node_id(source);
  std::vector<double> dist(grid_.node_count(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) {
      const Arc& a = arcs_[k];
      const double nd = d + a.weight;
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        pq.emplace(nd, a.to);
      }
    }
  }
  return dist;
}

std::shared_ptr<const std::vector<double>> ConeMetric::cached_distances_from(
    const ConePoint& source) const {
  const int src = grid_.node_id(source);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(src); it != cache_.end()) return it->second;
  }
  auto row = std::make_shared<const std::vector<double>>(distances_from(source));
  std::lock_guard lock(cache_mutex_);
  return cache_.emplace(src, std::move(row)).first->second;
}

double ConeMetric::upper(const ConePoint& p, const ConePoint& q) const {
  if (p == q) return 0.0;
  // Shortest paths are symmetric; always search from the smaller id so the
  // value does not depend on argument order.
  const int a = grid_.node_id(p);
  const int b = grid_.node_id(q);
  if (a <= b) return (*cached_distances_from(p))[b];
  return (*cached_distances_from(q))[a];
}

double ConeMetric::lower(const ConePoint& p, const ConePoint& q) const {
  if (p == q) return 0.0;
  const double t = p.height;
  const double s = q.height;
  const double vertical = std::abs(t - s);
  const double base = (p.is_apex() || q.is_apex())
                          ? 0.0
                          : grid_.base().distance(p.vertex, q.vertex);
  if (base == 0.0 || !lambda_.increasing_unbounded()) return vertical;
  // A path whose lowest height is h costs at least t + s - 2h vertically and
  // lambda(h) * base angularly. Bound the minimum over h in [0, min(t, s)]
  // from below cell by cell.
  constexpr int kCells = 256;
  const double m = std::min(t, s);
  double best = t + s;  // h = 0: through the apex
  for (int k = 0; k < kCells; ++k) {
    const double lo = m * k / kCells;
    const double hi = m * (k + 1) / kCells;
    best = std::min(best, t + s - 2.0 * hi + lambda_(lo) * base);
  }
  return std::max(vertical, best);
}

std::vector<CompactificationRow> compactification_diagnostic(
    const ConeMetric& metric, double r_e, std::vector<double> heights,
    double slack, Execution exec) {
  const auto& lambda = metric.lambda();
  if (!lambda.increasing_unbounded()) {
    throw InvalidArgument(
        "compactification diagnostic needs an increasing, unbounded lambda");
  }
  if (!(r_e >= 0.0)) throw InvalidArgument("entourage radius must be >= 0");
  if (!(slack >= 0.0)) throw InvalidArgument("slack must be >= 0");
  if (heights.empty()) throw InvalidArgument("no diagnostic heights");
  std::sort(heights.begin(), heights.end());
  heights.erase(std::unique(heights.begin(), heights.end()), heights.end());
  const auto& grid = metric.grid();
  const double t_top = grid.heights().back();
  for (double t : heights) {
    if (!(t > 0.0)) throw InvalidArgument("diagnostic heights must be positive");
    if (t > t_top) throw InvalidArgument("diagnostic height above the grid");
  }

  struct Best {
    double sep = -1.0;
    int p = -1;
    int q = -1;
    std::size_t count = 0;
    // Larger separation wins; ties go to the lexicographically smaller pair.
    bool improves(double s, int a, int b) const {
      if (s != sep) return s > sep;
      return std::pair(a, b) < std::pair(p, q);
    }
  };
  const std::size_t rows = heights.size();
  std::vector<int> sources;
  for (std::size_t id = 1; id < grid.node_count(); ++id) {
    if (grid.point(static_cast<int>(id)).height >= heights.front()) {
      sources.push_back(static_cast<int>(id));
    }
  }
  std::vector<Best> merged(rows);

  auto scan = [&](int src, std::vector<Best>& acc) {
    const ConePoint p = grid.point(src);
    const std::vector<double> dist = metric.distances_from(p);
    for (int dst : sources) {
      if (dst < src || dist[dst] > r_e) continue;
      const ConePoint q = grid.point(dst);
      const double low = std::min(p.height, q.height);
      // Deepest bucket whose height the pair clears.
      auto it = std::upper_bound(heights.begin(), heights.end(), low);
      if (it == heights.begin()) continue;
      const std::size_t bucket = static_cast<std::size_t>(it - heights.begin()) - 1;
      const double sep = grid.base().distance(p.vertex, q.vertex);
      Best& b = acc[bucket];
      ++b.count;
      if (b.improves(sep, src, dst)) {
        b.sep = sep;
        b.p = src;
        b.q = dst;
      }
    }
  };
  auto merge_one = [](Best& into, const Best& from) {
    into.count += from.count;
    if (from.p >= 0 && into.improves(from.sep, from.p, from.q)) {
      into.sep = from.sep;
      into.p = from.p;
      into.q = from.q;
    }
  };
  auto merge = [&](std::vector<Best>& into, const std::vector<Best>& from) {
    for (std::size_t i = 0; i < into.size(); ++i) merge_one(into[i], from[i]);
  };

  const auto n_sources = static_cast<std::ptrdiff_t>(sources.size());
  if (exec == Execution::serial) {
    for (std::ptrdiff_t i = 0; i < n_sources; ++i) scan(sources[i], merged);
  } else {
#pragma omp parallel
    {
      std::vector<Best> local(rows);
#pragma omp for schedule(dynamic, 4)
      for (std::ptrdiff_t i = 0; i < n_sources; ++i) scan(sources[i], local);
#pragma omp critical(coarselab_cone_merge)
      merge(merged, local);
    }
  }

  // Row j covers every pair whose lower height is >= heights[j].
  for (std::size_t j = rows - 1; j-- > 0;) merge_one(merged[j], merged[j + 1]);

  std::vector<CompactificationRow> out;
  for (std::size_t j = 0; j < rows; ++j) {
    CompactificationRow row;
    row.height = heights[j];
    row.bound = r_e / lambda(heights[j]);
    row.pairs_within = merged[j].count;
    if (merged[j].p >= 0) {
      row.measured_separation = merged[j].sep;
      row.witness_p = grid.point(merged[j].p);
      row.witness_q = grid.point(merged[j].q);
    }
    row.pass = row.measured_separation <= row.bound * (1.0 + slack);
    out.push_back(row);
  }
  return out;
}

}  // namespace coarselab
