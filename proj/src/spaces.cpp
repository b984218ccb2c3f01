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

#include "coarselab/spaces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "coarselab/cone.hpp"
#include "coarselab/error.hpp"

namespace coarselab {

namespace {

LatticePoint unit(int rank, int i, std::int64_t sign) {
  LatticePoint e{std::vector<std::int64_t>(rank, 0)};
  e.coords[i] = sign;
  return e;
}

LatticePoint add(const LatticePoint& p, const LatticePoint& q) {
  LatticePoint out = p;
  for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += q.coords[i];
  return out;
}

LatticePoint negate(const LatticePoint& p) {
  LatticePoint out = p;
  for (auto& c : out.coords) c = -c;
  return out;
}

bool non_negative(const LatticePoint& p) {
  return std::all_of(p.coords.begin(), p.coords.end(),
                     [](std::int64_t c) { return c >= 0; });
}

std::int64_t floor_radius(double r) {
  if (!(r >= 0.0)) throw InvalidArgument("ball radius must be non-negative");
  return static_cast<std::int64_t>(std::floor(r));
}

std::size_t common_prefix(const std::string& a, const std::string& b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

int tree_common_prefix(const TreeVertex& x, const TreeVertex& y) {
  const int cap = std::min(x.depth(), y.depth());
  const std::uint64_t diff = x.value() ^ y.value();
  const int first = diff == 0 ? 64 : std::countr_zero(diff);
  return std::min(cap, first);
}

void enumerate_l1(const LatticePoint& center, std::int64_t budget,
                  std::size_t axis, LatticePoint& cur, bool natural,
                  std::size_t cap, std::vector<Point>& out) {
  if (axis == cur.coords.size()) {
    if (natural && !non_negative(cur)) return;
    if (out.size() >= cap) throw CapExceeded("lattice ball enumeration", cap);
    out.emplace_back(cur);
    return;
  }
  for (std::int64_t step = -budget; step <= budget; ++step) {
    cur.coords[axis] = center.coords[axis] + step;
    enumerate_l1(center, budget - std::abs(step), axis + 1, cur, natural, cap,
                 out);
  }
  cur.coords[axis] = center.coords[axis];
}

}  // namespace

std::string to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::lattice: return "lattice";
    case ModelTag::free_group: return "free-group";
    case ModelTag::binary_tree: return "binary-tree";
    case ModelTag::cone: return "cone";
  }
  return "?";
}

SpaceHandle SpaceHandle::lattice(int rank, bool natural) {
  if (rank < 1) throw InvalidArgument("lattice rank must be >= 1");
  SpaceHandle s;
  s.tag_ = ModelTag::lattice;
  s.rank_ = rank;
  s.natural_ = natural;
  s.standard_ = true;
  for (int i = 0; i < rank; ++i) s.generators_.push_back(unit(rank, i, 1));
  s.basepoint_ = LatticePoint{std::vector<std::int64_t>(rank, 0)};
  return s;
}

SpaceHandle SpaceHandle::lattice(int rank, bool natural,
                                 std::vector<LatticePoint> generators) {
  SpaceHandle s = lattice(rank, natural);
  if (generators.empty()) throw InvalidArgument("empty generating set");
  for (const auto& g : generators) {
    if (static_cast<int>(g.rank()) != rank) {
      throw InvalidArgument("generator " + to_string(g) + " has wrong rank");
    }
    if (std::all_of(g.coords.begin(), g.coords.end(),
                    [](std::int64_t c) { return c == 0; })) {
      throw InvalidArgument("zero generator");
    }
  }
  std::vector<LatticePoint> standard;
  for (int i = 0; i < rank; ++i) standard.push_back(unit(rank, i, 1));
  s.standard_ = generators == standard;
  s.generators_ = std::move(generators);
  return s;
}

SpaceHandle SpaceHandle::free_group() {
  SpaceHandle s;
  s.tag_ = ModelTag::free_group;
  s.basepoint_ = FreeWord{};
  return s;
}

SpaceHandle SpaceHandle::binary_tree() {
  SpaceHandle s;
  s.tag_ = ModelTag::binary_tree;
  s.basepoint_ = TreeVertex::root();
  return s;
}

SpaceHandle SpaceHandle::cone(std::shared_ptr<const ConeMetric> metric,
                              ConePoint basepoint) {
  if (!metric) throw InvalidArgument("null cone metric");
  if (!metric->grid().on_grid(basepoint)) {
    throw InvalidArgument("cone basepoint off grid");
  }
  SpaceHandle s;
  s.tag_ = ModelTag::cone;
  s.cone_ = std::move(metric);
  s.basepoint_ = basepoint;
  return s;
}

SpaceHandle SpaceHandle::with_cap(std::size_t cap) const {
  SpaceHandle s = *this;
  s.cap_ = cap;
  return s;
}

std::string SpaceHandle::describe() const {
  switch (tag_) {
    case ModelTag::lattice: {
      std::string out = std::string(natural_ ? "N^" : "Z^") + std::to_string(rank_);
      if (!standard_) {
        out += " gens{";
        for (std::size_t i = 0; i < generators_.size(); ++i) {
          if (i) out += ' ';
          out += to_string(generators_[i]);
        }
        out += '}';
      }
      return out;
    }
    case ModelTag::free_group: return "F_2";
    case ModelTag::binary_tree: return "T_2";
    case ModelTag::cone:
      return "cone(" + std::to_string(cone_->grid().base().size()) + " nodes, " +
             std::to_string(cone_->grid().heights().size()) + " heights, " +
             cone_->lambda().name() + ")";
  }
  return "?";
}

const ConeMetric& SpaceHandle::cone_metric() const {
  if (!cone_) throw ModelMismatch("space is not a cone");
  return *cone_;
}

bool SpaceHandle::contains(const Point& p) const {
  switch (tag_) {
    case ModelTag::lattice: {
      const auto* l = std::get_if<LatticePoint>(&p);
      return l && static_cast<int>(l->rank()) == rank_ &&
             (!natural_ || non_negative(*l));
    }
    case ModelTag::free_group: return std::holds_alternative<FreeWord>(p);
    case ModelTag::binary_tree: return std::holds_alternative<TreeVertex>(p);
    case ModelTag::cone: {
      const auto* c = std::get_if<ConePoint>(&p);
      return c && cone_->grid().on_grid(*c);
    }
  }
  return false;
}

void SpaceHandle::require(const Point& p) const {
  if (!contains(p)) {
    throw ModelMismatch("point " + to_string(p) + " does not belong to " +
                        describe());
  }
}

std::int64_t SpaceHandle::lattice_distance(const LatticePoint& p,
                                           const LatticePoint& q) const {
  if (standard_) {
    std::int64_t d = 0;
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
      d += std::abs(q.coords[i] - p.coords[i]);
    }
    return d;
  }
  // Word metric of a custom generating set: translation invariant, so search
  // from the origin for q - p.
  const LatticePoint target = add(q, negate(p));
  const LatticePoint origin{std::vector<std::int64_t>(rank_, 0)};
  if (target == origin) return 0;
  std::vector<LatticePoint> steps;
  for (const auto& g : generators_) {
    steps.push_back(g);
    steps.push_back(negate(g));
  }
  std::unordered_set<Point, PointHash> seen{Point{origin}};
  std::vector<LatticePoint> frontier{origin};
  for (std::int64_t level = 1; !frontier.empty(); ++level) {
    std::vector<LatticePoint> next;
    for (const auto& x : frontier) {
      for (const auto& g : steps) {
        LatticePoint y = add(x, g);
        if (y == target) return level;
        if (seen.insert(Point{y}).second) {
          if (seen.size() > cap_) {
            throw CapExceeded("word-metric search for " + to_string(target), cap_);
          }
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
  }
  throw InvalidArgument("generators do not reach " + to_string(target));
}

std::int64_t SpaceHandle::int_distance(const Point& p, const Point& q) const {
  require(p);
  require(q);
  switch (tag_) {
    case ModelTag::lattice:
      return lattice_distance(std::get<LatticePoint>(p), std::get<LatticePoint>(q));
    case ModelTag::free_group: {
      const auto& a = std::get<FreeWord>(p).letters();
      const auto& b = std::get<FreeWord>(q).letters();
      return static_cast<std::int64_t>(a.size() + b.size() -
                                       2 * common_prefix(a, b));
    }
    case ModelTag::binary_tree: {
      const auto& x = std::get<TreeVertex>(p);
      const auto& y = std::get<TreeVertex>(q);
      return x.depth() + y.depth() - 2 * tree_common_prefix(x, y);
    }
    case ModelTag::cone:
      throw ModelMismatch("cone distances are not integers");
  }
  return 0;
}

double SpaceHandle::distance(const Point& p, const Point& q) const {
  if (tag_ == ModelTag::cone) {
    require(p);
    require(q);
    return cone_->upper(std::get<ConePoint>(p), std::get<ConePoint>(q));
  }
  return static_cast<double>(int_distance(p, q));
}

std::vector<Point> SpaceHandle::closed_ball(const Point& center, double r) const {
  require(center);
  std::vector<Point> out;
  switch (tag_) {
    case ModelTag::lattice: {
      const std::int64_t radius = floor_radius(r);
      if (standard_) {
        LatticePoint cur = std::get<LatticePoint>(center);
        enumerate_l1(std::get<LatticePoint>(center), radius, 0, cur, natural_,
                     cap_, out);
        return out;
      }
      std::vector<LatticePoint> steps;
      for (const auto& g : generators_) {
        steps.push_back(g);
        steps.push_back(negate(g));
      }
      std::unordered_set<Point, PointHash> seen{center};
      std::vector<LatticePoint> frontier{std::get<LatticePoint>(center)};
      std::vector<Point> all{center};
      for (std::int64_t level = 1; level <= radius && !frontier.empty(); ++level) {
        std::vector<LatticePoint> next;
        for (const auto& x : frontier) {
          for (const auto& g : steps) {
            LatticePoint y = add(x, g);
            if (seen.insert(Point{y}).second) {
              if (seen.size() > cap_) throw CapExceeded("lattice ball enumeration", cap_);
              all.emplace_back(y);
              next.push_back(std::move(y));
            }
          }
        }
        frontier = std::move(next);
      }
      for (auto& p : all) {
        if (!natural_ || non_negative(std::get<LatticePoint>(p))) out.push_back(std::move(p));
      }
      return out;
    }
    case ModelTag::free_group: {
      const std::int64_t radius = floor_radius(r);
      // |ball(R)| = 2 * 3^R - 1
      double expected = 2.0 * std::pow(3.0, static_cast<double>(radius)) - 1.0;
      if (expected > static_cast<double>(cap_)) {
        throw CapExceeded("free-group ball of radius " + std::to_string(radius), cap_);
      }
      const FreeWord& c = std::get<FreeWord>(center);
      std::vector<FreeWord> frontier{FreeWord{}};
      out.emplace_back(c);
      for (std::int64_t level = 1; level <= radius; ++level) {
        std::vector<FreeWord> next;
        for (const auto& w : frontier) {
          for (char letter : {'a', 'A', 'b', 'B'}) {
            if (!w.empty() && w.letters().back() == inverse_letter(letter)) continue;
            FreeWord longer = FreeWord::from_reduced(w.letters() + letter);
            out.emplace_back(c * longer);
            next.push_back(std::move(longer));
          }
        }
        frontier = std::move(next);
      }
      return out;
    }
    case ModelTag::binary_tree: {
      const std::int64_t radius = floor_radius(r);
      const TreeVertex& c = std::get<TreeVertex>(center);
      // Breadth-first over parent/child edges, remembering where we came from.
      struct Item {
        TreeVertex v;
        TreeVertex from;
        bool has_from;
      };
      std::vector<Item> frontier{{c, c, false}};
      out.emplace_back(c);
      for (std::int64_t level = 1; level <= radius && !frontier.empty(); ++level) {
        std::vector<Item> next;
        for (const auto& it : frontier) {
          auto visit = [&](const TreeVertex& n) {
            if (it.has_from && n == it.from) return;
            if (out.size() >= cap_) throw CapExceeded("tree ball enumeration", cap_);
            out.emplace_back(n);
            next.push_back({n, it.v, true});
          };
          if (!it.v.is_root()) visit(it.v.parent());
          if (it.v.depth() < TreeVertex::kMaxDepth) {
            visit(it.v.child(0));
            visit(it.v.child(1));
          }
        }
        frontier = std::move(next);
      }
      return out;
    }
    case ModelTag::cone: {
      if (!(r >= 0.0)) throw InvalidArgument("ball radius must be non-negative");
      const auto dist = cone_->cached_distances_from(std::get<ConePoint>(center));
      const auto& grid = cone_->grid();
      for (std::size_t id = 0; id < dist->size(); ++id) {
        if ((*dist)[id] <= r) {
          if (out.size() >= cap_) throw CapExceeded("cone ball enumeration", cap_);
          out.emplace_back(grid.point(static_cast<int>(id)));
        }
      }
      return out;
    }
  }
  return out;
}

Point SpaceHandle::multiply(const Point& lhs, const Point& rhs) const {
  require(lhs);
  require(rhs);
  switch (tag_) {
    case ModelTag::lattice:
      return add(std::get<LatticePoint>(lhs), std::get<LatticePoint>(rhs));
    case ModelTag::free_group:
      return std::get<FreeWord>(lhs) * std::get<FreeWord>(rhs);
    default:
      throw ModelMismatch(describe() + " is not a group model");
  }
}

Point SpaceHandle::identity() const {
  switch (tag_) {
    case ModelTag::lattice:
      return LatticePoint{std::vector<std::int64_t>(rank_, 0)};
    case ModelTag::free_group:
      return FreeWord{};
    default:
      throw ModelMismatch(describe() + " is not a group model");
  }
}

std::vector<Point> SpaceHandle::word_generators() const {
  std::vector<Point> out;
  switch (tag_) {
    case ModelTag::lattice:
      for (const auto& g : generators_) {
        out.emplace_back(g);
        if (!natural_) out.emplace_back(negate(g));
      }
      return out;
    case ModelTag::free_group:
      for (const char* l : {"a", "A", "b", "B"}) out.emplace_back(FreeWord::from_reduced(l));
      return out;
    default:
      throw ModelMismatch(describe() + " is not a group model");
  }
}

std::vector<std::pair<Point, std::int64_t>> word_metric_bfs_oracle(
    const SpaceHandle& s, int radius) {
  if (radius < 0) throw InvalidArgument("oracle radius must be non-negative");
  if (s.tag() != ModelTag::lattice && s.tag() != ModelTag::free_group) {
    throw ModelMismatch("BFS oracle needs a finitely generated group model");
  }
  // N^k carries the restriction of the Z^k metric, so search the ambient
  // group and keep the points of N^k.
  std::vector<Point> steps;
  if (s.tag() == ModelTag::lattice) {
    for (const auto& g : s.generators()) {
      steps.emplace_back(g);
      steps.emplace_back(negate(g));
    }
  } else {
    steps = s.word_generators();
  }
  const Point origin = s.tag() == ModelTag::lattice
                           ? Point{LatticePoint{std::vector<std::int64_t>(s.rank(), 0)}}
                           : Point{FreeWord{}};
  auto step = [&](const Point& x, const Point& g) -> Point {
    if (s.tag() == ModelTag::lattice) {
      return add(std::get<LatticePoint>(x), std::get<LatticePoint>(g));
    }
    return std::get<FreeWord>(x) * std::get<FreeWord>(g);
  };
  std::unordered_map<Point, std::int64_t, PointHash> dist{{origin, 0}};
  std::vector<std::pair<Point, std::int64_t>> order{{origin, 0}};
  std::deque<Point> queue{origin};
  while (!queue.empty()) {
    Point x = queue.front();
    queue.pop_front();
    const std::int64_t dx = dist.at(x);
    if (dx == radius) continue;
    for (const auto& g : steps) {
      Point y = step(x, g);
      if (dist.emplace(y, dx + 1).second) {
        if (dist.size() > s.cap()) throw CapExceeded("BFS oracle", s.cap());
        order.emplace_back(y, dx + 1);
        queue.push_back(std::move(y));
      }
    }
  }
  if (s.natural()) {
    std::erase_if(order, [](const auto& e) {
      return !non_negative(std::get<LatticePoint>(e.first));
    });
  }
  return order;
}

}  // namespace coarselab
