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

#include "coarselab/coarse.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <unordered_map>

#include "coarselab/error.hpp"

namespace coarselab {

namespace {

// Best-so-far pair for a bucket: larger value wins, ties go to the
// lexicographically smaller (i, j) so serial and parallel scans agree.
struct PairMax {
  double value = -std::numeric_limits<double>::infinity();
  std::ptrdiff_t i = -1;
  std::ptrdiff_t j = -1;

  void offer(double v, std::ptrdiff_t a, std::ptrdiff_t b) {
    if (v > value || (v == value && std::pair(a, b) < std::pair(i, j))) {
      value = v;
      i = a;
      j = b;
    }
  }
  void offer(const PairMax& other) {
    if (other.i >= 0) offer(other.value, other.i, other.j);
  }
};

std::vector<double> sorted_scales(std::vector<double> v, const char* what) {
  if (v.empty()) throw InvalidArgument(std::string(what) + " list is empty");
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw InvalidArgument(std::string(what) + " must be finite and >= 0");
    }
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

template <typename RowFn>
std::vector<PairMax> scan_rows(std::ptrdiff_t n, std::size_t buckets,
                               Execution exec, RowFn&& row) {
  std::vector<PairMax> merged(buckets);
  if (exec == Execution::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) row(i, merged);
    return merged;
  }
#pragma omp parallel
  {
    std::vector<PairMax> local(buckets);
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) row(i, local);
#pragma omp critical(coarselab_coarse_merge)
    for (std::size_t b = 0; b < buckets; ++b) merged[b].offer(local[b]);
  }
  return merged;
}

std::vector<Point> apply_all(const PointMap& f, const std::vector<Point>& xs,
                             const SpaceHandle& target) {
  std::vector<Point> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    Point y = f(x);
    if (!target.contains(y)) {
      throw ModelMismatch("map sends " + to_string(x) + " to " + to_string(y) +
                          ", outside " + target.describe());
    }
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace

std::string to_string(Property p) {
  switch (p) {
    case Property::bornologous: return "bornologous";
    case Property::proper: return "proper";
    case Property::close: return "close";
    case Property::lipschitz: return "lipschitz";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_at_scale: return "certified-at-scale";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

CoarseReport bornologous_profile(const PointMap& f, const SpaceHandle& source,
                                 const SpaceHandle& target,
                                 std::vector<double> radii,
                                 double sample_radius, Execution exec) {
  if (!(sample_radius >= 0.0)) {
    throw InvalidArgument("sample ball radius must be >= 0");
  }
  return bornologous_profile(f, source, target, std::move(radii),
                             source.closed_ball(source.basepoint(), sample_radius),
                             exec);
}

CoarseReport bornologous_profile(const PointMap& f, const SpaceHandle& source,
                                 const SpaceHandle& target,
                                 std::vector<double> radii,
                                 const std::vector<Point>& sample,
                                 Execution exec) {
  radii = sorted_scales(std::move(radii), "entourage radius");
  if (sample.empty()) throw InvalidArgument("empty sample");
  const std::vector<Point> images = apply_all(f, sample, target);
  const auto n = static_cast<std::ptrdiff_t>(sample.size());
  const double r_max = radii.back();

  auto buckets = scan_rows(n, radii.size(), exec,
                           [&](std::ptrdiff_t i, std::vector<PairMax>& acc) {
    for (std::ptrdiff_t j = i; j < n; ++j) {
      const double d = source.distance(sample[i], sample[j]);
      if (d > r_max) continue;
      const auto k = static_cast<std::size_t>(
          std::lower_bound(radii.begin(), radii.end(), d) - radii.begin());
      acc[k].offer(target.distance(images[i], images[j]), i, j);
    }
  });
  for (std::size_t k = 1; k < buckets.size(); ++k) buckets[k].offer(buckets[k - 1]);

  CoarseReport report;
  report.property = Property::bornologous;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    ScaleEntry e;
    e.scale = radii[k];
    if (buckets[k].i >= 0) {
      e.value = buckets[k].value;
      e.witness = WitnessPair{sample[buckets[k].i], sample[buckets[k].j]};
    }
    report.table.push_back(std::move(e));
  }
  report.affine = fit_affine_bound(report.table);
  report.verdict = Verdict::certified_at_scale;
  report.note = "sample of " + std::to_string(sample.size()) + " points";
  return report;
}

AffineBound fit_affine_bound(const std::vector<ScaleEntry>& table) {
  if (table.empty()) return {};
  const std::size_t n = table.size();
  bool growing = n >= 3;
  for (std::size_t k = n >= 3 ? n - 2 : n; k < n; ++k) {
    const double prev = table[k - 1].value - table[k - 1].scale;
    const double cur = table[k].value - table[k].scale;
    growing = growing && cur > prev;
  }
  AffineBound bound;
  if (!growing) {
    bound.slope = 1.0;
    bound.offset = -std::numeric_limits<double>::infinity();
    for (const auto& e : table) bound.offset = std::max(bound.offset, e.value - e.scale);
    return bound;
  }
  double mean_r = 0.0;
  double mean_s = 0.0;
  for (const auto& e : table) {
    mean_r += e.scale;
    mean_s += e.value;
  }
  mean_r /= static_cast<double>(n);
  mean_s /= static_cast<double>(n);
  double num = 0.0;
  double den = 0.0;
  for (const auto& e : table) {
    num += (e.scale - mean_r) * (e.value - mean_s);
    den += (e.scale - mean_r) * (e.scale - mean_r);
  }
  bound.slope = den > 0.0 ? std::max(0.0, num / den) : 1.0;
  bound.offset = -std::numeric_limits<double>::infinity();
  for (const auto& e : table) {
    bound.offset = std::max(bound.offset, e.value - bound.slope * e.scale);
  }
  return bound;
}

CoarseReport check_affine_bound(const CoarseReport& report, AffineBound bound) {
  CoarseReport out = report;
  for (const auto& e : report.table) {
    if (e.value > bound.slope * e.scale + bound.offset) {
      out.verdict = Verdict::refuted;
      out.counterexample = e.witness;
      out.note = "S(" + std::to_string(e.scale) + ") = " + std::to_string(e.value) +
                 " exceeds the bound";
      return out;
    }
  }
  out.note = report.note.empty() ? "bound holds at scale"
                                 : report.note + "; bound holds at scale";
  return out;
}

CoarseReport properness_table(const PointMap& f, const SpaceHandle& source,
                              const SpaceHandle& target, std::vector<double> radii,
                              std::vector<double> domain_ladder) {
  radii = sorted_scales(std::move(radii), "target radius");
  domain_ladder = sorted_scales(std::move(domain_ladder), "domain radius");
  if (domain_ladder.size() < 2) {
    throw InvalidArgument("properness needs a domain ladder of two or more radii");
  }
  const std::vector<Point> domain =
      source.closed_ball(source.basepoint(), domain_ladder.back());
  const std::vector<Point> images = apply_all(f, domain, target);
  const std::size_t rungs = domain_ladder.size();
  std::vector<double> from_base(domain.size());
  std::vector<double> image_radius(domain.size());
  double shell = 0.0;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    from_base[i] = source.distance(source.basepoint(), domain[i]);
    image_radius[i] = target.distance(target.basepoint(), images[i]);
    shell = std::max(shell, from_base[i]);
  }

  CoarseReport report;
  report.property = Property::proper;
  report.verdict = Verdict::certified_at_scale;
  for (double r : radii) {
    std::vector<std::size_t> counts(rungs, 0);
    std::ptrdiff_t far = -1;
    for (std::size_t i = 0; i < domain.size(); ++i) {
      if (image_radius[i] > r) continue;
      for (std::size_t k = 0; k < rungs; ++k) {
        if (from_base[i] <= domain_ladder[k]) ++counts[k];
      }
      if (far < 0 || from_base[i] > from_base[far]) far = static_cast<std::ptrdiff_t>(i);
    }
    ScaleEntry e;
    e.scale = r;
    e.value = static_cast<double>(counts.back());
    if (far >= 0) e.witness = WitnessPair{domain[far], images[far]};
    report.table.push_back(std::move(e));

    // Only radii below the smallest rung can be blamed: for larger r even a
    // map close to the identity has preimages that reach the shell.
    bool escaping = far >= 0 && from_base[far] == shell && r < domain_ladder.front();
    for (std::size_t k = 1; k < rungs; ++k) escaping = escaping && counts[k] > counts[k - 1];
    if (escaping && report.verdict != Verdict::refuted) {
      report.verdict = Verdict::refuted;
      report.counterexample = WitnessPair{domain[far], images[far]};
      report.note = "preimage of ball(" + std::to_string(r) +
                    ") reaches the domain horizon " + std::to_string(shell);
    }
  }
  return report;
}

CoarseReport closeness_bound(const PointMap& f, const PointMap& g,
                             const SpaceHandle& space,
                             std::vector<double> sample_radii) {
  sample_radii = sorted_scales(std::move(sample_radii), "sample radius");
  const std::vector<Point> ball =
      space.closed_ball(space.basepoint(), sample_radii.back());
  const std::vector<Point> fx = apply_all(f, ball, space);
  const std::vector<Point> gx = apply_all(g, ball, space);

  CoarseReport report;
  report.property = Property::close;
  for (double r : sample_radii) {
    ScaleEntry e;
    e.scale = r;
    e.value = 0.0;
    std::ptrdiff_t arg = -1;
    for (std::size_t i = 0; i < ball.size(); ++i) {
      if (space.distance(space.basepoint(), ball[i]) > r) continue;
      const double d = space.distance(fx[i], gx[i]);
      if (arg < 0 || d > e.value) {
        e.value = d;
        arg = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (arg >= 0) e.witness = WitnessPair{fx[arg], gx[arg]};
    report.table.push_back(std::move(e));
  }
  const auto& t = report.table;
  const bool stable = t.size() >= 2 && t[t.size() - 1].value == t[t.size() - 2].value;
  report.verdict = stable ? Verdict::certified_at_scale : Verdict::inconclusive;
  report.note = stable ? "sup stable across the last two sample radii"
                       : "sup still moving with the sample radius";
  return report;
}

HigsonDefectTable higson_defect(const ScalarFunction& f,
                                const std::string& function_id,
                                const SpaceHandle& space, double entourage,
                                std::vector<double> balls, double window_radius,
                                Execution exec) {
  if (!(entourage >= 0.0)) throw InvalidArgument("entourage radius must be >= 0");
  balls = sorted_scales(std::move(balls), "ball radius");
  if (window_radius < balls.back()) {
    throw InvalidArgument("window radius " + std::to_string(window_radius) +
                          " is smaller than the largest ball " +
                          std::to_string(balls.back()));
  }
  const std::vector<Point> window = space.closed_ball(space.basepoint(), window_radius);
  std::unordered_map<Point, std::size_t, PointHash> index;
  index.reserve(window.size());
  std::vector<double> values(window.size());
  std::vector<double> from_base(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    index.emplace(window[i], i);
    values[i] = f(window[i]);
    from_base[i] = space.distance(space.basepoint(), window[i]);
  }

  const auto n = static_cast<std::ptrdiff_t>(window.size());
  auto buckets = scan_rows(n, balls.size(), exec,
                           [&](std::ptrdiff_t i, std::vector<PairMax>& acc) {
    for (const Point& y : space.closed_ball(window[i], entourage)) {
      auto it = index.find(y);
      if (it == index.end()) continue;
      const auto j = static_cast<std::ptrdiff_t>(it->second);
      const double outer = std::max(from_base[i], from_base[j]);
      // The pair lies outside B x B exactly for the balls with B < outer.
      const auto above = std::lower_bound(balls.begin(), balls.end(), outer) - balls.begin();
      if (above == 0) continue;
      acc[static_cast<std::size_t>(above - 1)].offer(std::abs(values[j] - values[i]), i, j);
    }
  });
  for (std::size_t k = balls.size() - 1; k-- > 0;) buckets[k].offer(buckets[k + 1]);

  HigsonDefectTable table;
  table.function_id = function_id;
  table.entourage_radius = entourage;
  table.window_radius = window_radius;
  for (std::size_t k = 0; k < balls.size(); ++k) {
    HigsonDefectEntry e;
    e.ball_radius = balls[k];
    if (buckets[k].i >= 0) {
      e.defect = buckets[k].value;
      e.witness = WitnessPair{window[buckets[k].i], window[buckets[k].j]};
    }
    table.entries.push_back(std::move(e));
  }
  return table;
}

}  // namespace coarselab
