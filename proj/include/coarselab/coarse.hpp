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

#include <optional>
#include <string>
#include <vector>

#include "coarselab/execution.hpp"
#include "coarselab/point.hpp"
#include "coarselab/spaces.hpp"

namespace coarselab {

enum class Property { bornologous, proper, close, lipschitz };
enum class Verdict { certified_at_scale, refuted, inconclusive };

std::string to_string(Property p);
std::string to_string(Verdict v);

struct WitnessPair {
  Point src;
  Point dst;
};

// One row of a scale table. For bornologous/lipschitz rows `scale` is the
// input radius R and `value` the observed output scale S(R); for properness
// rows `scale` is the target radius r and `value` the preimage count; for
// closeness rows `scale` is the sample radius and `value` the sup.
struct ScaleEntry {
  double scale = 0.0;
  double value = 0.0;
  std::optional<WitnessPair> witness;
};

struct AffineBound {
  double slope = 1.0;
  double offset = 0.0;
};

// Finite-scale certificate or refutation. Every verdict is qualified by the
// sample it was computed on; nothing here is a global statement.
struct CoarseReport {
  Property property = Property::bornologous;
  std::vector<ScaleEntry> table;
  Verdict verdict = Verdict::inconclusive;
  std::optional<AffineBound> affine;
  std::optional<WitnessPair> counterexample;  // set iff refuted
  std::string note;
};

// Entourage E_R = {(x, y) : d(x, y) <= R}.
struct ControlledSetSpec {
  double radius = 0.0;
};

inline const std::vector<double> kDefaultRadii = {1, 2, 4, 8, 16};
inline constexpr int kDefaultGroupSampleRadius = 8;
inline constexpr int kDefaultTreeSampleDepth = 9;

// S(R) = max d_t(f x, f y) over pairs of the sample ball (around the source
// basepoint) with d_s(x, y) <= R, for each R in ascending order, plus the
// fitted affine bound S(R) <= c R + b.
CoarseReport bornologous_profile(const PointMap& f, const SpaceHandle& source,
                                 const SpaceHandle& target,
                                 std::vector<double> radii,
                                 double sample_radius,
                                 Execution exec = Execution::parallel);

// Same scan over an explicit sample instead of a ball.
CoarseReport bornologous_profile(const PointMap& f, const SpaceHandle& source,
                                 const SpaceHandle& target,
                                 std::vector<double> radii,
                                 const std::vector<Point>& sample,
                                 Execution exec = Execution::parallel);

// Minimal offset for slope 1; falls back to a least-squares slope when the
// slope-1 excess S(R) - R keeps growing over the last three radii.
AffineBound fit_affine_bound(const std::vector<ScaleEntry>& table);

// Checks S(R) <= slope * R + offset on every row; on failure returns a copy
// marked refuted with the offending row's witness.
CoarseReport check_affine_bound(const CoarseReport& report, AffineBound bound);

// Preimage counts of ball(target basepoint, r) within ball(source basepoint,
// D) for each D of the domain ladder (at least two distinct radii). Refuted
// at r when r is below the smallest rung, the preimage grows along the whole
// ladder and reaches the outer shell of the largest domain: the preimage of
// a small ball keeps escaping to the horizon. Table rows report counts for
// the largest domain.
CoarseReport properness_table(const PointMap& f, const SpaceHandle& source,
                              const SpaceHandle& target,
                              std::vector<double> radii,
                              std::vector<double> domain_ladder);

// sup d(f x, g x) over ball(basepoint, r) for each sample radius r
// (ascending). Close-at-scale when the last two sups agree.
CoarseReport closeness_bound(const PointMap& f, const PointMap& g,
                             const SpaceHandle& space,
                             std::vector<double> sample_radii);

struct HigsonDefectEntry {
  double ball_radius = 0.0;
  double defect = 0.0;
  std::optional<WitnessPair> witness;
};

struct HigsonDefectTable {
  std::string function_id;
  double entourage_radius = 0.0;
  double window_radius = 0.0;
  std::vector<HigsonDefectEntry> entries;
};

// For each B: sup |f(y) - f(x)| over pairs of the window with d(x, y) <= R
// and not both x, y in ball(basepoint, B). Pairs with exactly one end in the
// ball count. Throws InvalidArgument when the window is smaller than the
// largest B.
HigsonDefectTable higson_defect(const ScalarFunction& f,
                                const std::string& function_id,
                                const SpaceHandle& space, double entourage,
                                std::vector<double> balls,
                                double window_radius,
                                Execution exec = Execution::parallel);

}  // namespace coarselab
