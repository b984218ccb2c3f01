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

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "coarselab/actions.hpp"
#include "coarselab/coarse.hpp"
#include "coarselab/error.hpp"
#include "coarselab/odometer.hpp"

namespace coarselab {
namespace {

std::string stack_reduce(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    const char inv = std::islower(c) ? static_cast<char>(std::toupper(c))
                                     : static_cast<char>(std::tolower(c));
    if (!out.empty() && out.back() == inv) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string invert(const std::string& w) {
  std::string out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    out.push_back(std::islower(*it) ? static_cast<char>(std::toupper(*it))
                                    : static_cast<char>(std::tolower(*it)));
  }
  return out;
}

std::int64_t word_distance(const std::string& p, const std::string& q) {
  return static_cast<std::int64_t>(stack_reduce(invert(p) + q).size());
}

PointMap right_mult(const std::string& h) {
  return [h](const Point& x) -> Point {
    return FreeWord::reduce(std::get<FreeWord>(x).letters() + h);
  };
}

TEST(Bornologous, LeftTranslationIsIsometry) {
  const auto f2 = SpaceHandle::free_group();
  const auto a = FreeWord::from_reduced("a");
  const PointMap left = [a](const Point& x) -> Point { return a * std::get<FreeWord>(x); };
  const auto r = bornologous_profile(left, f2, f2, {1, 2, 4, 8}, 5);
  ASSERT_EQ(r.table.size(), 4u);
  // Radius-5 sample: pairs reach distance 10 > 8, so every row is saturated.
  for (const auto& e : r.table) EXPECT_EQ(e.value, e.scale);
  EXPECT_EQ(r.verdict, Verdict::certified_at_scale);
  ASSERT_TRUE(r.affine);
  EXPECT_EQ(r.affine->slope, 1.0);
  EXPECT_EQ(r.affine->offset, 0.0);
}

TEST(Bornologous, RightTranslationMatchesBruteForce) {
  const auto f2 = SpaceHandle::free_group();
  const auto ball = f2.closed_ball(FreeWord(), 4);
  for (const std::string h : {"a", "ab", "bAb"}) {
    const auto r = bornologous_profile(right_mult(h), f2, f2, {1, 2, 3, 4, 5, 6}, 4);
    for (const auto& e : r.table) {
      std::int64_t best = 0;
      for (const auto& x : ball) {
        for (const auto& y : ball) {
          const auto& xs = std::get<FreeWord>(x).letters();
          const auto& ys = std::get<FreeWord>(y).letters();
          if (word_distance(xs, ys) > e.scale) continue;
          best = std::max(best, word_distance(stack_reduce(xs + h), stack_reduce(ys + h)));
        }
      }
      EXPECT_EQ(e.value, static_cast<double>(best)) << h << " R=" << e.scale;
      EXPECT_LE(e.value, e.scale + 2.0 * static_cast<double>(h.size()));
      ASSERT_TRUE(e.witness);
      EXPECT_EQ(f2.distance(right_mult(h)(e.witness->src), right_mult(h)(e.witness->dst)),
                e.value);
    }
  }
}

TEST(Bornologous, OdometerWithinTwo) {
  const auto tree = SpaceHandle::binary_tree();
  const PointMap step = [](const Point& x) -> Point {
    return odometer_step(std::get<TreeVertex>(x));
  };
  const auto r = bornologous_profile(step, tree, tree, kDefaultRadii, 9);
  for (const auto& e : r.table) EXPECT_LE(e.value, e.scale + 2.0);
  EXPECT_EQ(check_affine_bound(r, {1.0, 2.0}).verdict, Verdict::certified_at_scale);
}

TEST(Bornologous, SerialAndParallelAgree) {
  const auto z2 = SpaceHandle::lattice(2, false);
  const PointMap squash = [](const Point& x) -> Point {
    auto p = std::get<LatticePoint>(x);
    p.coords[0] = p.coords[0] * p.coords[0];
    return p;
  };
  const auto s = bornologous_profile(squash, z2, z2, kDefaultRadii, 10, Execution::serial);
  const auto p = bornologous_profile(squash, z2, z2, kDefaultRadii, 10, Execution::parallel);
  ASSERT_EQ(s.table.size(), p.table.size());
  for (std::size_t i = 0; i < s.table.size(); ++i) {
    EXPECT_EQ(s.table[i].value, p.table[i].value);
    EXPECT_EQ(s.table[i].witness->src, p.table[i].witness->src);
    EXPECT_EQ(s.table[i].witness->dst, p.table[i].witness->dst);
  }
}

TEST(AffineFit, SlopeOneWithOffset) {
  std::vector<ScaleEntry> t;
  for (double r : {1.0, 2.0, 4.0, 8.0}) t.push_back({r, r + 3.0, std::nullopt});
  const auto b = fit_affine_bound(t);
  EXPECT_EQ(b.slope, 1.0);
  EXPECT_EQ(b.offset, 3.0);
}

TEST(AffineFit, GrowingExcessRaisesSlope) {
  std::vector<ScaleEntry> t;
  for (double r : {1.0, 2.0, 4.0, 8.0}) t.push_back({r, 3.0 * r, std::nullopt});
  const auto b = fit_affine_bound(t);
  EXPECT_GT(b.slope, 1.0);
  for (const auto& e : t) EXPECT_LE(e.value, b.slope * e.scale + b.offset + 1e-9);
}

TEST(AffineCheck, RefutesWithWitness) {
  CoarseReport r;
  r.verdict = Verdict::certified_at_scale;
  r.table.push_back({1.0, 1.0, WitnessPair{FreeWord(), FreeWord::reduce("a")}});
  r.table.push_back({2.0, 5.0, WitnessPair{FreeWord(), FreeWord::reduce("abab")}});
  const auto checked = check_affine_bound(r, {1.0, 2.0});
  EXPECT_EQ(checked.verdict, Verdict::refuted);
  ASSERT_TRUE(checked.counterexample);
  EXPECT_EQ(checked.counterexample->dst, Point(FreeWord::reduce("abab")));
  EXPECT_EQ(check_affine_bound(r, {1.0, 3.0}).verdict, Verdict::certified_at_scale);
}

TEST(Properness, ConstantMapRefuted) {
  const auto z2 = SpaceHandle::lattice(2, false);
  const PointMap constant = [](const Point&) -> Point { return LatticePoint{{0, 0}}; };
  const auto r = properness_table(constant, z2, z2, {1, 2}, {5, 10});
  EXPECT_EQ(r.verdict, Verdict::refuted);
  ASSERT_TRUE(r.counterexample);
  // The whole radius-10 ball maps onto the origin.
  EXPECT_EQ(r.table.front().value, 2.0 * 100 + 2.0 * 10 + 1);
}

TEST(Properness, ProperMapsCertified) {
  const auto f2 = SpaceHandle::free_group();
  const PointMap id = [](const Point& x) { return x; };
  EXPECT_EQ(properness_table(id, f2, f2, {1, 2, 4, 8}, {4, 8}).verdict,
            Verdict::certified_at_scale);
  EXPECT_EQ(properness_table(right_mult("ab"), f2, f2, {1, 2, 3, 4, 5, 6}, {3, 6}).verdict,
            Verdict::certified_at_scale);
  const auto counts = properness_table(id, f2, f2, {0, 1, 2}, {4, 8});
  EXPECT_EQ(counts.table[0].value, 1.0);
  EXPECT_EQ(counts.table[1].value, 5.0);
  EXPECT_EQ(counts.table[2].value, 17.0);
  EXPECT_THROW(properness_table(id, f2, f2, {1}, {4}), InvalidArgument);
}

TEST(Closeness, TranslationOnZ2) {
  const auto z2 = SpaceHandle::lattice(2, false);
  const PointMap id = [](const Point& x) { return x; };
  const PointMap shift = [](const Point& x) -> Point {
    auto p = std::get<LatticePoint>(x);
    p.coords[0] += 2;
    p.coords[1] -= 1;
    return p;
  };
  const auto r = closeness_bound(shift, id, z2, {5, 10});
  for (const auto& e : r.table) EXPECT_EQ(e.value, 3.0);
  EXPECT_EQ(r.verdict, Verdict::certified_at_scale);
}

TEST(Closeness, LeftTranslationOnFreeGroupGrows) {
  const auto f2 = SpaceHandle::free_group();
  const PointMap id = [](const Point& x) { return x; };
  const PointMap left = [](const Point& x) -> Point {
    return FreeWord::reduce("a" + std::get<FreeWord>(x).letters());
  };
  const auto r = closeness_bound(left, id, f2, {2, 4, 6});
  // Independent sup of |x^-1 a x| over the ball.
  for (const auto& e : r.table) {
    std::int64_t best = 0;
    for (const auto& x : f2.closed_ball(FreeWord(), e.scale)) {
      const auto& xs = std::get<FreeWord>(x).letters();
      best = std::max(best, word_distance(stack_reduce("a" + xs), xs));
    }
    EXPECT_EQ(e.value, static_cast<double>(best));
  }
  EXPECT_EQ(r.table.back().value, 13.0);
  EXPECT_EQ(r.verdict, Verdict::inconclusive);
}

TEST(Higson, OneEndInsideCounts) {
  const auto z = SpaceHandle::lattice(1, false);
  const ScalarFunction step = [](const Point& p) {
    return std::abs(std::get<LatticePoint>(p).coords[0]) > 5 ? 1.0 : 0.0;
  };
  const auto t = higson_defect(step, "step", z, 1, {5, 8}, 10);
  // (5, 6) has one end inside ball(5): it counts.
  EXPECT_EQ(t.entries[0].defect, 1.0);
  EXPECT_EQ(t.entries[1].defect, 0.0);
  EXPECT_THROW(higson_defect(step, "step", z, 1, {5, 20}, 10), InvalidArgument);
}

TEST(Higson, SlowAndFastOscillation) {
  const auto z = SpaceHandle::lattice(1, false);
  const ScalarFunction slow = [](const Point& p) {
    return std::sin(std::log1p(std::abs(static_cast<double>(std::get<LatticePoint>(p).coords[0]))));
  };
  const ScalarFunction fast = [](const Point& p) {
    return std::sin(static_cast<double>(std::get<LatticePoint>(p).coords[0]));
  };
  const auto s = higson_defect(slow, "sin-log", z, 10, {10, 100, 1000}, 3000);
  for (std::size_t i = 1; i < s.entries.size(); ++i) {
    EXPECT_LT(s.entries[i].defect, s.entries[i - 1].defect);
  }
  EXPECT_LT(s.entries.back().defect, 0.011);
  const auto f = higson_defect(fast, "sin", z, 10, {10, 100, 1000}, 3000);
  for (const auto& e : f.entries) EXPECT_GT(e.defect, 1.9);
}

TEST(Higson, SerialAndParallelAgree) {
  const auto z2 = SpaceHandle::lattice(2, false);
  const ScalarFunction f = [](const Point& p) {
    const auto& c = std::get<LatticePoint>(p).coords;
    return std::sin(0.3 * static_cast<double>(c[0])) * std::cos(static_cast<double>(c[1]));
  };
  const auto s = higson_defect(f, "f", z2, 2, {2, 5, 10}, 15, Execution::serial);
  const auto p = higson_defect(f, "f", z2, 2, {2, 5, 10}, 15, Execution::parallel);
  ASSERT_EQ(s.entries.size(), p.entries.size());
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    EXPECT_EQ(s.entries[i].defect, p.entries[i].defect);
    EXPECT_EQ(s.entries[i].witness->src, p.entries[i].witness->src);
  }
}

}  // namespace
}  // namespace coarselab
