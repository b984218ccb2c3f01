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

#include <random>
#include <vector>

#include "coarselab/error.hpp"
#include "coarselab/odometer.hpp"

namespace coarselab {
namespace {

// Digit-vector increment: the adding machine written out by hand.
std::vector<int> increment(std::vector<int> digits) {
  for (auto& d : digits) {
    if (d == 0) {
      d = 1;
      return digits;
    }
    d = 0;
  }
  digits.push_back(1);  // all ones: (1,...,1) -> (1,0,...,0)
  if (digits.size() == 1) digits[0] = 0;  // 1 . * = (0)
  return digits;
}

std::vector<int> digits_of(const TreeVertex& v) {
  std::vector<int> out;
  for (int k = 0; k < v.depth(); ++k) out.push_back(v.bit(k));
  return out;
}

std::int64_t climb_distance(TreeVertex x, TreeVertex y) {
  std::int64_t d = 0;
  while (x.depth() > y.depth()) { x = x.parent(); ++d; }
  while (y.depth() > x.depth()) { y = y.parent(); ++d; }
  while (!(x == y)) {
    x = x.parent();
    y = y.parent();
    d += 2;
  }
  return d;
}

std::int64_t climb(const TreeVertex& x, const TreeVertex& y) { return climb_distance(x, y); }

BoundaryWord random_word(std::mt19937_64& rng, std::size_t precision) {
  std::vector<std::uint8_t> bits(precision);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1U);
  return BoundaryWord(bits);
}

TEST(OdometerStep, Examples) {
  EXPECT_EQ(odometer_step(TreeVertex::root()), TreeVertex::from_msb_string("0"));
  EXPECT_EQ(odometer_step(TreeVertex::from_msb_string("0")), TreeVertex::from_msb_string("1"));
  EXPECT_EQ(odometer_step(TreeVertex::from_msb_string("1")), TreeVertex::from_msb_string("10"));
  EXPECT_EQ(odometer_step(TreeVertex::from_msb_string("011")),
            TreeVertex::from_msb_string("100"));
  // all ones of length n -> value 2^n at length n + 1
  const auto ones = TreeVertex::from_msb_string("1111");
  const auto next = odometer_step(ones);
  EXPECT_EQ(next.depth(), 5);
  EXPECT_EQ(next.value(), 16u);
  EXPECT_THROW(odometer_step(TreeVertex::from_value(~std::uint64_t{0} >> 1, 63)),
               InvalidArgument);
}

TEST(OdometerStep, MatchesDigitIncrement) {
  for (const auto& v : vertices_up_to_depth(11)) {
    const auto got = odometer_step(v);
    ASSERT_EQ(digits_of(got), increment(digits_of(v))) << to_string(v);
  }
}

TEST(TreeMetric, GromovProduct) {
  const auto x = TreeVertex::from_msb_string("011");
  const auto y = TreeVertex::from_msb_string("111");
  EXPECT_EQ(gromov_product(x, y).value, 2);
  EXPECT_FALSE(gromov_product(x, y).lower_bound_only);
  EXPECT_EQ(gromov_product(x, TreeVertex::root()).value, 0);
  EXPECT_EQ(tree_distance(x, y), climb_distance(x, y));
}

TEST(BoundaryWord, ParsingAndValue) {
  const auto z = BoundaryWord::from_string("1,1,0,1");
  EXPECT_EQ(z.precision(), 4u);
  EXPECT_EQ(z.value(), 11);
  EXPECT_EQ(z.to_string(), "1101");
  EXPECT_EQ(BoundaryWord::from_integer(11, 4), z);
  EXPECT_THROW(BoundaryWord::from_string("102"), InvalidArgument);
}

TEST(BoundaryWord, StepAndAdvance) {
  const auto z = BoundaryWord::from_string("1101");
  const auto s = odometer_step_boundary(z);
  EXPECT_EQ(s.word.to_string(), "0011");
  EXPECT_FALSE(s.overflow);
  const auto wrap = odometer_step_boundary(BoundaryWord::ones(5));
  EXPECT_EQ(wrap.word, BoundaryWord::zeros(5));
  EXPECT_TRUE(wrap.overflow);
  // n . z agrees with n single steps.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_word(rng, 12);
    BoundaryWord walked = x;
    for (int n = 1; n <= 300; ++n) {
      walked = odometer_step_boundary(walked).word;
      if (n % 37 == 0) ASSERT_EQ(odometer_advance(x, n).word, walked);
    }
  }
}

TEST(BoundaryWord, Distance) {
  const auto x = BoundaryWord::from_string("0110");
  const auto y = BoundaryWord::from_string("0100");
  const auto d = boundary_distance(x, y);
  EXPECT_EQ(d.exponent, 2);
  EXPECT_FALSE(d.upper_bound_only);
  EXPECT_EQ(d.to_double(), 0.25);
  const auto same = boundary_distance(x, x);
  EXPECT_EQ(same.exponent, 4);
  EXPECT_TRUE(same.upper_bound_only);
  EXPECT_TRUE(gromov_product(x, x).lower_bound_only);
  EXPECT_THROW(boundary_distance(x, BoundaryWord::zeros(5)), PrecisionError);
}

TEST(Minimality, PrecisionForEpsilon) {
  EXPECT_EQ(precision_for_epsilon(1.0), 0);
  EXPECT_EQ(precision_for_epsilon(0.5), 1);
  EXPECT_EQ(precision_for_epsilon(0.125), 3);
  EXPECT_EQ(precision_for_epsilon(0.1), 4);
  EXPECT_THROW(precision_for_epsilon(0.0), InvalidArgument);
}

TEST(Minimality, WitnessFormulaAndIteration) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto x = random_word(rng, 16);
    const auto y = random_word(rng, 16);
    for (int N = 1; N <= 8; ++N) {
      const auto w = minimality_witness(x, y, N);
      BigInt xi = 0, yj = 0;
      for (int k = 0; k <= N; ++k) {
        if (x.bit(k)) xi += BigInt(1) << k;
        if (y.bit(k)) yj += BigInt(1) << k;
      }
      EXPECT_EQ(w.a, (BigInt(1) << (N + 1)) - xi);
      EXPECT_EQ(w.b, yj);
      // Walk n single steps and compare the first N + 1 digits.
      BoundaryWord walked = x;
      for (BigInt n = 0; n < w.n; ++n) walked = odometer_step_boundary(walked).word;
      for (int k = 0; k <= N; ++k) ASSERT_EQ(walked.bit(k), y.bit(k));
    }
  }
  EXPECT_THROW(minimality_witness(BoundaryWord::zeros(4), BoundaryWord::zeros(4), 4),
               PrecisionError);
}

TEST(Density, AllOnesStart) {
  const auto x = BoundaryWord::ones(8);
  const auto rows = density_experiment(x, {BoundaryWord::zeros(8)}, {0.125});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].target_precision, 3);
  // a = 2^4 - 15 = 1, b = 0: one step carries 1111 1111 to 0000 0000.
  EXPECT_EQ(rows[0].witness, 1);
  EXPECT_TRUE(rows[0].verified);
}

TEST(Density, RandomTargets) {
  std::mt19937_64 rng(99);
  const auto x = random_word(rng, 16);
  std::vector<BoundaryWord> targets;
  for (int i = 0; i < 10; ++i) targets.push_back(random_word(rng, 16));
  const auto rows = density_experiment(x, targets, {std::ldexp(1.0, -8)});
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.verified);
    EXPECT_LT(r.achieved.to_double(), std::ldexp(1.0, -8));
  }
}

TEST(Sweeps, LipschitzAgainstBruteForce) {
  const auto verts = vertices_up_to_depth(6);
  std::int64_t worst = -100;
  std::uint64_t pairs = 0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t j = i; j < verts.size(); ++j) {
      const auto before = climb_distance(verts[i], verts[j]);
      const auto after = climb_distance(odometer_step(verts[i]), odometer_step(verts[j]));
      worst = std::max(worst, after - before);
      ++pairs;
    }
  }
  const auto s = odometer_lipschitz_sweep(6, 2, Execution::serial);
  const auto p = odometer_lipschitz_sweep(6, 2, Execution::parallel);
  EXPECT_EQ(s.pairs, pairs);
  EXPECT_EQ(s.violations, 0u);
  EXPECT_EQ(s.max_excess, worst);
  EXPECT_LE(worst, 2);
  EXPECT_EQ(p.pairs, s.pairs);
  EXPECT_EQ(p.max_excess, s.max_excess);
  EXPECT_EQ(p.worst, s.worst);
  // A slack of zero is violated somewhere.
  EXPECT_GT(odometer_lipschitz_sweep(6, 0).violations, 0u);
}

TEST(Sweeps, GromovConsistency) {
  const auto s = gromov_consistency_sweep(7, &climb, Execution::serial);
  const auto p = gromov_consistency_sweep(7, &climb, Execution::parallel);
  EXPECT_EQ(s.mismatches, 0u);
  EXPECT_EQ(p.mismatches, 0u);
  EXPECT_EQ(s.pairs, p.pairs);
  EXPECT_EQ(s.pairs, 255u * 256u / 2u);
}

TEST(Sweeps, VertexCount) {
  EXPECT_EQ(vertices_up_to_depth(9).size(), 1023u);
  EXPECT_EQ(vertices_up_to_depth(10).size(), 2047u);
}

}  // namespace
}  // namespace coarselab
