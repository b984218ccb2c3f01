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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coarselab/coarse.hpp"
#include "coarselab/execution.hpp"
#include "coarselab/point.hpp"
#include "coarselab/spaces.hpp"

namespace coarselab {

enum class SemigroupTag { natural, int_lattice, nat_lattice, free_group };

std::string to_string(SemigroupTag tag);

struct Generator {
  std::string name;
  PointMap map;
};

// A finitely generated semigroup acting through generator maps Psi_g.
//   natural:      one generator, iterated.
//   int_lattice:  2k maps ordered +e_1, -e_1, ..., +e_k, -e_k.
//   nat_lattice:  k maps +e_1, ..., +e_k.
//   free_group:   four maps a, A, b, B.
struct ActionSpec {
  SemigroupTag semigroup = SemigroupTag::natural;
  int rank = 1;
  std::vector<Generator> generators;
  bool isometry = false;
  std::string name;

  // Psi_g for a group element in the acting semigroup's own coordinates
  // (LatticePoint for the lattices, FreeWord for F_2).
  Point act(const Point& element, const Point& x) const;
  // The acting semigroup as a space (N, Z^k, N^k or F_2).
  SpaceHandle semigroup_space() const;
};

struct ActionSampleCheck {
  bool isometry_ok = true;
  bool commutation_ok = true;
  std::optional<WitnessPair> isometry_witness;
  std::string detail;
};

// Samples pairs from the ball of the given radius and checks the isometry
// flag and (for abelian tags) commutation of the generator maps.
ActionSampleCheck check_action(const ActionSpec& action,
                               const SpaceHandle& space, double sample_radius,
                               int samples, std::uint64_t seed);

// Canned actions used by the CLI and the tests.
namespace actions {
ActionSpec left_translation(const SpaceHandle& group);
ActionSpec right_translation(const SpaceHandle& group, const Point& h);
// N acting on Z^k by a fixed translation vector.
ActionSpec shift(const LatticePoint& step);
ActionSpec odometer();
ActionSpec identity();
ActionSpec constant(const Point& value);
// x -> (x + 1) mod period on {0, ..., period - 1} inside Z, identity
// elsewhere.
ActionSpec cyclic(int period);
// Rotation of the base cycle by `step` nodes at every height (an isometry of
// a cone over a cycle graph).
ActionSpec rotation(int node_count, int step);
}  // namespace actions

struct OrbitPoint {
  Point point;
  std::int64_t time = 0;  // word length of the first element reaching it
  double displacement = 0.0;
};

struct EscapeEntry {
  std::int64_t radius = 0;
  std::int64_t last_time_within = -1;
};

struct OrbitRecord {
  Point base;
  std::int64_t horizon = 0;
  std::vector<OrbitPoint> points;  // in order of first appearance
  double max_displacement = 0.0;
  std::vector<EscapeEntry> escape_profile;  // radius 0 .. ceil(max disp)
};

// All g x0 with |g| <= horizon, deduplicated.
OrbitRecord orbit(const ActionSpec& action, const SpaceHandle& space,
                  const Point& x0, std::int64_t horizon);

// Orbit of an N-action as the time-indexed sequence x0, 1 x0, ..., horizon
// x0 (not deduplicated).
std::vector<Point> orbit_sequence(const ActionSpec& action, const Point& x0,
                                  std::int64_t horizon);

// The orbit map g -> g x0 as a PointMap on the acting semigroup's points.
// For N-actions the first `precompute` iterates are tabulated.
PointMap orbit_map(const ActionSpec& action, const Point& x0,
                   std::int64_t precompute = 0);

struct GeneratorReport {
  std::string generator;
  CoarseReport bornologous;
  CoarseReport properness;
};

struct CoarseActionReport {
  std::vector<GeneratorReport> generators;
  Verdict verdict = Verdict::inconclusive;
};

CoarseActionReport verify_coarse_action(
    const ActionSpec& action, const SpaceHandle& space,
    std::vector<double> radii, double sample_radius,
    Execution exec = Execution::parallel);

enum class FixedPointVerdict {
  bounded_orbit,             // certified coarse fixed point
  inconclusive_at_horizon,   // no repetition / too few returns
  not_recurrent_at_horizon,
};

std::string to_string(FixedPointVerdict v);

struct CycleData {
  std::int64_t first = 0;   // n
  std::int64_t repeat = 0;  // m > n with m x0 = n x0
  std::vector<Point> orbit; // x0, ..., (m - 1) x0
};

struct FiniteFixedPointResult {
  FixedPointVerdict verdict = FixedPointVerdict::inconclusive_at_horizon;
  std::optional<CycleData> cycle;
  std::int64_t horizon = 0;
};

// Eventual periodicity on spaces whose bounded sets are finite: finds m > n
// with m x0 = n x0 by exact point equality, then re-verifies that the orbit
// up to the horizon stays inside {x0, ..., (m - 1) x0}.
FiniteFixedPointResult detect_coarse_fixed_point_finite(
    const ActionSpec& action, const SpaceHandle& space, const Point& x0,
    std::int64_t horizon);

struct BallSpec {
  Point center;
  double radius = 0.0;
};

struct NetCenter {
  Point point;
  std::int64_t orbit_time = 0;   // time at which the orbit first visits it
  std::int64_t return_time = 0;  // T_i: first a >= 0 with a x_i in D
};

// The data behind the recurrence argument for isometric N-actions: return
// times into D, the net K = B(D, 1) cap orbit, a greedy 1-net of K (x0 is
// center 0), first-return times T_i, and
//   L = max_i max_{0 <= a <= T_i} d(x0, a x_i).
// Every orbit point within the horizon was checked to lie in B(x0, L + 1).
struct RecurrenceCertificate {
  BallSpec bounded_set;
  std::vector<std::int64_t> return_times;
  std::vector<std::int64_t> net_times;  // orbit times of the points of K
  std::vector<NetCenter> centers;
  double L = 0.0;
  double bound = 0.0;  // L + 1
  double max_orbit_distance = 0.0;
  std::int64_t horizon = 0;
};

struct IsometryFixedPointResult {
  FixedPointVerdict verdict = FixedPointVerdict::not_recurrent_at_horizon;
  std::optional<RecurrenceCertificate> certificate;
  std::int64_t returns = 0;
};

inline constexpr std::int64_t kDefaultMinReturns = 50;

IsometryFixedPointResult detect_coarse_fixed_point_isometry(
    const ActionSpec& action, const SpaceHandle& space, const Point& x0,
    const BallSpec& bounded_set, std::int64_t horizon,
    std::int64_t min_returns = kDefaultMinReturns);

// Recomputes L from the stored centers and return times by iterating the
// action afresh.
double recompute_certificate_constant(const RecurrenceCertificate& cert,
                                      const ActionSpec& action,
                                      const SpaceHandle& space,
                                      const Point& x0);

// Checks d(m x, n x) <= L |m - n| with L = d(1 x, x) for all m, n <=
// horizon. Table row k holds the largest d over pairs with |m - n| = k.
// The affine bound is (L, 0); refuted with a witness on any violation.
CoarseReport isometry_orbit_lipschitz(const ActionSpec& action,
                                      const SpaceHandle& space,
                                      const Point& x, std::int64_t horizon,
                                      Execution exec = Execution::parallel);

// Finite prefix z_0 ... z_{n-1} of a point of the boundary of F_2.
struct BoundaryDirection {
  FreeWord prefix;
};

struct BoundaryWitness {
  char generator = 'a';
  std::size_t position = 0;
};

// A generator g in {a, b} and an index such that g z and z differ at that
// index for every infinite reduced extension z of the prefix.
BoundaryWitness boundary_moves_witness(const BoundaryDirection& z);

// Re-checks a witness by reduced multiplication on the prefix alone.
bool verify_boundary_witness(const BoundaryDirection& z,
                             const BoundaryWitness& w);

}  // namespace coarselab
