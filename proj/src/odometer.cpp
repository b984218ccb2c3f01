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

#include "coarselab/odometer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "coarselab/error.hpp"

namespace coarselab {

TreeVertex odometer_step(const TreeVertex& v) {
  if (v.is_root()) return TreeVertex::from_value(0, 1);
  if (v.all_ones()) {
    if (v.depth() >= TreeVertex::kMaxDepth) {
      throw InvalidArgument("odometer step leaves the representable tree depth");
    }
    return TreeVertex::from_value(std::uint64_t{1} << v.depth(), v.depth() + 1);
  }
  return TreeVertex::from_value(v.value() + 1, v.depth());
}

std::int64_t tree_distance(const TreeVertex& x, const TreeVertex& y) {
  return x.depth() + y.depth() - 2 * gromov_product(x, y).value;
}

BoundaryWord::BoundaryWord(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw InvalidArgument("boundary word needs precision >= 1");
  for (auto b : bits_) {
    if (b > 1) throw InvalidArgument("boundary digits must be 0 or 1");
  }
}

BoundaryWord BoundaryWord::zeros(std::size_t precision) {
  return BoundaryWord(std::vector<std::uint8_t>(precision, 0));
}

BoundaryWord BoundaryWord::ones(std::size_t precision) {
  return BoundaryWord(std::vector<std::uint8_t>(precision, 1));
}

BoundaryWord BoundaryWord::from_string(const std::string& digits) {
  std::vector<std::uint8_t> bits;
  for (char c : digits) {
    if (c == ',' || c == ' ') continue;
    if (c != '0' && c != '1') {
      throw InvalidArgument(std::string("invalid boundary digit '") + c + "'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BoundaryWord(std::move(bits));
}

BoundaryWord BoundaryWord::from_integer(const BigInt& value, std::size_t precision) {
  if (value < 0) throw InvalidArgument("negative boundary value");
  std::vector<std::uint8_t> bits(precision);
  for (std::size_t k = 0; k < precision; ++k) {
    bits[k] = boost::multiprecision::bit_test(value, static_cast<unsigned>(k)) ? 1 : 0;
  }
  return BoundaryWord(std::move(bits));
}

BigInt BoundaryWord::value(std::size_t digits) const {
  if (digits > bits_.size()) throw PrecisionError("not enough boundary digits");
  BigInt v = 0;
  for (std::size_t k = digits; k-- > 0;) {
    v <<= 1;
    v += bits_[k];
  }
  return v;
}

std::string BoundaryWord::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (auto b : bits_) out += static_cast<char>('0' + b);
  return out;
}

BoundaryStep odometer_step_boundary(const BoundaryWord& z) {
  std::vector<std::uint8_t> bits = z.bits();
  for (auto& b : bits) {
    if (b == 0) {
      b = 1;
      return {BoundaryWord(std::move(bits)), false};
    }
    b = 0;
  }
  return {BoundaryWord(std::move(bits)), true};
}

BoundaryStep odometer_advance(const BoundaryWord& z, const BigInt& n) {
  if (n < 0) throw InvalidArgument("the odometer only moves forward");
  const std::size_t p = z.precision();
  const BigInt sum = z.value() + n;
  const BigInt modulus = BigInt(1) << p;
  return {BoundaryWord::from_integer(sum % modulus, p), sum >= modulus};
}

GromovProduct gromov_product(const TreeVertex& x, const TreeVertex& y) {
  const int cap = std::min(x.depth(), y.depth());
  const std::uint64_t diff = x.value() ^ y.value();
  const int first = diff == 0 ? 64 : std::countr_zero(diff);
  return {std::min(cap, first), false};
}

GromovProduct gromov_product(const BoundaryWord& x, const BoundaryWord& y) {
  const std::size_t n = std::min(x.precision(), y.precision());
  std::size_t r = 0;
  while (r < n && x.bit(r) == y.bit(r)) ++r;
  return {static_cast<int>(r), r == n};
}

double DyadicDistance::to_double() const { return std::ldexp(1.0, -exponent); }

DyadicDistance boundary_distance(const BoundaryWord& x, const BoundaryWord& y) {
  if (x.precision() != y.precision()) {
    throw PrecisionError("boundary distance needs equal precision (" +
                         std::to_string(x.precision()) + " vs " +
                         std::to_string(y.precision()) + ")");
  }
  const GromovProduct g = gromov_product(x, y);
  return {g.value, g.lower_bound_only};
}

MinimalityWitness minimality_witness(const BoundaryWord& x, const BoundaryWord& y,
                                     int target) {
  if (target < 0) throw InvalidArgument("target precision must be >= 0");
  const auto digits = static_cast<std::size_t>(target) + 1;
  if (x.precision() < digits || y.precision() < digits) {
    throw PrecisionError("minimality witness for N = " + std::to_string(target) +
                         " needs precision > N");
  }
  MinimalityWitness w;
  w.target_precision = target;
  w.a = (BigInt(1) << digits) - x.value(digits);
  w.b = y.value(digits);
  w.n = w.a + w.b;
  return w;
}

int precision_for_epsilon(double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  int n = 0;
  while (std::ldexp(1.0, -n) > epsilon) {
    if (++n > 1074) throw InvalidArgument("epsilon below double range");
  }
  return n;
}

std::vector<DensityRow> density_experiment(const BoundaryWord& x,
                                           const std::vector<BoundaryWord>& targets,
                                           const std::vector<double>& epsilons) {
  std::vector<DensityRow> rows;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const BoundaryWord& y = targets[t];
    if (y.precision() != x.precision()) {
      throw PrecisionError("density targets must share the start's precision");
    }
    for (double eps : epsilons) {
      DensityRow row;
      row.target_index = t;
      row.target = y;
      row.epsilon = eps;
      row.target_precision = precision_for_epsilon(eps);
      const MinimalityWitness w = minimality_witness(x, y, row.target_precision);
      row.witness = w.n;
      const BoundaryWord moved = odometer_advance(x, w.n).word;
      row.achieved = boundary_distance(moved, y);
      row.verified = row.achieved.exponent >= row.target_precision + 1 &&
                     row.achieved.to_double() < eps;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<TreeVertex> vertices_up_to_depth(int max_depth) {
  if (max_depth < 0 || max_depth >= TreeVertex::kMaxDepth) {
    throw InvalidArgument("sweep depth out of range");
  }
  if (max_depth > 24) throw InvalidArgument("sweep depth too large to enumerate");
  std::vector<TreeVertex> out{TreeVertex::root()};
  for (int d = 1; d <= max_depth; ++d) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << d); ++v) {
      out.push_back(TreeVertex::from_value(v, d));
    }
  }
  return out;
}

namespace {

struct PairRecord {
  std::int64_t key = std::numeric_limits<std::int64_t>::min();
  std::int64_t i = -1;
  std::int64_t j = -1;
  // Larger key wins; ties go to the lexicographically smaller pair.
  void offer(std::int64_t k, std::int64_t a, std::int64_t b) {
    if (k > key || (k == key && std::pair(a, b) < std::pair(i, j))) {
      key = k;
      i = a;
      j = b;
    }
  }
};

}  // namespace

LipschitzSweep odometer_lipschitz_sweep(int max_depth, int slack, Execution exec) {
  const std::vector<TreeVertex> verts = vertices_up_to_depth(max_depth);
  std::vector<TreeVertex> images;
  images.reserve(verts.size());
  for (const auto& v : verts) images.push_back(odometer_step(v));
  const auto n = static_cast<std::int64_t>(verts.size());

  std::uint64_t violations = 0;
  PairRecord worst;
  auto row = [&](std::int64_t i, std::uint64_t& viol, PairRecord& rec) {
    for (std::int64_t j = i; j < n; ++j) {
      const std::int64_t excess =
          tree_distance(images[i], images[j]) - tree_distance(verts[i], verts[j]);
      if (excess > slack) ++viol;
      rec.offer(excess, i, j);
    }
  };
  if (exec == Execution::serial) {
    for (std::int64_t i = 0; i < n; ++i) row(i, violations, worst);
  } else {
#pragma omp parallel
    {
      std::uint64_t local_viol = 0;
      PairRecord local;
#pragma omp for schedule(dynamic, 16)
      for (std::int64_t i = 0; i < n; ++i) row(i, local_viol, local);
#pragma omp critical(coarselab_odometer_merge)
      {
        violations += local_viol;
        if (local.i >= 0) worst.offer(local.key, local.i, local.j);
      }
    }
  }
  LipschitzSweep out;
  out.pairs = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n + 1) / 2;
  out.violations = violations;
  out.max_excess = worst.key;
  out.worst = std::pair(verts[worst.i], verts[worst.j]);
  return out;
}

GromovSweep gromov_consistency_sweep(int max_depth, TreeDistance distance,
                                     Execution exec) {
  const std::vector<TreeVertex> verts = vertices_up_to_depth(max_depth);
  const auto n = static_cast<std::int64_t>(verts.size());
  std::uint64_t mismatches = 0;
  PairRecord first;  // key = 0 for every mismatch, so the smallest pair wins
  auto row = [&](std::int64_t i, std::uint64_t& bad, PairRecord& rec) {
    for (std::int64_t j = i; j < n; ++j) {
      const std::int64_t twice =
          verts[i].depth() + verts[j].depth() - distance(verts[i], verts[j]);
      const std::int64_t prefix = gromov_product(verts[i], verts[j]).value;
      if (twice != 2 * prefix) {
        ++bad;
        rec.offer(0, i, j);
      }
    }
  };
  if (exec == Execution::serial) {
    for (std::int64_t i = 0; i < n; ++i) row(i, mismatches, first);
  } else {
#pragma omp parallel
    {
      std::uint64_t local_bad = 0;
      PairRecord local;
#pragma omp for schedule(dynamic, 16)
      for (std::int64_t i = 0; i < n; ++i) row(i, local_bad, local);
#pragma omp critical(coarselab_gromov_merge)
      {
        mismatches += local_bad;
        if (local.i >= 0) first.offer(0, local.i, local.j);
      }
    }
  }
  GromovSweep out;
  out.pairs = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n + 1) / 2;
  out.mismatches = mismatches;
  if (first.i >= 0) out.first_mismatch = std::pair(verts[first.i], verts[first.j]);
  return out;
}

}  // namespace coarselab
