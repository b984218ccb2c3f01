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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace coarselab {

// A point of Z^k or N^k.
struct LatticePoint {
  std::vector<std::int64_t> coords;

  std::size_t rank() const { return coords.size(); }
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

// Reduced word in the free group on {a, b}; 'A' and 'B' are the inverses.
// The empty word is the identity. Instances are always freely reduced.
class FreeWord {
 public:
  FreeWord() = default;

  // Freely reduces an arbitrary letter sequence. Throws InvalidArgument on
  // letters outside {a, A, b, B}.
  static FreeWord reduce(std::string_view raw);

  // Accepts an already reduced word; throws InvalidArgument otherwise.
  static FreeWord from_reduced(std::string_view letters);

  const std::string& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  char operator[](std::size_t i) const { return letters_[i]; }

  FreeWord inverse() const;

  friend FreeWord operator*(const FreeWord& lhs, const FreeWord& rhs);
  friend bool operator==(const FreeWord&, const FreeWord&) = default;
  friend auto operator<=>(const FreeWord&, const FreeWord&) = default;

 private:
  explicit FreeWord(std::string letters) : letters_(std::move(letters)) {}
  std::string letters_;
};

char inverse_letter(char c);
bool is_generator_letter(char c);

// Every reduced word of exactly the given length, in lexicographic order of
// the alphabet a < A < b < B.
std::vector<FreeWord> reduced_words_of_length(std::size_t length);

// Vertex of the rooted binary tree. Digits are stored least significant
// first: bit(0) is i_0. The root * has depth 0. The parent of a vertex drops
// its most significant digit, so the ancestors of a vertex are exactly its
// low-order prefixes.
class TreeVertex {
 public:
  static constexpr int kMaxDepth = 63;

  TreeVertex() = default;  // the root *

  static TreeVertex root() { return {}; }
  // Digits given most significant first, as in "(i_{n-1},...,i_0)"; e.g.
  // "011" has i_0 = 1, i_1 = 1, i_2 = 0.
  static TreeVertex from_msb_string(std::string_view digits);
  static TreeVertex from_lsb_bits(const std::vector<int>& bits);
  static TreeVertex from_value(std::uint64_t value, int depth);

  int depth() const { return depth_; }
  std::uint64_t value() const { return bits_; }
  int bit(int k) const { return static_cast<int>((bits_ >> k) & 1U); }
  bool is_root() const { return depth_ == 0; }
  bool all_ones() const;

  TreeVertex parent() const;
  TreeVertex child(int digit) const;

  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
  friend auto operator<=>(const TreeVertex&, const TreeVertex&) = default;

 private:
  TreeVertex(std::uint64_t bits, int depth) : bits_(bits), depth_(depth) {}
  std::uint64_t bits_ = 0;
  int depth_ = 0;
};

// Point (vertex, height) of the cone over a finite base graph. Every point of
// height zero is the apex, whatever its vertex.
struct ConePoint {
  int vertex = 0;
  double height = 0.0;

  bool is_apex() const { return height == 0.0; }
  friend bool operator==(const ConePoint& p, const ConePoint& q) {
    if (p.is_apex() || q.is_apex()) return p.is_apex() && q.is_apex();
    return p.vertex == q.vertex && p.height == q.height;
  }
};

using Point = std::variant<LatticePoint, FreeWord, TreeVertex, ConePoint>;

// Maps and scalar functions over points. Implementations must be pure: the
// analyzers call them concurrently.
using PointMap = std::function<Point(const Point&)>;
using ScalarFunction = std::function<double(const Point&)>;

std::string to_string(const LatticePoint& p);
std::string to_string(const FreeWord& w);
std::string to_string(const TreeVertex& v);
std::string to_string(const ConePoint& p);
std::string to_string(const Point& p);

struct PointHash {
  std::size_t operator()(const Point& p) const;
};

}  // namespace coarselab
