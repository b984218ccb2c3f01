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

#include "coarselab/point.hpp"

#include <bit>
#include <cstdio>
#include <sstream>

#include "coarselab/error.hpp"

namespace coarselab {

char inverse_letter(char c) {
  switch (c) {
    case 'a': return 'A';
    case 'A': return 'a';
    case 'b': return 'B';
    case 'B': return 'b';
    default: throw InvalidArgument(std::string("invalid letter '") + c + "'");
  }
}

bool is_generator_letter(char c) {
  return c == 'a' || c == 'A' || c == 'b' || c == 'B';
}

FreeWord FreeWord::reduce(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (!is_generator_letter(c)) {
      throw InvalidArgument(std::string("invalid letter '") + c + "'");
    }
    if (!out.empty() && out.back() == inverse_letter(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return FreeWord(std::move(out));
}

FreeWord FreeWord::from_reduced(std::string_view letters) {
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (!is_generator_letter(letters[i])) {
      throw InvalidArgument(std::string("invalid letter '") + letters[i] + "'");
    }
    if (i > 0 && letters[i - 1] == inverse_letter(letters[i])) {
      throw InvalidArgument("word '" + std::string(letters) + "' is not reduced");
    }
  }
  return FreeWord(std::string(letters));
}

FreeWord FreeWord::inverse() const {
  std::string out(letters_.rbegin(), letters_.rend());
  for (char& c : out) c = inverse_letter(c);
  return FreeWord(std::move(out));
}

FreeWord operator*(const FreeWord& lhs, const FreeWord& rhs) {
  const std::string& l = lhs.letters_;
  const std::string& r = rhs.letters_;
  std::size_t cancel = 0;
  while (cancel < l.size() && cancel < r.size() &&
         l[l.size() - 1 - cancel] == inverse_letter(r[cancel])) {
    ++cancel;
  }
  std::string out;
  out.reserve(l.size() + r.size() - 2 * cancel);
  out.append(l, 0, l.size() - cancel);
  out.append(r, cancel, std::string::npos);
  return FreeWord(std::move(out));
}

std::vector<FreeWord> reduced_words_of_length(std::size_t length) {
  static constexpr char kAlphabet[] = {'a', 'A', 'b', 'B'};
  std::vector<std::string> layer = {""};
  for (std::size_t n = 0; n < length; ++n) {
    std::vector<std::string> next;
    next.reserve(layer.size() * 4);
    for (const auto& w : layer) {
      for (char c : kAlphabet) {
        if (!w.empty() && w.back() == inverse_letter(c)) continue;
        next.push_back(w + c);
      }
    }
    layer = std::move(next);
  }
  std::vector<FreeWord> out;
  out.reserve(layer.size());
  for (auto& w : layer) out.push_back(FreeWord::from_reduced(w));
  return out;
}

TreeVertex TreeVertex::from_msb_string(std::string_view digits) {
  if (digits == "*") return root();
  if (static_cast<int>(digits.size()) > kMaxDepth) {
    throw InvalidArgument("tree vertex deeper than " + std::to_string(kMaxDepth));
  }
  std::uint64_t bits = 0;
  const int depth = static_cast<int>(digits.size());
  for (int k = 0; k < depth; ++k) {
    const char c = digits[depth - 1 - k];
    if (c != '0' && c != '1') {
      throw InvalidArgument(std::string("invalid tree digit '") + c + "'");
    }
    if (c == '1') bits |= std::uint64_t{1} << k;
  }
  return {bits, depth};
}

TreeVertex TreeVertex::from_lsb_bits(const std::vector<int>& bits) {
  if (static_cast<int>(bits.size()) > kMaxDepth) {
    throw InvalidArgument("tree vertex deeper than " + std::to_string(kMaxDepth));
  }
  std::uint64_t value = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] != 0 && bits[k] != 1) throw InvalidArgument("tree digit not 0/1");
    if (bits[k] == 1) value |= std::uint64_t{1} << k;
  }
  return {value, static_cast<int>(bits.size())};
}

TreeVertex TreeVertex::from_value(std::uint64_t value, int depth) {
  if (depth < 0 || depth > kMaxDepth) {
    throw InvalidArgument("tree depth out of range");
  }
  if (depth < 64 && (value >> depth) != 0) {
    throw InvalidArgument("value does not fit in the given depth");
  }
  return {value, depth};
}

bool TreeVertex::all_ones() const {
  return depth_ > 0 && bits_ == (std::uint64_t{1} << depth_) - 1;
}

TreeVertex TreeVertex::parent() const {
  if (depth_ == 0) throw InvalidArgument("the root has no parent");
  const int d = depth_ - 1;
  return {bits_ & ((std::uint64_t{1} << d) - 1), d};
}

TreeVertex TreeVertex::child(int digit) const {
  if (depth_ >= kMaxDepth) {
    throw InvalidArgument("tree vertex deeper than " + std::to_string(kMaxDepth));
  }
  if (digit != 0 && digit != 1) throw InvalidArgument("tree digit not 0/1");
  return {bits_ | (static_cast<std::uint64_t>(digit) << depth_), depth_ + 1};
}

std::string to_string(const LatticePoint& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p.coords[i]);
  }
  return out + ")";
}

std::string to_string(const FreeWord& w) {
  return w.empty() ? std::string("e") : w.letters();
}

std::string to_string(const TreeVertex& v) {
  if (v.is_root()) return "*";
  std::string out = "(";
  for (int k = v.depth() - 1; k >= 0; --k) {
    out += static_cast<char>('0' + v.bit(k));
    if (k) out += ',';
  }
  return out + ")";
}

std::string to_string(const ConePoint& p) {
  if (p.is_apex()) return "apex";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d@%.17g", p.vertex, p.height);
  return buf;
}

std::string to_string(const Point& p) {
  return std::visit([](const auto& x) { return to_string(x); }, p);
}

namespace {
std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}
}  // namespace

std::size_t PointHash::operator()(const Point& p) const {
  std::size_t h = p.index();
  if (const auto* l = std::get_if<LatticePoint>(&p)) {
    for (auto c : l->coords) h = mix(h, std::hash<std::int64_t>{}(c));
  } else if (const auto* w = std::get_if<FreeWord>(&p)) {
    h = mix(h, std::hash<std::string>{}(w->letters()));
  } else if (const auto* v = std::get_if<TreeVertex>(&p)) {
    h = mix(mix(h, v->value()), static_cast<std::size_t>(v->depth()));
  } else if (const auto* c = std::get_if<ConePoint>(&p)) {
    if (!c->is_apex()) {
      h = mix(mix(h, std::hash<int>{}(c->vertex)), std::hash<double>{}(c->height));
    }
  }
  return h;
}

}  // namespace coarselab
