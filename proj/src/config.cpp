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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <set>

#include "coarselab/error.hpp"
#include "coarselab/odometer.hpp"
#include "config_internal.hpp"

namespace coarselab {

namespace detail {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_number(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  auto bad = [&]() {
    return InvalidArgument(field + ": cannot read '" + text + "' as a number");
  };
  try {
    if (t.rfind("2^", 0) == 0) {
      std::size_t used = 0;
      const int e = std::stoi(t.substr(2), &used);
      if (used != t.size() - 2) throw bad();
      return std::ldexp(1.0, e);
    }
    if (const auto slash = t.find('/'); slash != std::string::npos) {
      const double den = parse_number(field, t.substr(slash + 1));
      if (den == 0.0) throw bad();
      return parse_number(field, t.substr(0, slash)) / den;
    }
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size() || !std::isfinite(v)) throw bad();
    return v;
  } catch (const std::logic_error&) {
    throw bad();
  }
}

std::int64_t parse_integer(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(t, &used);
    if (used == t.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw InvalidArgument(field + ": cannot read '" + text + "' as an integer");
}

std::vector<double> parse_numbers(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    if (!item.empty()) out.push_back(parse_number(field, item));
  }
  if (out.empty()) throw InvalidArgument(field + ": empty list");
  return out;
}

namespace {

BaseGraph make_base(const ExperimentConfig& c) {
  const std::string spec = c.get("cone_base", "cycle:16");
  if (spec.rfind("cycle:", 0) == 0) {
    const auto n = parse_integer("cone_base", spec.substr(6));
    if (n < 3) throw InvalidArgument("cone_base: a cycle needs at least 3 nodes");
    const double len = c.has("cone_edge_length")
                           ? parse_number("cone_edge_length", c.get("cone_edge_length"))
                           : 2.0 * std::numbers::pi / static_cast<double>(n);
    return BaseGraph::cycle(static_cast<int>(n), len);
  }
  if (spec.rfind("edges:", 0) == 0) return BaseGraph::load_edge_list(spec.substr(6));
  throw InvalidArgument("cone_base: expected cycle:<n> or edges:<path>");
}

LambdaFunction make_lambda(const ExperimentConfig& c) {
  const std::string name = c.get("cone_lambda", "linear");
  if (name == "linear") return LambdaFunction::linear();
  if (name == "sqrt") return LambdaFunction::square_root();
  throw InvalidArgument("cone_lambda: expected linear or sqrt");
}

}  // namespace

std::shared_ptr<const ConeMetric> make_cone_metric(const ExperimentConfig& c,
                                                   const std::vector<double>& extra) {
  std::vector<double> heights = extra;
  if (c.has("cone_heights")) {
    for (double t : parse_numbers("cone_heights", c.get("cone_heights"))) heights.push_back(t);
  }
  double t_max = c.has("cone_t_max") ? parse_number("cone_t_max", c.get("cone_t_max")) : 16.0;
  for (double t : heights) t_max = std::max(t_max, t);
  return std::make_shared<const ConeMetric>(
      ConeGrid::geometric(make_base(c), t_max, heights), make_lambda(c));
}

}  // namespace detail

using detail::parse_integer;
using detail::parse_number;
using detail::parse_numbers;
using detail::trim;

std::string ExperimentConfig::get(const std::string& key,
                                  const std::string& fallback) const {
  const auto it = entries.find(key);
  return it == entries.end() ? fallback : it->second;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw InvalidArgument("line " + std::to_string(line_no) + ": empty key");
    if (!c.entries.emplace(key, value).second) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": duplicate key " + key);
    }
  }
  c.experiment = c.get("experiment");
  c.output = c.get("output", c.output);
  if (c.has("seed")) c.seed = static_cast<std::uint64_t>(parse_integer("seed", c.get("seed")));
  if (c.has("cap")) c.cap = static_cast<std::size_t>(parse_integer("cap", c.get("cap")));
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  return parse_config(in);
}

Point parse_point(const SpaceHandle& space, const std::string& raw) {
  const std::string text = trim(raw);
  switch (space.tag()) {
    case ModelTag::lattice: {
      std::string body = text;
      if (!body.empty() && body.front() == '(' && body.back() == ')') {
        body = body.substr(1, body.size() - 2);
      }
      LatticePoint p;
      for (const auto& item : detail::split(body, ',')) {
        p.coords.push_back(parse_integer("point", item));
      }
      if (!space.contains(p)) {
        throw ModelMismatch("point " + text + " is not in " + space.describe());
      }
      return p;
    }
    case ModelTag::free_group:
      return text == "e" ? FreeWord() : FreeWord::reduce(text);
    case ModelTag::binary_tree: {
      std::string digits;
      for (char c : text) {
        if (c != '(' && c != ')' && c != ',' && c != ' ') digits += c;
      }
      return TreeVertex::from_msb_string(digits.empty() ? "*" : digits);
    }
    case ModelTag::cone: {
      if (text == "apex") return ConePoint{0, 0.0};
      const auto at = text.find('@');
      if (at == std::string::npos) throw InvalidArgument("cone point: expected apex or v@t");
      const ConePoint p{static_cast<int>(parse_integer("point", text.substr(0, at))),
                        parse_number("point", text.substr(at + 1))};
      if (!space.contains(p)) throw ModelMismatch("cone point " + text + " is off the grid");
      return p;
    }
  }
  throw InvalidArgument("unknown model");
}

SpaceHandle make_space(const ExperimentConfig& c) {
  const std::string spec = c.get("space");
  SpaceHandle s = SpaceHandle::free_group();
  if (spec == "F2") {
    s = SpaceHandle::free_group();
  } else if (spec == "tree") {
    s = SpaceHandle::binary_tree();
  } else if (spec == "cone") {
    auto metric = detail::make_cone_metric(c, {});
    SpaceHandle probe = SpaceHandle::cone(metric, ConePoint{0, 0.0});
    const Point base = parse_point(probe, c.get("cone_basepoint", "apex"));
    s = SpaceHandle::cone(metric, std::get<ConePoint>(base));
  } else if (spec.size() >= 3 && (spec[0] == 'Z' || spec[0] == 'N') && spec[1] == '^') {
    const auto rank = parse_integer("space", spec.substr(2));
    if (rank < 1 || rank > 16) throw InvalidArgument("space: rank must be in 1..16");
    const bool natural = spec[0] == 'N';
    if (c.has("lattice_generators")) {
      std::vector<LatticePoint> gens;
      const SpaceHandle plain = SpaceHandle::lattice(static_cast<int>(rank), false);
      for (const auto& g : detail::split(c.get("lattice_generators"), ';')) {
        gens.push_back(std::get<LatticePoint>(parse_point(plain, g)));
      }
      s = SpaceHandle::lattice(static_cast<int>(rank), natural, std::move(gens));
    } else {
      s = SpaceHandle::lattice(static_cast<int>(rank), natural);
    }
  } else {
    throw InvalidArgument("space: expected Z^k, N^k, F2, tree or cone");
  }
  return s.with_cap(c.cap);
}

ActionSpec make_action(const ExperimentConfig& c, const SpaceHandle& space) {
  const std::string spec = c.get("action", "left-translation");
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto need = [&](ModelTag tag, const char* what) {
    if (space.tag() != tag) throw ModelMismatch("action " + name + " needs " + what);
  };
  if (name == "left-translation") return actions::left_translation(space);
  if (name == "right-translation") return actions::right_translation(space, parse_point(space, arg));
  if (name == "shift") {
    need(ModelTag::lattice, "a lattice");
    return actions::shift(std::get<LatticePoint>(parse_point(SpaceHandle::lattice(space.rank(), false), arg)));
  }
  if (name == "odometer") {
    need(ModelTag::binary_tree, "the binary tree");
    return actions::odometer();
  }
  if (name == "identity") return actions::identity();
  if (name == "constant") return actions::constant(parse_point(space, arg));
  if (name == "cyclic") {
    need(ModelTag::lattice, "Z^1 or N^1");
    if (space.rank() != 1) throw ModelMismatch("action cyclic needs rank 1");
    return actions::cyclic(static_cast<int>(parse_integer("action", arg)));
  }
  if (name == "rotation") {
    need(ModelTag::cone, "a cone");
    return actions::rotation(space.cone_metric().grid().base().size(),
                             static_cast<int>(parse_integer("action", arg)));
  }
  throw InvalidArgument("action: unknown action '" + spec + "'");
}

namespace {

const std::set<std::string> kExperiments = {"verify-coarse",    "orbit",
                                            "fixed-point",      "odometer-density",
                                            "cone-diagnostic",  "higson-defect"};
const std::set<std::string> kFunctions = {"sin-log", "sin", "atan"};

struct Checker {
  const ExperimentConfig& c;
  std::vector<Diagnostic> out;

  void add(const std::string& field, const std::string& message) {
    out.push_back({field, message});
  }
  bool require(const std::string& field) {
    if (c.has(field)) return true;
    add(field, "missing required field");
    return false;
  }
  std::optional<double> number(const std::string& field) {
    if (!c.has(field)) return std::nullopt;
    try {
      return parse_number(field, c.get(field));
    } catch (const Error& e) {
      add(field, e.what());
      return std::nullopt;
    }
  }
  std::optional<std::int64_t> integer(const std::string& field) {
    if (!c.has(field)) return std::nullopt;
    try {
      return parse_integer(field, c.get(field));
    } catch (const Error& e) {
      add(field, e.what());
      return std::nullopt;
    }
  }
  std::optional<std::vector<double>> numbers(const std::string& field) {
    if (!c.has(field)) return std::nullopt;
    try {
      return parse_numbers(field, c.get(field));
    } catch (const Error& e) {
      add(field, e.what());
      return std::nullopt;
    }
  }
  void non_negative(const std::string& field) {
    if (auto v = number(field); v && *v < 0) add(field, "must be >= 0");
  }
  void positive_list(const std::string& field) {
    if (auto v = numbers(field)) {
      for (double x : *v) {
        if (!(x > 0)) {
          add(field, "entries must be > 0");
          return;
        }
      }
    }
  }
  void space_syntax() {
    if (!require("space")) return;
    const std::string s = c.get("space");
    const bool lattice = s.size() >= 3 && (s[0] == 'Z' || s[0] == 'N') && s[1] == '^';
    if (!lattice && s != "F2" && s != "tree" && s != "cone") {
      add("space", "expected Z^k, N^k, F2, tree or cone");
    }
    if (lattice) integer_in("space", s.substr(2), 1, 16);
    if (s == "cone") cone_syntax();
  }
  void integer_in(const std::string& field, const std::string& text, std::int64_t lo,
                  std::int64_t hi) {
    try {
      const auto v = parse_integer(field, text);
      if (v < lo || v > hi) {
        add(field, "must be in " + std::to_string(lo) + ".." + std::to_string(hi));
      }
    } catch (const Error& e) {
      add(field, e.what());
    }
  }
  void cone_syntax() {
    const std::string base = c.get("cone_base", "cycle:16");
    if (base.rfind("cycle:", 0) == 0) {
      integer_in("cone_base", base.substr(6), 3, 100000);
    } else if (base.rfind("edges:", 0) != 0) {
      add("cone_base", "expected cycle:<n> or edges:<path>");
    }
    const std::string lambda = c.get("cone_lambda", "linear");
    if (lambda != "linear" && lambda != "sqrt") add("cone_lambda", "expected linear or sqrt");
    if (auto v = number("cone_edge_length"); v && !(*v > 0)) add("cone_edge_length", "must be > 0");
    if (auto v = number("cone_t_max"); v && !(*v > 0)) add("cone_t_max", "must be > 0");
    positive_list("cone_heights");
  }
  void action_syntax() {
    const std::string a = c.get("action", "left-translation");
    const std::string name = a.substr(0, a.find(':'));
    static const std::set<std::string> known = {
        "left-translation", "right-translation", "shift",   "odometer",
        "identity",         "constant",          "cyclic",  "rotation"};
    if (!known.count(name)) add("action", "unknown action '" + a + "'");
    static const std::set<std::string> with_arg = {"right-translation", "shift", "constant",
                                                   "cyclic", "rotation"};
    if (with_arg.count(name) && a.find(':') == std::string::npos) {
      add("action", name + " needs an argument after ':'");
    }
  }
};

}  // namespace

std::vector<Diagnostic> validate(const ExperimentConfig& c) {
  Checker k{c, {}};
  if (!k.require("experiment")) return k.out;
  if (!kExperiments.count(c.experiment)) {
    k.add("experiment", "unknown experiment '" + c.experiment + "'");
    return k.out;
  }
  k.integer("seed");
  if (auto cap = k.integer("cap"); cap && *cap < 1) k.add("cap", "must be >= 1");
  const std::string& e = c.experiment;

  if (e == "verify-coarse") {
    k.space_syntax();
    k.action_syntax();
    k.positive_list("radii");
    k.non_negative("sample_radius");
    k.number("bound_slope");
    k.number("bound_offset");
  } else if (e == "orbit" || e == "fixed-point") {
    k.space_syntax();
    k.action_syntax();
    if (k.require("horizon")) {
      if (auto h = k.integer("horizon"); h && *h < 0) k.add("horizon", "must be >= 0");
    }
    if (e == "fixed-point") {
      const std::string mode = c.get("mode", "auto");
      if (mode != "auto" && mode != "finite" && mode != "isometry") {
        k.add("mode", "expected auto, finite or isometry");
      }
      if (mode == "finite" && c.get("space") == "cone") {
        k.add("mode", "finite detection needs a space with finite balls");
      }
      k.non_negative("ball_radius");
      if (auto m = k.integer("min_returns"); m && *m < 1) k.add("min_returns", "must be >= 1");
      if (c.has("expect")) {
        const std::string x = c.get("expect");
        if (x != "bounded-orbit" && x != "inconclusive-at-horizon" &&
            x != "not-recurrent-at-horizon") {
          k.add("expect", "unknown verdict '" + x + "'");
        }
      }
    }
  } else if (e == "odometer-density") {
    std::int64_t precision = 0;  // 0: unknown
    if (k.require("precision")) {
      if (auto p = k.integer("precision")) {
        if (*p < 1 || *p > 4096) {
          k.add("precision", "must be in 1..4096");
        } else {
          precision = *p;
        }
      }
    }
    if (auto t = k.integer("targets"); t && *t < 1) k.add("targets", "must be >= 1");
    if (k.require("epsilons")) {
      if (auto eps = k.numbers("epsilons")) {
        for (double x : *eps) {
          if (!(x > 0.0 && x <= 1.0)) {
            k.add("epsilons", "entries must be in (0, 1]");
            break;
          }
          // A witness for 2^-N needs N + 1 digits.
          if (precision > 0 && precision_for_epsilon(x) + 1 > precision) {
            k.add("epsilons", "insufficient precision");
            break;
          }
        }
      }
    }
    if (c.has("x")) {
      const std::string x = c.get("x");
      if (x.find_first_not_of("01") != std::string::npos) {
        k.add("x", "expected a 0/1 digit string");
      } else if (precision > 0 && static_cast<std::int64_t>(x.size()) != precision) {
        k.add("x", "length must equal precision");
      }
    }
  } else if (e == "cone-diagnostic") {
    k.cone_syntax();
    if (k.require("r_e")) k.non_negative("r_e");
    if (k.require("heights")) k.positive_list("heights");
    k.non_negative("slack");
  } else if (e == "higson-defect") {
    k.space_syntax();
    if (k.require("function") && !kFunctions.count(c.get("function"))) {
      k.add("function", "expected sin-log, sin or atan");
    }
    if (k.require("entourage")) k.non_negative("entourage");
    std::optional<std::vector<double>> balls;
    if (k.require("balls")) balls = k.numbers("balls");
    k.non_negative("window");
    if (auto w = k.number("window"); w && balls) {
      if (*w < *std::max_element(balls->begin(), balls->end())) {
        k.add("window", "must be >= the largest ball radius");
      }
    }
    k.number("threshold");
  }
  return k.out;
}

}  // namespace coarselab
