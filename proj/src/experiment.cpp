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

#include "coarselab/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "coarselab/cone.hpp"
#include "coarselab/error.hpp"
#include "coarselab/odometer.hpp"
#include "config_internal.hpp"

#ifndef COARSELAB_VERSION
#define COARSELAB_VERSION "0.0.0"
#endif

namespace coarselab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using detail::parse_integer;
using detail::parse_number;
using detail::parse_numbers;

std::string library_version() { return COARSELAB_VERSION; }

void write_file_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json witness_json(const std::optional<WitnessPair>& w) {
  if (!w) return nullptr;
  return json{{"src", to_string(w->src)}, {"dst", to_string(w->dst)}};
}

json report_json(const CoarseReport& r) {
  json rows = json::array();
  for (const auto& e : r.table) {
    rows.push_back({{"scale", e.scale}, {"value", e.value}, {"witness", witness_json(e.witness)}});
  }
  json out = {{"property", to_string(r.property)},
              {"verdict", to_string(r.verdict)},
              {"table", rows}};
  out["affine"] = r.affine ? json{{"slope", r.affine->slope}, {"offset", r.affine->offset}}
                           : json(nullptr);
  out["counterexample"] = witness_json(r.counterexample);
  out["note"] = r.note;
  return out;
}

void append_report_rows(std::string& out, const std::string& generator, const CoarseReport& r) {
  for (const auto& e : r.table) {
    out += csv(generator) + "," + to_string(r.property) + "," + num(e.scale) + "," + num(e.value) +
           "," + csv(e.witness ? to_string(e.witness->src) : "") + "," +
           csv(e.witness ? to_string(e.witness->dst) : "") + "\n";
  }
}

std::string escape_csv(const OrbitRecord& rec) {
  std::string out = "r,last_time_within_r\n";
  for (const auto& e : rec.escape_profile) {
    out += std::to_string(e.radius) + "," + std::to_string(e.last_time_within) + "\n";
  }
  return out;
}

json orbit_json(const OrbitRecord& rec) {
  json pts = json::array();
  for (const auto& p : rec.points) {
    pts.push_back({{"point", to_string(p.point)}, {"time", p.time}, {"displacement", p.displacement}});
  }
  json esc = json::array();
  for (const auto& e : rec.escape_profile) {
    esc.push_back({{"r", e.radius}, {"last_time_within_r", e.last_time_within}});
  }
  return {{"base", to_string(rec.base)},         {"horizon", rec.horizon},
          {"max_displacement", rec.max_displacement}, {"points", pts},
          {"escape_profile", esc}};
}

json certificate_json(const RecurrenceCertificate& c) {
  json centers = json::array();
  for (const auto& x : c.centers) {
    centers.push_back({{"point", to_string(x.point)},
                       {"orbit_time", x.orbit_time},
                       {"return_time", x.return_time}});
  }
  return {{"bounded_set", {{"center", to_string(c.bounded_set.center)},
                           {"radius", c.bounded_set.radius}}},
          {"return_times", c.return_times},
          {"net_times", c.net_times},
          {"centers", centers},
          {"L", c.L},
          {"bound", c.bound},
          {"max_orbit_distance", c.max_orbit_distance},
          {"horizon", c.horizon}};
}

struct Outcome {
  std::string verdict;
  bool refuted = false;
};

class Runner {
 public:
  Runner(const ExperimentConfig& c, RunManifest& m) : c_(c), m_(m), dir_(c.output) {}

  Outcome dispatch() {
    const std::string& e = c_.experiment;
    if (e == "verify-coarse") return verify_coarse();
    if (e == "orbit") return orbit_run();
    if (e == "fixed-point") return fixed_point();
    if (e == "odometer-density") return density();
    if (e == "cone-diagnostic") return cone_diagnostic();
    return higson();
  }

 private:
  void emit(const std::string& name, const std::string& contents) {
    write_file_atomic(dir_ / name, contents);
    m_.files.push_back(name);
  }
  double number(const std::string& key, double fallback) const {
    return c_.has(key) ? parse_number(key, c_.get(key)) : fallback;
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    return c_.has(key) ? parse_integer(key, c_.get(key)) : fallback;
  }
  Execution exec() const {
    return c_.get("execution", "parallel") == "serial" ? Execution::serial : Execution::parallel;
  }

  Outcome verify_coarse() {
    const SpaceHandle space = make_space(c_);
    const ActionSpec action = make_action(c_, space);
    const std::vector<double> radii =
        c_.has("radii") ? parse_numbers("radii", c_.get("radii")) : kDefaultRadii;
    const double fallback = space.tag() == ModelTag::binary_tree ? kDefaultTreeSampleDepth
                                                                 : kDefaultGroupSampleRadius;
    const double sample = number("sample_radius", fallback);
    CoarseActionReport report = verify_coarse_action(action, space, radii, sample, exec());
    if (c_.has("bound_slope") || c_.has("bound_offset")) {
      const AffineBound bound{number("bound_slope", 1.0), number("bound_offset", 0.0)};
      for (auto& g : report.generators) {
        g.bornologous = check_affine_bound(g.bornologous, bound);
        if (g.bornologous.verdict == Verdict::refuted) report.verdict = Verdict::refuted;
      }
    }
    std::string table = "generator,property,R_or_B,value,witness_src,witness_dst\n";
    json gens = json::array();
    for (const auto& g : report.generators) {
      append_report_rows(table, g.generator, g.bornologous);
      append_report_rows(table, g.generator, g.properness);
      gens.push_back({{"generator", g.generator},
                      {"bornologous", report_json(g.bornologous)},
                      {"properness", report_json(g.properness)}});
    }
    emit("coarse.csv", table);
    emit("report.json", json{{"action", action.name},
                             {"space", space.describe()},
                             {"verdict", to_string(report.verdict)},
                             {"generators", gens}}
                            .dump(2) + "\n");
    return {to_string(report.verdict), report.verdict == Verdict::refuted};
  }

  Outcome orbit_run() {
    const SpaceHandle space = make_space(c_);
    const ActionSpec action = make_action(c_, space);
    const Point x0 = c_.has("x0") ? parse_point(space, c_.get("x0")) : space.basepoint();
    const OrbitRecord rec = orbit(action, space, x0, integer("horizon", 0));
    emit("escape.csv", escape_csv(rec));
    emit("orbit.json", orbit_json(rec).dump(2) + "\n");
    return {"computed", false};
  }

  Outcome fixed_point() {
    const SpaceHandle space = make_space(c_);
    const ActionSpec action = make_action(c_, space);
    const Point x0 = c_.has("x0") ? parse_point(space, c_.get("x0")) : space.basepoint();
    const std::int64_t horizon = integer("horizon", 0);
    std::string mode = c_.get("mode", "auto");
    if (mode == "auto") mode = action.isometry ? "isometry" : "finite";
    json out = {{"action", action.name}, {"space", space.describe()}, {"mode", mode}};
    std::string verdict;
    if (mode == "finite") {
      const auto res = detect_coarse_fixed_point_finite(action, space, x0, horizon);
      verdict = to_string(res.verdict);
      out["verdict"] = verdict;
      if (res.cycle) {
        json orbit_pts = json::array();
        for (const auto& p : res.cycle->orbit) orbit_pts.push_back(to_string(p));
        out["cycle"] = {{"n", res.cycle->first}, {"m", res.cycle->repeat}, {"orbit", orbit_pts}};
      }
    } else {
      const Point center =
          c_.has("ball_center") ? parse_point(space, c_.get("ball_center")) : x0;
      const BallSpec d{center, number("ball_radius", 1.0)};
      const auto res = detect_coarse_fixed_point_isometry(
          action, space, x0, d, horizon, integer("min_returns", kDefaultMinReturns));
      verdict = to_string(res.verdict);
      out["verdict"] = verdict;
      out["returns"] = res.returns;
      if (res.certificate) out["certificate"] = certificate_json(*res.certificate);
      const OrbitRecord rec = orbit(action, space, x0, horizon);
      emit("escape.csv", escape_csv(rec));
    }
    emit("fixed_point.json", out.dump(2) + "\n");
    const bool missed = c_.has("expect") && c_.get("expect") != verdict;
    return {verdict, missed};
  }

  Outcome density() {
    const auto precision = static_cast<std::size_t>(integer("precision", 0));
    const std::vector<double> eps = parse_numbers("epsilons", c_.get("epsilons"));
    const auto count = static_cast<std::size_t>(integer("targets", 10));
    std::mt19937_64 rng(c_.seed);
    auto random_word = [&]() {
      std::vector<std::uint8_t> bits(precision);
      for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1U);
      return BoundaryWord(std::move(bits));
    };
    const BoundaryWord x =
        c_.has("x") ? BoundaryWord::from_string(c_.get("x")) : random_word();
    std::vector<BoundaryWord> targets;
    for (std::size_t i = 0; i < count; ++i) targets.push_back(random_word());
    const auto rows = density_experiment(x, targets, eps);
    std::string out = "target,epsilon,witness_n_decimal,achieved_distance_log2\n";
    bool all = true;
    for (const auto& r : rows) {
      out += r.target.to_string() + "," + num(r.epsilon) + "," + r.witness.str() + "," +
             std::to_string(-r.achieved.exponent) + "\n";
      all = all && r.verified;
    }
    emit("density.csv", out);
    return {all ? "certified-at-scale" : "refuted", !all};
  }

  Outcome cone_diagnostic() {
    const std::vector<double> heights = parse_numbers("heights", c_.get("heights"));
    const auto metric = detail::make_cone_metric(c_, heights);
    const auto rows = compactification_diagnostic(*metric, number("r_e", 0.0), heights,
                                                  number("slack", 0.1), exec());
    std::string out = "t,measured_sep,bound,pass\n";
    bool all = true;
    for (const auto& r : rows) {
      out += num(r.height) + "," + num(r.measured_separation) + "," + num(r.bound) + "," +
             (r.pass ? "true" : "false") + "\n";
      all = all && r.pass;
    }
    emit("cone_diagnostic.csv", out);
    return {all ? "certified-at-scale" : "refuted", !all};
  }

  Outcome higson() {
    const SpaceHandle space = make_space(c_);
    const std::string name = c_.get("function");
    const Point base = space.basepoint();
    // "sin" reads the coordinate on Z^1 / N^1 and the distance elsewhere.
    ScalarFunction f;
    if (name == "sin-log") {
      f = [space, base](const Point& p) { return std::sin(std::log1p(space.distance(base, p))); };
    } else if (name == "atan") {
      f = [space, base](const Point& p) { return std::atan(space.distance(base, p)); };
    } else {
      const bool coordinate = space.tag() == ModelTag::lattice && space.rank() == 1;
      f = [space, base, coordinate](const Point& p) {
        return std::sin(coordinate ? static_cast<double>(std::get<LatticePoint>(p).coords[0])
                                   : space.distance(base, p));
      };
    }
    const std::vector<double> balls = parse_numbers("balls", c_.get("balls"));
    const double window = number("window", *std::max_element(balls.begin(), balls.end()));
    const auto table =
        higson_defect(f, name, space, number("entourage", 0.0), balls, window, exec());
    std::string out = "B,defect,witness_src,witness_dst\n";
    bool pass = true;
    const bool gated = c_.has("threshold");
    const double threshold = number("threshold", 0.0);
    for (const auto& e : table.entries) {
      out += num(e.ball_radius) + "," + num(e.defect) + "," +
             csv(e.witness ? to_string(e.witness->src) : "") + "," +
             csv(e.witness ? to_string(e.witness->dst) : "") + "\n";
      if (gated && !(e.defect < threshold)) pass = false;
    }
    emit("higson.csv", out);
    if (!gated) return {"computed", false};
    return {pass ? "certified-at-scale" : "refuted", !pass};
  }

  const ExperimentConfig& c_;
  RunManifest& m_;
  fs::path dir_;
};

std::string manifest_text(const RunManifest& m) {
  json j;
  j["config"] = m.config;
  j["version"] = m.version;
  j["wall_seconds"] = m.wall_seconds;
  j["verdict"] = m.verdict;
  j["files"] = m.files;
  j["error"] = m.error;
  j["exit_code"] = m.exit_code;
  return j.dump(2) + "\n";
}

}  // namespace

RunManifest run(const ExperimentConfig& config) {
  RunManifest m;
  m.config = config.entries;
  m.config["seed"] = std::to_string(config.seed);
  m.config["cap"] = std::to_string(config.cap);
  m.config["output"] = config.output;
  m.version = library_version();
  const auto start = std::chrono::steady_clock::now();
  const auto diagnostics = validate(config);
  if (!diagnostics.empty()) {
    m.verdict = "config-error";
    m.exit_code = 2;
    for (const auto& d : diagnostics) {
      if (!m.error.empty()) m.error += "; ";
      m.error += d.field + ": " + d.message;
    }
  } else {
    try {
      Runner runner(config, m);
      const Outcome o = runner.dispatch();
      m.verdict = o.verdict;
      m.exit_code = o.refuted ? 1 : 0;
    } catch (const std::exception& e) {
      m.verdict = "error";
      m.error = e.what();
      m.exit_code = 2;
    }
  }
  m.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_file_atomic(fs::path(config.output) / "manifest.json", manifest_text(m));
  return m;
}

}  // namespace coarselab
