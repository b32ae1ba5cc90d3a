#pragma once

// Run configuration shared by the command-line driver and its JSON config file.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "cubicvd/common/error.hpp"

namespace cubicvd {

inline const std::vector<std::string> kSubcommands = {"charfn", "sweep", "density", "sample", "compare", "decay", "count"};

struct RunConfig {
  std::string subcommand = "charfn";
  double sigma = 1.5;
  double t = 0.0;
  int mode = 2;
  std::uint64_t cutoff_prime = 10000;  // prime norm cutoff (Euler products, series truncation)
  std::uint64_t family_bound = 100000; // Y
  double grid_radius = 0;              // charfn: |y| box half-width; density: inversion radius R (0 = auto)
  double grid_step = 0;                // charfn: y step; density: t step (0 = auto)
  std::vector<double> bounds;          // density: t1_lo, t1_hi, t2_lo, t2_hi (empty = from sampler quantiles)
  double target = 1e-6;                // density: envelope target at R
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  double epsilon = 0.01;               // decay window
  std::vector<double> y_abs = {1e3, 1e4, 1e5};
  double theta = 0.0;
  bool heuristic = false;              // allow sigma <= 1 sweeps
  std::string out = "cubicvd_out";     // path prefix: <out>.csv, <out>.json
  bool check = false;
  unsigned threads = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["subcommand"] = c.subcommand;
  j["sigma"] = c.sigma;
  j["t"] = c.t;
  j["case"] = c.mode;
  j["cutoff_prime"] = c.cutoff_prime;
  j["family_bound"] = c.family_bound;
  j["grid_radius"] = c.grid_radius;
  j["grid_step"] = c.grid_step;
  j["bounds"] = c.bounds;
  j["target"] = c.target;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["epsilon"] = c.epsilon;
  j["y_abs"] = c.y_abs;
  j["theta"] = c.theta;
  j["heuristic"] = c.heuristic;
  j["out"] = c.out;
  j["check"] = c.check;
  j["threads"] = c.threads;
  return j;
}

// Keys use the long flag spelling with '-' or '_'; unknown keys are rejected.
inline void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string k = it.key();
    for (auto& ch : k)
      if (ch == '-') ch = '_';
    const auto& v = it.value();
    try {
      if (k == "subcommand") c.subcommand = v.get<std::string>();
      else if (k == "sigma") c.sigma = v.get<double>();
      else if (k == "t") c.t = v.get<double>();
      else if (k == "case") c.mode = v.get<int>();
      else if (k == "cutoff_prime") c.cutoff_prime = v.get<std::uint64_t>();
      else if (k == "family_bound") c.family_bound = v.get<std::uint64_t>();
      else if (k == "grid_radius") c.grid_radius = v.get<double>();
      else if (k == "grid_step") c.grid_step = v.get<double>();
      else if (k == "bounds") c.bounds = v.get<std::vector<double>>();
      else if (k == "target") c.target = v.get<double>();
      else if (k == "samples") c.samples = v.get<std::uint64_t>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "epsilon") c.epsilon = v.get<double>();
      else if (k == "y_abs") c.y_abs = v.get<std::vector<double>>();
      else if (k == "theta") c.theta = v.get<double>();
      else if (k == "heuristic") c.heuristic = v.get<bool>();
      else if (k == "out") c.out = v.get<std::string>();
      else if (k == "check") c.check = v.get<bool>();
      else if (k == "threads") c.threads = v.get<unsigned>();
      else throw ValidationError("config: unknown key '" + it.key() + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("config: bad value for '" + it.key() + "': " + e.what());
    }
  }
}

inline RunConfig from_json(const nlohmann::json& j) {
  RunConfig c;
  apply_json(c, j);
  return c;
}

inline void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ValidationError("config: " + m); };
  if (std::find(kSubcommands.begin(), kSubcommands.end(), c.subcommand) == kSubcommands.end())
    fail("unknown subcommand '" + c.subcommand + "'");
  if (!std::isfinite(c.sigma) || c.sigma <= 0.5) fail("sigma must be finite and > 1/2");
  if (!std::isfinite(c.t)) fail("t must be finite");
  if (c.mode != 1 && c.mode != 2) fail("case must be 1 or 2");
  if (c.cutoff_prime < 3) fail("cutoff_prime must be at least 3");
  if (c.family_bound < 1) fail("family_bound must be positive");
  if (!(c.grid_radius >= 0) || !(c.grid_step >= 0)) fail("grid radius and step must be nonnegative");
  if (!c.bounds.empty() && (c.bounds.size() != 4 || !(c.bounds[0] < c.bounds[1]) || !(c.bounds[2] < c.bounds[3])))
    fail("bounds must be [t1_lo, t1_hi, t2_lo, t2_hi] with lo < hi");
  if (!(c.target > 0 && c.target < 1)) fail("target must lie in (0, 1)");
  if (c.samples < 2) fail("samples must be at least 2");
  if (!(c.epsilon > 0)) fail("epsilon must be positive");
  if (c.y_abs.empty()) fail("y_abs must not be empty");
  for (double y : c.y_abs)
    if (!(y > 1 && std::isfinite(y))) fail("y_abs entries must be finite and > 1");
  if (!std::isfinite(c.theta)) fail("theta must be finite");
  if (c.out.empty()) fail("out must not be empty");
  if (c.threads < 1) fail("threads must be at least 1");
}

}  // namespace cubicvd
