#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "cubicvd/cli/run.hpp"

using namespace cubicvd;

namespace {

struct Flags {
  std::string config;
  RunConfig cfg;
};

void add_common(CLI::App* sub, Flags& f) {
  auto& c = f.cfg;
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--sigma", c.sigma, "real part of s");
  sub->add_option("--t", c.t, "imaginary part of s");
  sub->add_option("--case", c.mode, "1: log L(s, chi), 2: L'/L(s, chi)");
  sub->add_option("--cutoff-prime", c.cutoff_prime, "prime norm cutoff");
  sub->add_option("--family-bound", c.family_bound, "family norm bound Y");
  sub->add_option("--grid-radius", c.grid_radius, "charfn: |y| half-width; density: inversion radius (0 = auto)");
  sub->add_option("--grid-step", c.grid_step, "charfn: y step; density: t step (0 = auto)");
  sub->add_option("--bounds", c.bounds, "density box t1_lo t1_hi t2_lo t2_hi")->expected(4);
  sub->add_option("--target", c.target, "density: envelope target at the radius");
  sub->add_option("--samples", c.samples, "number of draws");
  sub->add_option("--seed", c.seed, "sampler seed");
  sub->add_option("--epsilon", c.epsilon, "decay window margin");
  sub->add_option("--y", c.y_abs, "decay: |y| values")->expected(1, 64);
  sub->add_option("--theta", c.theta, "decay: arg y");
  sub->add_flag("--heuristic", c.heuristic, "allow sigma <= 1 sweeps (no error bounds)");
  sub->add_option("--out", c.out, "output prefix (<out>.csv, <out>.json)");
  sub->add_flag("--check", c.check, "run acceptance checks; exit 3 on failure");
  sub->add_option("--threads", c.threads, "worker threads");
}

// Flags given explicitly win over the config file.
RunConfig merge(const CLI::App* sub, const Flags& f) {
  RunConfig out;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ValidationError("cannot read config file " + f.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("config: ") + e.what());
    }
    apply_json(out, j);
  }
  const auto& c = f.cfg;
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--sigma")) out.sigma = c.sigma;
  if (given("--t")) out.t = c.t;
  if (given("--case")) out.mode = c.mode;
  if (given("--cutoff-prime")) out.cutoff_prime = c.cutoff_prime;
  if (given("--family-bound")) out.family_bound = c.family_bound;
  if (given("--grid-radius")) out.grid_radius = c.grid_radius;
  if (given("--grid-step")) out.grid_step = c.grid_step;
  if (given("--bounds")) out.bounds = c.bounds;
  if (given("--target")) out.target = c.target;
  if (given("--samples")) out.samples = c.samples;
  if (given("--seed")) out.seed = c.seed;
  if (given("--epsilon")) out.epsilon = c.epsilon;
  if (given("--y")) out.y_abs = c.y_abs;
  if (given("--theta")) out.theta = c.theta;
  if (given("--heuristic")) out.heuristic = c.heuristic;
  if (given("--out")) out.out = c.out;
  if (given("--check")) out.check = c.check;
  if (given("--threads")) out.threads = c.threads;
  out.subcommand = sub->get_name();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Value distribution of L-functions of cubic characters over Q(sqrt(-3))"};
  app.set_version_flag("--version", std::string(CUBICVD_VERSION));
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> subs = {
      {"charfn", "characteristic function on a square y-grid"},
      {"sweep", "L-values over the family with truncation bounds"},
      {"density", "density on a t-grid by Fourier inversion"},
      {"sample", "draws from the random Euler product"},
      {"compare", "sampler and family discrepancies against the inverted density"},
      {"decay", "decay windows and the log|phi| regression"},
      {"count", "smoothed family counts and the count constant"},
  };
  for (const auto& [name, help] : subs) add_common(app.add_subcommand(name, help), flags);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }
  try {
    const RunConfig cfg = merge(app.get_subcommands().front(), flags);
    const RunResult r = run(cfg);
    if (r.exit_code != kExitOk) std::cerr << "cubicvd: " << r.message << '\n';
    else std::cout << cfg.out << ".csv\n" << cfg.out << ".json\n";
    return r.exit_code;
  } catch (const ValidationError& e) {
    std::cerr << "cubicvd: " << e.what() << '\n';
    return kExitValidation;
  }
}
