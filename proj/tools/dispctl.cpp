// Command-line front end: analyze / synthesize / simulate / stabilize.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dispctl/cli/runner.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::string sweep;
  bool zero_feedback = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Scenario file (JSON)")->required();
  sub->add_option("--out", f.out, "Output directory (default: $DISPCTL_OUT_DIR or ./out)");
  sub->add_option("--seed", f.seed, "Seed for random_seeded fields");
  sub->add_option("--sweep", f.sweep, "Parameter sweep <path>=<start:stop:count> or <path>=<v1,v2,...>");
}

int dispatch(dispctl::cli::Command cmd, const Flags& f) {
  using namespace dispctl::cli;
  RunOptions opts;
  if (!f.out.empty()) {
    opts.out_dir = f.out;
  } else if (const char* env = std::getenv("DISPCTL_OUT_DIR"); env != nullptr && *env != '\0') {
    opts.out_dir = env;
  } else {
    opts.out_dir = "out";
  }
  opts.seed = f.seed;
  opts.zero_feedback = f.zero_feedback;
  try {
    if (f.sweep.empty()) return run(cmd, load_scenario(f.config), opts);
    const Sweep sweep = parse_sweep(f.sweep);
    const dispctl::json base = scenario_to_json(load_scenario(f.config));
    return run_sweep(cmd, base, sweep, opts);
  } catch (const dispctl::HypothesisError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitHypothesis;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moment-method controls and stabilizing feedback for linear dispersive equations on the torus"};
  app.require_subcommand(1);
  Flags flags;
  auto* analyze = app.add_subcommand("analyze", "Cluster the spectrum and report gap constants");
  auto* synth = app.add_subcommand("synthesize", "Build the moment-method control for the scenario");
  auto* sim = app.add_subcommand("simulate", "Synthesize, then integrate the controlled trajectory");
  auto* stab = app.add_subcommand("stabilize", "Run the closed loop with a feedback law");
  for (auto* sub : {analyze, synth, sim, stab}) add_common(sub, flags);
  stab->add_flag("--zero-feedback", flags.zero_feedback, "Override the feedback with K = 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dispctl::cli::kExitConfig;
  }
  using dispctl::cli::Command;
  if (*analyze) return dispatch(Command::Analyze, flags);
  if (*synth) return dispatch(Command::Synthesize, flags);
  if (*sim) return dispatch(Command::Simulate, flags);
  return dispatch(Command::Stabilize, flags);
}
