#pragma once

// Orchestration behind the CLI subcommands: parse an experiment config,
// run it, write artifacts under an output directory, and summarize in
// JSON. Exit codes follow the CLI contract: 0 success, 2 numerical
// failure; schema problems throw ParseError and become exit 1.

#include <string>

#include "mlip/sim.hpp"

namespace mlip {

struct RunOutcome {
  int exit_code = 0;
  std::string metrics_json;
};

// Post-run summary: residual bound, invariant box, steady velocity, orbit
// error, phase closure.
std::string simulation_metrics_json(const Scenario& scenario, const StepTrace& trace);

// scenario document -> trace.csv, steps.csv, refs.csv, metrics.json
RunOutcome run_simulate(const std::string& scenario_json, const std::string& out_dir);
// {"scenario": {...}, "speeds": [...]}
RunOutcome run_sweep(const std::string& config_json, const std::string& out_dir);
// {"scenario": {...}, "pushes": [{"t","duration","accel"}...]}
RunOutcome run_push(const std::string& config_json, const std::string& out_dir);
// {"scenario": {...}, "modes": [...], "u_limit": ...}
RunOutcome run_maxspeed(const std::string& config_json, const std::string& out_dir);
// figure-bundle config, see figures.hpp
RunOutcome run_figures(const std::string& config_json, const std::string& out_dir);

}  // namespace mlip
