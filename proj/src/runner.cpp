#include "mlip/runner.hpp"

#include <cmath>

#include <json.hpp>

#include "mlip/figures.hpp"
#include "mlip/io.hpp"

namespace mlip {

using nlohmann::json;

namespace {

std::string path_join(const std::string& dir, const std::string& name) {
  return dir.empty() ? name : dir + "/" + name;
}

json parse_object(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError(std::string("malformed JSON in ") + what);
  if (!j.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
  return j;
}

// Splits {"scenario": ..., <extras>} and parses the scenario strictly.
Scenario scenario_member(const json& j, const char* what) {
  if (!j.contains("scenario"))
    throw ParseError(std::string(what) + " config needs a 'scenario' member");
  return scenario_from_json(j.at("scenario").dump());
}

// Phase-portrait closure of the final full step, |x_k+1 - x_k|.
double phase_closure(const StepTrace& trace) {
  const size_t n = trace.steps.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (trace.steps[n - 1].state.vec() - trace.steps[n - 2].state.vec())
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

std::string simulation_metrics_json(const Scenario& sc, const StepTrace& trace) {
  const S2SDynamics dyn = compose_s2s(sc.params);
  const Matrix2d a_cl = dyn.A + dyn.B * sc.gains.K;
  const Vector2d w_max = observed_disturbance_bound(trace, true, 0);
  json j;
  j["n_steps_completed"] = trace.steps.size();
  j["diverged"] = trace.diverged;
  j["step_period"] = trace.step_period;
  j["mean_velocity"] = mean_step_velocity(trace, 10);
  j["mean_ground_speed"] = mean_ground_speed(trace, 10);
  j["w_max"] = json::array({w_max[0], w_max[1]});
  const InvariantBox box = invariant_box(a_cl, {w_max});
  j["e_box"] = json::array({box.e_max[0], box.e_max[1]});
  j["phase_closure"] = phase_closure(trace);
  if (!trace.steps.empty()) {
    const auto& last = trace.steps.back();
    const OrbitSpec orbit =
        sc.orbit_kind == OrbitKind::kP1
            ? p1_orbit(dyn, last.v_cmd)
            : p2_orbit(dyn, last.v_cmd,
                       sc.p2_width + last.v_cmd * dyn.params.step_period());
    const int idx = sc.orbit_kind == OrbitKind::kP2 ? last.k % 2 : 0;
    const Vector2d e = last.state.vec() - orbit.x_star[idx].vec();
    j["terminal_error"] = e.cwiseAbs().maxCoeff();
  }
  return j.dump(2) + "\n";
}

RunOutcome run_simulate(const std::string& scenario_json, const std::string& out_dir) {
  const Scenario sc = scenario_from_json(scenario_json);
  const StepTrace trace = simulate(sc);
  atomic_write_file(path_join(out_dir, "trace.csv"), trace_samples_csv(trace));
  atomic_write_file(path_join(out_dir, "steps.csv"), trace_steps_csv(trace));
  if (sc.orbit_kind == OrbitKind::kP1) {
    const double v_target = sc.command.segments.back().v;
    atomic_write_file(
        path_join(out_dir, "refs.csv"),
        reference_trace_csv(reference_trace(sc.params, v_target)));
  }
  RunOutcome out;
  out.metrics_json = simulation_metrics_json(sc, trace);
  atomic_write_file(path_join(out_dir, "metrics.json"), out.metrics_json);
  out.exit_code = trace.diverged ? 2 : 0;
  return out;
}

RunOutcome run_sweep(const std::string& config_json, const std::string& out_dir) {
  const json j = parse_object(config_json, "sweep config");
  for (const auto& item : j.items())
    if (item.key() != "scenario" && item.key() != "speeds")
      throw ParseError("unknown key '" + item.key() + "' in sweep config");
  const Scenario base = scenario_member(j, "sweep");
  std::vector<double> speeds{2.0, 1.0, 0.5, 0.0, -0.75, -1.5};
  if (j.contains("speeds")) {
    speeds.clear();
    for (const auto& v : j.at("speeds")) speeds.push_back(v.get<double>());
  }

  const auto entries = velocity_sweep(base, speeds);
  json summary = json::array();
  bool any_diverged = false;
  for (const auto& e : entries) {
    atomic_write_file(path_join(out_dir, "sweep_v" + filename_tag(e.v_cmd) + "_steps.csv"),
                      trace_steps_csv(e.trace));
    StepTrace window;
    window.samples = tail_samples(e.trace, 2);
    atomic_write_file(
        path_join(out_dir, "sweep_v" + filename_tag(e.v_cmd) + "_phase.csv"),
        trace_samples_csv(window));
    summary.push_back(json{{"v_cmd", e.v_cmd},
                           {"mean_velocity", e.mean_velocity},
                           {"terminal_error", e.terminal_error},
                           {"w_max", json::array({e.w_max[0], e.w_max[1]})},
                           {"e_box", json::array({e.e_box[0], e.e_box[1]})},
                           {"velocity_band", e.velocity_band},
                           {"within_band", e.within_band},
                           {"diverged", e.diverged}});
    any_diverged |= e.diverged;
  }
  RunOutcome out;
  out.metrics_json = json{{"entries", summary}}.dump(2) + "\n";
  atomic_write_file(path_join(out_dir, "sweep_metrics.json"), out.metrics_json);
  out.exit_code = any_diverged ? 2 : 0;
  return out;
}

RunOutcome run_push(const std::string& config_json, const std::string& out_dir) {
  const json j = parse_object(config_json, "push config");
  for (const auto& item : j.items())
    if (item.key() != "scenario" && item.key() != "pushes")
      throw ParseError("unknown key '" + item.key() + "' in push config");
  const Scenario base = scenario_member(j, "push");
  std::vector<ForceEvent> pushes{{15.0, 0.5, 1.5}, {20.0, 0.5, -1.5}};
  if (j.contains("pushes")) {
    pushes.clear();
    for (const auto& p : j.at("pushes")) {
      for (const auto& item : p.items())
        if (item.key() != "t" && item.key() != "duration" && item.key() != "accel")
          throw ParseError("unknown key '" + item.key() + "' in push");
      pushes.push_back({p.at("t").get<double>(), p.at("duration").get<double>(),
                        p.at("accel").get<double>()});
    }
  }

  const PushResult result = push_experiment(base, pushes);
  atomic_write_file(path_join(out_dir, "push_trace.csv"),
                    trace_samples_csv(result.trace));
  atomic_write_file(path_join(out_dir, "push_steps.csv"),
                    trace_steps_csv(result.trace));
  json rec = json::array();
  for (const auto& r : result.recoveries)
    rec.push_back(json{{"t_push", r.push.t_start},
                       {"duration", r.push.duration},
                       {"accel", r.push.accel},
                       {"push_step", r.push_step},
                       {"recovery_steps", r.recovery_steps},
                       {"recovered", r.recovered}});
  RunOutcome out;
  out.metrics_json =
      json{{"all_recovered", result.all_recovered},
           {"diverged", result.trace.diverged},
           {"w_max", json::array({result.w_max[0], result.w_max[1]})},
           {"e_box", json::array({result.e_box[0], result.e_box[1]})},
           {"recoveries", rec}}
          .dump(2) +
      "\n";
  atomic_write_file(path_join(out_dir, "push_metrics.json"), out.metrics_json);
  out.exit_code = result.trace.diverged ? 2 : 0;
  return out;
}

RunOutcome run_maxspeed(const std::string& config_json, const std::string& out_dir) {
  const json j = parse_object(config_json, "maxspeed config");
  for (const auto& item : j.items())
    if (item.key() != "scenario" && item.key() != "modes" && item.key() != "u_limit")
      throw ParseError("unknown key '" + item.key() + "' in maxspeed config");
  const Scenario base = scenario_member(j, "maxspeed");
  std::vector<WalkingMode> modes{WalkingMode::kHeelToToe, WalkingMode::kFlatFooted};
  if (j.contains("modes")) {
    modes.clear();
    for (const auto& m : j.at("modes")) {
      const std::string name = m.get<std::string>();
      if (name == "heel-to-toe") modes.push_back(WalkingMode::kHeelToToe);
      else if (name == "toe-to-heel") modes.push_back(WalkingMode::kToeToHeel);
      else if (name == "flat-footed") modes.push_back(WalkingMode::kFlatFooted);
      else throw ParseError("unknown walking mode '" + name + "'");
    }
  }
  const double u_limit = j.contains("u_limit") ? j.at("u_limit").get<double>() : 0.5;

  const auto entries = max_speed_search(base, modes, u_limit);
  json summary = json::array();
  bool any_missing = false;
  for (const auto& e : entries) {
    summary.push_back(json{{"mode", to_string(e.mode)},
                           {"v_cmd_max", e.v_cmd_max},
                           {"ground_speed", e.ground_speed},
                           {"found", e.found}});
    any_missing |= !e.found;
  }
  RunOutcome out;
  out.metrics_json =
      json{{"u_limit", u_limit}, {"entries", summary}}.dump(2) + "\n";
  atomic_write_file(path_join(out_dir, "maxspeed_metrics.json"), out.metrics_json);
  out.exit_code = any_missing ? 2 : 0;
  return out;
}

RunOutcome run_figures(const std::string& config_json, const std::string& out_dir) {
  RunOutcome out;
  out.metrics_json = generate_figures(config_json, out_dir);
  return out;
}

}  // namespace mlip
