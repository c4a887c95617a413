#include "mlip/figures.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "mlip/io.hpp"
#include "mlip/sim.hpp"
#include "mlip/trajectory.hpp"

namespace mlip {

using nlohmann::json;

namespace {

std::string path_join(const std::string& dir, const std::string& name) {
  return dir.empty() ? name : dir + "/" + name;
}

GaitParams scaled_gait(double step_period, WalkingMode mode) {
  GaitParams p = default_sagittal_gait();
  p.mode = mode;
  p.t_fa = 0.4 * step_period;
  p.t_ua = 0.4 * step_period;
  p.t_oa = 0.2 * step_period;
  return p;
}

Scenario exact_scenario(const GaitParams& params) {
  Scenario sc;
  sc.params = params;
  sc.plant.kind = PlantKind::kExact;
  sc.plant.com_height = params.com_height;
  const S2SDynamics dyn = compose_s2s(params);
  sc.gains = dlqr(dyn.A, dyn.B, Matrix2d::Identity(), 1.0);
  return sc;
}

std::string window_csv(const std::vector<TraceSample>& samples) {
  StepTrace view;
  view.samples = samples;
  return trace_samples_csv(view);
}

struct FigureConfig {
  std::vector<std::string> figures{"fig4", "fig5", "fig6", "fig7", "fig8"};
  std::vector<double> speeds{2.0, 1.0, 0.5, 0.0, -0.75, -1.5};
  std::vector<double> orbit_speeds{0.0, 0.5, 1.0, 2.0};
  std::vector<double> step_periods{0.4, 0.6, 0.8};
  std::vector<double> widths{0.3, 0.4, 0.5};
  std::vector<double> push_speeds{1.0, 0.5, 0.75};
  std::vector<double> push_accels{1.5, -1.5};
  std::vector<double> push_times{15.0, 20.0};
  double push_duration = 0.5;
  double u_limit = 0.5;
  double mismatch_com_height = 0.78;
  int n_steps = 200;
};

FigureConfig parse_config(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON in figure config");
  if (!j.is_object()) throw ParseError("figure config must be a JSON object");
  FigureConfig cfg;
  auto doubles = [](const json& a) {
    std::vector<double> v;
    for (const auto& x : a) v.push_back(x.get<double>());
    return v;
  };
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key == "figures") {
      cfg.figures.clear();
      for (const auto& f : item.value()) cfg.figures.push_back(f.get<std::string>());
    } else if (key == "speeds") cfg.speeds = doubles(item.value());
    else if (key == "orbit_speeds") cfg.orbit_speeds = doubles(item.value());
    else if (key == "step_periods") cfg.step_periods = doubles(item.value());
    else if (key == "widths") cfg.widths = doubles(item.value());
    else if (key == "push_speeds") cfg.push_speeds = doubles(item.value());
    else if (key == "push_accels") cfg.push_accels = doubles(item.value());
    else if (key == "push_times") cfg.push_times = doubles(item.value());
    else if (key == "push_duration") cfg.push_duration = item.value().get<double>();
    else if (key == "u_limit") cfg.u_limit = item.value().get<double>();
    else if (key == "mismatch_com_height")
      cfg.mismatch_com_height = item.value().get<double>();
    else if (key == "n_steps") cfg.n_steps = item.value().get<int>();
    else if (key == "seed") { /* accepted for schema symmetry; nothing is random */ }
    else throw ParseError("unknown key '" + key + "' in figure config");
  }
  return cfg;
}

}  // namespace

std::string generate_figures(const std::string& config_json,
                             const std::string& out_dir) {
  const FigureConfig cfg = parse_config(config_json);
  json written = json::array();
  json metrics;
  auto emit = [&](const std::string& name, const std::string& content) {
    atomic_write_file(path_join(out_dir, name), content);
    written.push_back(name);
  };
  auto wants = [&](const std::string& name) {
    return std::find(cfg.figures.begin(), cfg.figures.end(), name) != cfg.figures.end();
  };

  if (wants("fig4")) {
    // (a) one walking mode across speeds
    for (double v : cfg.orbit_speeds) {
      const S2SDynamics dyn = compose_s2s(default_sagittal_gait());
      const OrbitSpec orbit = p1_orbit(dyn, v);
      emit("fig4a_v" + filename_tag(v) + ".csv",
           phase_portrait_csv(orbit_phase_portrait(dyn, orbit)));
    }
    // (b) mode comparison at one speed
    for (WalkingMode mode : {WalkingMode::kHeelToToe, WalkingMode::kFlatFooted}) {
      GaitParams p = default_sagittal_gait();
      p.mode = mode;
      const S2SDynamics dyn = compose_s2s(p);
      emit(std::string("fig4b_") + to_string(mode) + ".csv",
           phase_portrait_csv(orbit_phase_portrait(dyn, p1_orbit(dyn, 2.0))));
    }
    // (c) step-period family, walking backwards toe-first
    for (double T : cfg.step_periods) {
      const S2SDynamics dyn =
          compose_s2s(scaled_gait(T, WalkingMode::kToeToHeel));
      emit("fig4c_T" + filename_tag(T) + ".csv",
           phase_portrait_csv(orbit_phase_portrait(dyn, p1_orbit(dyn, -1.0))));
    }
    // (d) lateral period-2 family over nominal widths
    for (double w : cfg.widths) {
      const S2SDynamics dyn = compose_s2s(default_lateral_gait());
      emit("fig4d_w" + filename_tag(w) + ".csv",
           phase_portrait_csv(orbit_phase_portrait(dyn, p2_orbit(dyn, 0.0, w))));
    }
  }

  if (wants("fig5")) {
    // Steady-state walking against the exact plant, next to the nominal orbit.
    Scenario sag = exact_scenario(default_sagittal_gait());
    sag.command = VelocityProfile::ramped(2.0, sag.params.step_period());
    sag.n_steps = 40;
    const StepTrace sag_trace = simulate(sag);
    emit("fig5_sagittal_trace.csv", window_csv(tail_samples(sag_trace, 2)));
    const S2SDynamics sag_dyn = compose_s2s(sag.params);
    emit("fig5_sagittal_orbit.csv",
         phase_portrait_csv(orbit_phase_portrait(sag_dyn, p1_orbit(sag_dyn, 2.0))));

    Scenario lat = exact_scenario(default_lateral_gait());
    lat.orbit_kind = OrbitKind::kP2;
    lat.p2_width = cfg.widths.empty() ? 0.3 : cfg.widths.front();
    lat.command = VelocityProfile::constant(0.0);
    lat.n_steps = 40;
    const StepTrace lat_trace = simulate(lat);
    emit("fig5_lateral_trace.csv", window_csv(tail_samples(lat_trace, 4)));
    const S2SDynamics lat_dyn = compose_s2s(lat.params);
    emit("fig5_lateral_orbit.csv",
         phase_portrait_csv(orbit_phase_portrait(
             lat_dyn, p2_orbit(lat_dyn, 0.0, lat.p2_width))));
    emit("fig5_sagittal_refs.csv",
         reference_trace_csv(reference_trace(sag.params, 2.0)));
  }

  if (wants("fig6")) {
    json fig6 = json::object();
    for (const char* plant : {"exact", "mismatched"}) {
      Scenario base = exact_scenario(default_sagittal_gait());
      if (std::string(plant) == "mismatched") {
        base.plant.kind = PlantKind::kMismatched;
        base.plant.com_height = cfg.mismatch_com_height;
      }
      base.n_steps = cfg.n_steps;
      const auto entries = velocity_sweep(base, cfg.speeds);
      json summary = json::array();
      for (const auto& e : entries) {
        // Per-step commanded-vs-realized velocity, the tracking plot data.
        std::string csv = "t,v_cmd,v_step\n";
        for (const auto& s : e.trace.steps) {
          csv += format_double(s.k * e.trace.step_period);
          csv += ',';
          csv += format_double(s.v_cmd);
          csv += ',';
          csv += format_double(s.u / e.trace.step_period);
          csv += '\n';
        }
        emit("fig6_" + std::string(plant) + "_v" + filename_tag(e.v_cmd) + ".csv", csv);
        emit("fig6_" + std::string(plant) + "_v" + filename_tag(e.v_cmd) + "_phase.csv",
             window_csv(tail_samples(e.trace, 2)));
        summary.push_back(json{{"v_cmd", e.v_cmd},
                               {"mean_velocity", e.mean_velocity},
                               {"terminal_error", e.terminal_error},
                               {"velocity_band", e.velocity_band},
                               {"within_band", e.within_band},
                               {"diverged", e.diverged}});
      }
      fig6[plant] = summary;
    }
    metrics["fig6"] = fig6;
  }

  if (wants("fig7")) {
    json fig7 = json::array();
    for (double v : cfg.push_speeds) {
      Scenario base = exact_scenario(default_sagittal_gait());
      base.command = VelocityProfile::ramped(v, base.params.step_period());
      base.n_steps = 70;
      if (cfg.push_accels.empty()) throw ParseError("push_accels must not be empty");
      std::vector<ForceEvent> pushes;
      for (size_t i = 0; i < cfg.push_times.size(); ++i)
        pushes.push_back({cfg.push_times[i], cfg.push_duration,
                          cfg.push_accels[i % cfg.push_accels.size()]});
      const PushResult result = push_experiment(base, pushes);
      emit("fig7_v" + filename_tag(v) + "_steps.csv", trace_steps_csv(result.trace));
      json rec = json::array();
      for (const auto& r : result.recoveries)
        rec.push_back(json{{"t_push", r.push.t_start},
                           {"accel", r.push.accel},
                           {"push_step", r.push_step},
                           {"recovery_steps", r.recovery_steps},
                           {"recovered", r.recovered}});
      fig7.push_back(json{{"v_cmd", v},
                          {"all_recovered", result.all_recovered},
                          {"recoveries", rec}});
    }
    metrics["fig7"] = fig7;
  }

  if (wants("fig8")) {
    Scenario base = exact_scenario(default_sagittal_gait());
    const auto entries = max_speed_search(
        base,
        {WalkingMode::kHeelToToe, WalkingMode::kFlatFooted, WalkingMode::kToeToHeel},
        cfg.u_limit);
    json fig8 = json::array();
    std::string csv = "mode,v_cmd_max,ground_speed\n";
    for (const auto& e : entries) {
      fig8.push_back(json{{"mode", to_string(e.mode)},
                          {"v_cmd_max", e.v_cmd_max},
                          {"ground_speed", e.ground_speed},
                          {"found", e.found}});
      csv += std::string(to_string(e.mode)) + "," + format_double(e.v_cmd_max) +
             "," + format_double(e.ground_speed) + "\n";
    }
    emit("fig8_max_speed.csv", csv);
    metrics["fig8"] = fig8;
  }

  metrics["files"] = written;
  const std::string out = metrics.dump(2) + "\n";
  atomic_write_file(path_join(out_dir, "figures_metrics.json"), out);
  return out;
}

}  // namespace mlip
