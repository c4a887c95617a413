#include "mlip/mlip.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <json.hpp>

#include "mlip/io.hpp"
#include "mlip/runner.hpp"
#include "mlip/trajectory.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mlip_status fail(mlip_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Maps core exceptions onto the C status codes.
template <typename Fn>
mlip_status guarded(Fn&& fn) {
  try {
    fn();
    return MLIP_OK;
  } catch (const mlip::ParseError& e) {
    return fail(MLIP_ERR_PARSE, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(MLIP_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(MLIP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const mlip::SingularSystemError& e) {
    return fail(MLIP_ERR_NUMERICAL, e.what());
  } catch (const mlip::GainSynthesisError& e) {
    return fail(MLIP_ERR_NUMERICAL, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(MLIP_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MLIP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MLIP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MLIP_ERR_INTERNAL, "unknown failure");
  }
}

mlip_status require(bool ok, const char* message) {
  return ok ? MLIP_OK : fail(MLIP_ERR_INVALID_ARGUMENT, message);
}

}  // namespace

struct mlip_params {
  mlip::GaitParams value;
};
struct mlip_s2s {
  mlip::S2SDynamics value;
};
struct mlip_orbit {
  mlip::OrbitSpec value;
  mlip::S2SDynamics dyn;  // the system the orbit was planned against
};
struct mlip_gains {
  mlip::GainSpec value;
};
struct mlip_scenario {
  mlip::Scenario value;
};
struct mlip_trace {
  mlip::StepTrace value;
  mlip::Scenario scenario;
};

extern "C" {

const char* mlip_status_name(mlip_status status) {
  switch (status) {
    case MLIP_OK: return "ok";
    case MLIP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MLIP_ERR_PARSE: return "parse error";
    case MLIP_ERR_NUMERICAL: return "numerical failure";
    case MLIP_ERR_IO: return "io failure";
    case MLIP_ERR_INTERNAL: return "internal failure";
  }
  return "?";
}

const char* mlip_last_error(void) { return g_last_error.c_str(); }

void mlip_string_free(char* text) { delete[] text; }

mlip_status mlip_params_default(mlip_params** out) {
  if (auto s = require(out, "null output"); s != MLIP_OK) return s;
  return guarded([&] { *out = new mlip_params{mlip::default_sagittal_gait()}; });
}

mlip_status mlip_params_default_lateral(mlip_params** out) {
  if (auto s = require(out, "null output"); s != MLIP_OK) return s;
  return guarded([&] { *out = new mlip_params{mlip::default_lateral_gait()}; });
}

mlip_status mlip_params_from_json(const char* json, mlip_params** out) {
  if (auto s = require(json && out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] { *out = new mlip_params{mlip::params_from_json(json)}; });
}

mlip_status mlip_params_to_json(const mlip_params* params, char** json_out) {
  if (auto s = require(params && json_out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] { *json_out = dup_string(mlip::params_to_json(params->value)); });
}

mlip_status mlip_params_set(mlip_params* params, const char* key, double value) {
  if (auto s = require(params && key, "null argument"); s != MLIP_OK) return s;
  return guarded([&] {
    const std::string k = key;
    mlip::GaitParams next = params->value;
    if (k == "com_height") next.com_height = value;
    else if (k == "foot_length") next.foot_length = value;
    else if (k == "gravity") next.gravity = value;
    else if (k == "t_fa") next.t_fa = value;
    else if (k == "t_ua") next.t_ua = value;
    else if (k == "t_oa") next.t_oa = value;
    else throw std::invalid_argument("unknown parameter '" + k + "'");
    next.validate();
    params->value = next;
  });
}

mlip_status mlip_params_set_mode(mlip_params* params, const char* mode) {
  if (auto s = require(params && mode, "null argument"); s != MLIP_OK) return s;
  return guarded([&] {
    const std::string m = mode;
    mlip::GaitParams next = params->value;
    if (m == "heel-to-toe") next.mode = mlip::WalkingMode::kHeelToToe;
    else if (m == "toe-to-heel") next.mode = mlip::WalkingMode::kToeToHeel;
    else if (m == "flat-footed") next.mode = mlip::WalkingMode::kFlatFooted;
    else throw std::invalid_argument("unknown walking mode '" + m + "'");
    next.validate();
    params->value = next;
  });
}

void mlip_params_free(mlip_params* params) { delete params; }

mlip_status mlip_s2s_compose(const mlip_params* params, int fa_end_section,
                             mlip_s2s** out) {
  if (auto s = require(params && out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] {
    *out = new mlip_s2s{fa_end_section
                            ? mlip::compose_s2s_at_fa_end(params->value)
                            : mlip::compose_s2s(params->value)};
  });
}

mlip_status mlip_s2s_reduced(const mlip_s2s* s2s, double a[4], double b[2],
                             double c[2]) {
  if (auto s = require(s2s && a && b && c, "null argument"); s != MLIP_OK) return s;
  const auto& d = s2s->value;
  a[0] = d.A(0, 0); a[1] = d.A(0, 1); a[2] = d.A(1, 0); a[3] = d.A(1, 1);
  b[0] = d.B[0]; b[1] = d.B[1];
  c[0] = d.C[0]; c[1] = d.C[1];
  return MLIP_OK;
}

mlip_status mlip_s2s_to_json(const mlip_s2s* s2s, char** json_out) {
  if (auto s = require(s2s && json_out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] {
    *json_out = dup_string(
        mlip::s2s_to_json(s2s->value, mlip::validate_structure(s2s->value)));
  });
}

mlip_status mlip_s2s_structure_ok(const mlip_s2s* s2s, int* ok_out) {
  if (auto s = require(s2s && ok_out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] { *ok_out = mlip::validate_structure(s2s->value).all_pass; });
}

void mlip_s2s_free(mlip_s2s* s2s) { delete s2s; }

mlip_status mlip_orbit_p1(const mlip_s2s* s2s, double v_d, mlip_orbit** out) {
  if (auto s = require(s2s && out, "null argument"); s != MLIP_OK) return s;
  return guarded(
      [&] { *out = new mlip_orbit{mlip::p1_orbit(s2s->value, v_d), s2s->value}; });
}

mlip_status mlip_orbit_p2(const mlip_s2s* s2s, double v_d, double u_left,
                          mlip_orbit** out) {
  if (auto s = require(s2s && out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] {
    *out = new mlip_orbit{mlip::p2_orbit(s2s->value, v_d, u_left), s2s->value};
  });
}

mlip_status mlip_orbit_to_json(const mlip_orbit* orbit, char** json_out) {
  if (auto s = require(orbit && json_out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] { *json_out = dup_string(mlip::orbit_to_json(orbit->value)); });
}

mlip_status mlip_orbit_phase_csv(const mlip_orbit* orbit, char** csv_out) {
  if (auto s = require(orbit && csv_out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] {
    *csv_out = dup_string(mlip::phase_portrait_csv(
        mlip::orbit_phase_portrait(orbit->dyn, orbit->value)));
  });
}

void mlip_orbit_free(mlip_orbit* orbit) { delete orbit; }

mlip_status mlip_reference_csv(const mlip_params* params, double v_d,
                               char** csv_out) {
  if (auto s = require(params && csv_out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] {
    *csv_out = dup_string(
        mlip::reference_trace_csv(mlip::reference_trace(params->value, v_d)));
  });
}

mlip_status mlip_gains_synthesize(const mlip_s2s* s2s, const char* method,
                                  const double q[4], double r, mlip_gains** out) {
  if (auto s = require(s2s && method && out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] {
    const std::string m = method;
    if (m == "lqr") {
      mlip::Matrix2d qm = mlip::Matrix2d::Identity();
      if (q) qm << q[0], q[1], q[2], q[3];
      *out = new mlip_gains{
          mlip::dlqr(s2s->value.A, s2s->value.B, qm, r > 0 ? r : 1.0)};
    } else if (m == "deadbeat") {
      *out = new mlip_gains{mlip::deadbeat_gain(s2s->value.A, s2s->value.B)};
    } else {
      throw std::invalid_argument("unknown gain method '" + m + "'");
    }
  });
}

mlip_status mlip_gains_vector(const mlip_gains* gains, double k[2], double* rho_cl) {
  if (auto s = require(gains && k, "null argument"); s != MLIP_OK) return s;
  k[0] = gains->value.K[0];
  k[1] = gains->value.K[1];
  if (rho_cl) *rho_cl = gains->value.rho_cl;
  return MLIP_OK;
}

mlip_status mlip_gains_invariant_box(const mlip_gains* gains, const mlip_s2s* s2s,
                                     const double w_max[2], double e_max[2]) {
  if (auto s = require(gains && s2s && w_max && e_max, "null argument"); s != MLIP_OK)
    return s;
  return guarded([&] {
    const mlip::Matrix2d a_cl = s2s->value.A + s2s->value.B * gains->value.K;
    const mlip::InvariantBox box =
        mlip::invariant_box(a_cl, {mlip::Vector2d(w_max[0], w_max[1])});
    e_max[0] = box.e_max[0];
    e_max[1] = box.e_max[1];
  });
}

mlip_status mlip_gains_to_json(const mlip_gains* gains, const mlip_s2s* s2s,
                               const double w_max[2], char** json_out) {
  if (auto s = require(gains && json_out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] {
    if (w_max && s2s) {
      const mlip::Matrix2d a_cl = s2s->value.A + s2s->value.B * gains->value.K;
      const mlip::DisturbanceBound w{mlip::Vector2d(w_max[0], w_max[1])};
      *json_out = dup_string(
          mlip::gains_to_json(gains->value, w, mlip::invariant_box(a_cl, w)));
    } else {
      *json_out = dup_string(mlip::gains_to_json(gains->value));
    }
  });
}

void mlip_gains_free(mlip_gains* gains) { delete gains; }

mlip_status mlip_scenario_from_json(const char* json, mlip_scenario** out) {
  if (auto s = require(json && out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] { *out = new mlip_scenario{mlip::scenario_from_json(json)}; });
}

mlip_status mlip_scenario_to_json(const mlip_scenario* scenario, char** json_out) {
  if (auto s = require(scenario && json_out, "null argument"); s != MLIP_OK) return s;
  return guarded(
      [&] { *json_out = dup_string(mlip::scenario_to_json(scenario->value)); });
}

void mlip_scenario_free(mlip_scenario* scenario) { delete scenario; }

mlip_status mlip_simulate(const mlip_scenario* scenario, mlip_trace** out) {
  if (auto s = require(scenario && out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] {
    *out = new mlip_trace{mlip::simulate(scenario->value), scenario->value};
  });
}

mlip_status mlip_trace_diverged(const mlip_trace* trace, int* out) {
  if (auto s = require(trace && out, "null argument"); s != MLIP_OK) return s;
  *out = trace->value.diverged;
  return MLIP_OK;
}

mlip_status mlip_trace_samples_csv(const mlip_trace* trace, char** csv_out) {
  if (auto s = require(trace && csv_out, "null argument"); s != MLIP_OK) return s;
  return guarded(
      [&] { *csv_out = dup_string(mlip::trace_samples_csv(trace->value)); });
}

mlip_status mlip_trace_steps_csv(const mlip_trace* trace, char** csv_out) {
  if (auto s = require(trace && csv_out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] { *csv_out = dup_string(mlip::trace_steps_csv(trace->value)); });
}

mlip_status mlip_trace_metrics_json(const mlip_trace* trace, char** json_out) {
  if (auto s = require(trace && json_out, "null argument"); s != MLIP_OK) return s;
  return guarded([&] {
    *json_out =
        dup_string(mlip::simulation_metrics_json(trace->scenario, trace->value));
  });
}

void mlip_trace_free(mlip_trace* trace) { delete trace; }

mlip_status mlip_run(const char* kind, const char* config_json, const char* out_dir,
                     int* exit_code_out, char** metrics_json_out) {
  if (auto s = require(kind && config_json && out_dir, "null argument"); s != MLIP_OK)
    return s;
  return guarded([&] {
    const std::string k = kind;
    mlip::RunOutcome outcome;
    if (k == "simulate") outcome = mlip::run_simulate(config_json, out_dir);
    else if (k == "sweep") outcome = mlip::run_sweep(config_json, out_dir);
    else if (k == "push") outcome = mlip::run_push(config_json, out_dir);
    else if (k == "maxspeed") outcome = mlip::run_maxspeed(config_json, out_dir);
    else if (k == "figure") outcome = mlip::run_figures(config_json, out_dir);
    else throw std::invalid_argument("unknown run kind '" + k + "'");
    if (exit_code_out) *exit_code_out = outcome.exit_code;
    if (metrics_json_out) *metrics_json_out = dup_string(outcome.metrics_json);
  });
}

}  // extern "C"
