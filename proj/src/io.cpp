#include "mlip/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>

#include <json.hpp>

namespace mlip {

using nlohmann::json;

namespace {

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError(std::string("malformed JSON in ") + what);
  return j;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* context) {
  if (!j.is_object())
    throw ParseError(std::string(context) + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) known |= item.key() == key;
    if (!known)
      throw ParseError("unknown key '" + item.key() + "' in " + context);
  }
}

double number(const json& j, const char* key, const char* context) {
  if (!j.at(key).is_number())
    throw ParseError(std::string(key) + " in " + context + " must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, const char* context,
                 double fallback) {
  return j.contains(key) ? number(j, key, context) : fallback;
}

WalkingMode mode_from_name(const std::string& name) {
  if (name == "heel-to-toe") return WalkingMode::kHeelToToe;
  if (name == "toe-to-heel") return WalkingMode::kToeToHeel;
  if (name == "flat-footed") return WalkingMode::kFlatFooted;
  throw ParseError("unknown walking mode '" + name + "'");
}

json params_json(const GaitParams& p) {
  return json{{"com_height", p.com_height}, {"foot_length", p.foot_length},
              {"gravity", p.gravity},       {"t_fa", p.t_fa},
              {"t_ua", p.t_ua},             {"t_oa", p.t_oa},
              {"mode", to_string(p.mode)}};
}

GaitParams params_from(const json& j) {
  check_keys(j, {"com_height", "foot_length", "gravity", "t_fa", "t_ua", "t_oa", "mode"},
             "params");
  GaitParams p;
  p.com_height = number_or(j, "com_height", "params", p.com_height);
  p.foot_length = number_or(j, "foot_length", "params", p.foot_length);
  p.gravity = number_or(j, "gravity", "params", p.gravity);
  p.t_fa = number_or(j, "t_fa", "params", p.t_fa);
  p.t_ua = number_or(j, "t_ua", "params", p.t_ua);
  p.t_oa = number_or(j, "t_oa", "params", p.t_oa);
  if (j.contains("mode")) p.mode = mode_from_name(j.at("mode").get<std::string>());
  p.validate();
  return p;
}

json vec_json(const Vector2d& v) { return json::array({v[0], v[1]}); }
json vec_json(const Vector3d& v) { return json::array({v[0], v[1], v[2]}); }

json mat_json(const Matrix2d& m) {
  return json::array({m(0, 0), m(0, 1), m(1, 0), m(1, 1)});
}
json mat_json(const Matrix3d& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
  return a;
}

}  // namespace

std::string params_to_json(const GaitParams& params) {
  return params_json(params).dump(2) + "\n";
}

GaitParams params_from_json(const std::string& text) {
  return params_from(parse(text, "params"));
}

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["params"] = params_json(sc.params);
  json plant{{"kind", sc.plant.kind == PlantKind::kExact ? "exact" : "mismatched"},
             {"com_height", sc.plant.com_height}};
  if (sc.plant.zmp_rate_limit) plant["zmp_rate_limit"] = *sc.plant.zmp_rate_limit;
  if (sc.plant.zmp_lag != 0.0) plant["zmp_lag"] = sc.plant.zmp_lag;
  j["plant"] = plant;
  json gains{{"method", to_string(sc.gains.method)}};
  if (sc.gains.method == GainMethod::kLQR) {
    gains["q"] = mat_json(sc.gains.Q);
    gains["r"] = sc.gains.R;
  }
  j["gains"] = gains;
  json command = json::array();
  for (const auto& seg : sc.command.segments)
    command.push_back(json{{"t", seg.t_start}, {"v", seg.v}});
  j["command"] = command;
  json disturbances = json::array();
  for (const auto& ev : sc.disturbances)
    disturbances.push_back(
        json{{"t", ev.t_start}, {"duration", ev.duration}, {"accel", ev.accel}});
  j["disturbances"] = disturbances;
  j["n_steps"] = sc.n_steps;
  if (sc.step_size_limit) j["step_size_limit"] = *sc.step_size_limit;
  j["seed"] = sc.seed;
  j["initial_error"] = vec_json(sc.initial_error);
  j["dt"] = sc.dt;
  json orbit{{"kind", sc.orbit_kind == OrbitKind::kP1 ? "p1" : "p2"}};
  if (sc.orbit_kind == OrbitKind::kP2) orbit["width"] = sc.p2_width;
  j["orbit"] = orbit;
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  const json j = parse(text, "scenario");
  check_keys(j,
             {"params", "plant", "gains", "command", "disturbances", "n_steps",
              "step_size_limit", "seed", "initial_error", "dt", "orbit"},
             "scenario");
  Scenario sc;
  if (j.contains("params")) sc.params = params_from(j.at("params"));

  if (j.contains("plant")) {
    const json& p = j.at("plant");
    check_keys(p, {"kind", "com_height", "zmp_rate_limit", "zmp_lag"}, "plant");
    const std::string kind = p.contains("kind") ? p.at("kind").get<std::string>() : "exact";
    if (kind == "exact") sc.plant.kind = PlantKind::kExact;
    else if (kind == "mismatched") sc.plant.kind = PlantKind::kMismatched;
    else throw ParseError("unknown plant kind '" + kind + "'");
    sc.plant.com_height = number_or(p, "com_height", "plant", sc.params.com_height);
    if (p.contains("zmp_rate_limit"))
      sc.plant.zmp_rate_limit = number(p, "zmp_rate_limit", "plant");
    sc.plant.zmp_lag = number_or(p, "zmp_lag", "plant", 0.0);
  } else {
    sc.plant.com_height = sc.params.com_height;
  }

  {
    json g = j.contains("gains") ? j.at("gains") : json{{"method", "lqr"}};
    check_keys(g, {"method", "q", "r"}, "gains");
    const std::string method =
        g.contains("method") ? g.at("method").get<std::string>() : "lqr";
    const S2SDynamics dyn = compose_s2s(sc.params);
    if (method == "lqr") {
      Matrix2d q = Matrix2d::Identity();
      if (g.contains("q")) {
        const json& qa = g.at("q");
        if (!qa.is_array() || qa.size() != 4)
          throw ParseError("gains q must be a 4-element row-major array");
        q << qa[0].get<double>(), qa[1].get<double>(), qa[2].get<double>(),
            qa[3].get<double>();
      }
      sc.gains = dlqr(dyn.A, dyn.B, q, number_or(g, "r", "gains", 1.0));
    } else if (method == "deadbeat") {
      if (g.contains("q") || g.contains("r"))
        throw ParseError("deadbeat gains take no weights");
      sc.gains = deadbeat_gain(dyn.A, dyn.B);
    } else {
      throw ParseError("unknown gain method '" + method + "'");
    }
  }

  if (j.contains("command")) {
    sc.command.segments.clear();
    for (const auto& seg : j.at("command")) {
      check_keys(seg, {"t", "v"}, "command segment");
      sc.command.segments.push_back(
          {number(seg, "t", "command"), number(seg, "v", "command")});
    }
  }
  if (j.contains("disturbances")) {
    for (const auto& ev : j.at("disturbances")) {
      check_keys(ev, {"t", "duration", "accel"}, "disturbance");
      sc.disturbances.push_back({number(ev, "t", "disturbance"),
                                 number(ev, "duration", "disturbance"),
                                 number(ev, "accel", "disturbance")});
    }
  }
  if (j.contains("n_steps")) sc.n_steps = j.at("n_steps").get<int>();
  if (j.contains("step_size_limit"))
    sc.step_size_limit = number(j, "step_size_limit", "scenario");
  if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("initial_error")) {
    const json& e = j.at("initial_error");
    if (!e.is_array() || e.size() != 2)
      throw ParseError("initial_error must be a 2-element array");
    sc.initial_error << e[0].get<double>(), e[1].get<double>();
  }
  if (j.contains("dt")) sc.dt = number(j, "dt", "scenario");
  if (j.contains("orbit")) {
    const json& o = j.at("orbit");
    check_keys(o, {"kind", "width"}, "orbit");
    const std::string kind = o.contains("kind") ? o.at("kind").get<std::string>() : "p1";
    if (kind == "p1") {
      sc.orbit_kind = OrbitKind::kP1;
      if (o.contains("width")) throw ParseError("width applies to p2 orbits only");
    } else if (kind == "p2") {
      sc.orbit_kind = OrbitKind::kP2;
      sc.p2_width = number_or(o, "width", "orbit", 0.0);
    } else {
      throw ParseError("unknown orbit kind '" + kind + "'");
    }
  }
  sc.validate();
  return sc;
}

std::string orbit_to_json(const OrbitSpec& orbit) {
  json j{{"kind", orbit.kind == OrbitKind::kP1 ? "p1" : "p2"},
         {"v_d", orbit.v_d},
         {"step_period", orbit.step_period}};
  if (orbit.kind == OrbitKind::kP1) {
    j["u_star"] = orbit.u_star[0];
    j["x_star"] = vec_json(orbit.x_star[0].vec());
  } else {
    j["u_star"] = json::array({orbit.u_star[0], orbit.u_star[1]});
    j["x_star"] = json::array(
        {vec_json(orbit.x_star[0].vec()), vec_json(orbit.x_star[1].vec())});
  }
  return j.dump(2) + "\n";
}

namespace {

json gains_json(const GainSpec& gains) {
  json j{{"method", to_string(gains.method)},
         {"k", json::array({gains.K[0], gains.K[1]})},
         {"rho_cl", gains.rho_cl}};
  if (gains.method == GainMethod::kLQR) {
    j["q"] = mat_json(gains.Q);
    j["r"] = gains.R;
  }
  return j;
}

}  // namespace

std::string gains_to_json(const GainSpec& gains) {
  return gains_json(gains).dump(2) + "\n";
}

std::string gains_to_json(const GainSpec& gains, const DisturbanceBound& w,
                          const InvariantBox& box) {
  json j = gains_json(gains);
  j["w_max"] = vec_json(w.w_max);
  j["e_max"] = vec_json(box.e_max);
  j["corner_invariant"] = box.corner_invariant;
  return j.dump(2) + "\n";
}

std::string s2s_to_json(const S2SDynamics& dyn, const StructureReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back(json{{"name", c.name}, {"residual", c.residual}, {"pass", c.pass}});
  json j{{"section", to_string(dyn.section)},
         {"params", params_json(dyn.params)},
         {"a_full", mat_json(dyn.A_full)},
         {"b_full", vec_json(dyn.B_full)},
         {"c_full", vec_json(dyn.C_full)},
         {"a", mat_json(dyn.A)},
         {"b", vec_json(dyn.B)},
         {"c", vec_json(dyn.C)},
         {"structure", json{{"all_pass", report.all_pass}, {"checks", checks}}}};
  return j.dump(2) + "\n";
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string filename_tag(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  std::string out;
  for (char c : s) out += c == '.' ? 'p' : (c == '-' ? 'm' : c);
  return out;
}

std::string trace_samples_csv(const StepTrace& trace) {
  std::string out = "t,domain,p,L,p_zmp,u_cmd\n";
  for (const auto& s : trace.samples) {
    out += format_double(s.t);
    out += ',';
    out += to_string(s.domain);
    for (double v : {s.com_pos, s.ang_mom, s.zmp_pos, s.u_cmd}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string trace_steps_csv(const StepTrace& trace) {
  std::string out = "k,p_R,L_R,u_R,w_p,w_L\n";
  for (const auto& s : trace.steps) {
    out += std::to_string(s.k);
    for (double v : {s.state.com_pos, s.state.ang_mom, s.u, s.w[0], s.w[1]}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string phase_portrait_csv(const std::vector<OrbitSample>& samples) {
  std::string out = "t,domain,p,L,p_zmp\n";
  for (const auto& s : samples) {
    out += format_double(s.t);
    out += ',';
    out += to_string(s.domain);
    for (double v : {s.state.com_pos, s.state.ang_mom, s.state.zmp_pos}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string reference_trace_csv(const std::vector<ReferenceSample>& samples) {
  std::string out = "t,x_com_ref,v_com_ref,p_zmp_ref,theta_st_ref,theta_sw_ref\n";
  for (const auto& s : samples) {
    out += format_double(s.t);
    for (double v : {s.com_pos_ref, s.com_vel_ref, s.zmp_ref, s.theta_stance_ref,
                     s.theta_swing_ref}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace mlip
