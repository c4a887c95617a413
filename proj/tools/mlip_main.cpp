// Command-line front end for the MLIP walking toolkit. Talks to the core
// exclusively through the C API in mlip/mlip.h.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlip/mlip.h"

namespace {

using nlohmann::json;

enum class LogLevel { kQuiet, kInfo, kDebug };

LogLevel g_log = LogLevel::kInfo;

[[noreturn]] void die(int exit_code, const std::string& status,
                      const std::string& message) {
  const json err{{"error", {{"status", status}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
  std::exit(exit_code);
}

int exit_code_for(mlip_status status) {
  switch (status) {
    case MLIP_OK: return 0;
    case MLIP_ERR_INVALID_ARGUMENT:
    case MLIP_ERR_PARSE: return 1;
    default: return 2;
  }
}

void check(mlip_status status) {
  if (status != MLIP_OK)
    die(exit_code_for(status), mlip_status_name(status), mlip_last_error());
}

std::string take_string(char* text) {
  std::string out = text ? text : "";
  mlip_string_free(text);
  return out;
}

std::string read_file_or_die(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(1, "parse error", "cannot open input file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes through a temp file so partially written artifacts never land
// under their final name.
void write_file_or_die(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) die(2, "io failure", "cannot open " + tmp);
    out << content;
    if (!out) die(2, "io failure", "write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    die(2, "io failure", "cannot move " + tmp + " into place");
}

json parse_override_value(const std::string& text) {
  char* end = nullptr;
  const double number = std::strtod(text.c_str(), &end);
  if (end && *end == '\0' && end != text.c_str()) return number;
  if (text == "true") return true;
  if (text == "false") return false;
  return text;
}

// Applies key=value with a dotted path, e.g. params.com_height=0.75.
void apply_override(json& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    die(1, "parse error", "--set expects key=value, got '" + spec + "'");
  const std::string path = spec.substr(0, eq);
  const json value = parse_override_value(spec.substr(eq + 1));

  json* node = &doc;
  std::istringstream keys(path);
  std::string key, next;
  if (!std::getline(keys, key, '.'))
    die(1, "parse error", "--set has an empty key");
  while (std::getline(keys, next, '.')) {
    if (!node->is_object()) die(1, "parse error", "--set path crosses a non-object");
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    key = next;
  }
  if (!node->is_object()) die(1, "parse error", "--set path crosses a non-object");
  (*node)[key] = value;
}

struct CommonOptions {
  std::string input;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions* opts, bool input_required) {
  auto* in = cmd->add_option("--input,-i", opts->input, "input JSON document");
  if (input_required) in->required();
  cmd->add_option("--out,-o", opts->out_dir, "output directory for artifacts");
  cmd->add_option("--set", opts->overrides,
                  "override a config value, key=value with dotted paths");
  cmd->add_option("--seed", opts->seed, "override the scenario seed");
  cmd->add_flag("--quiet", opts->quiet, "suppress stdout reporting");
}

// Loads the input document (or a default), applies overrides, returns text.
std::string prepare_config(const CommonOptions& opts, const json& fallback) {
  json doc = fallback;
  if (!opts.input.empty()) {
    doc = json::parse(read_file_or_die(opts.input), nullptr, false);
    if (doc.is_discarded())
      die(1, "parse error", "malformed JSON in " + opts.input);
  }
  for (const auto& spec : opts.overrides) apply_override(doc, spec);
  if (opts.seed) {
    if (doc.contains("scenario")) doc["scenario"]["seed"] = *opts.seed;
    else doc["seed"] = *opts.seed;
  }
  return doc.dump();
}

void report(const CommonOptions& opts, const std::string& text) {
  if (!opts.quiet && g_log != LogLevel::kQuiet) std::cout << text;
}

mlip_params* params_from_options(const CommonOptions& opts) {
  mlip_params* params = nullptr;
  if (opts.input.empty() && opts.overrides.empty()) {
    check(mlip_params_default(&params));
    return params;
  }
  json doc = json::object();
  if (!opts.input.empty()) {
    doc = json::parse(read_file_or_die(opts.input), nullptr, false);
    if (doc.is_discarded()) die(1, "parse error", "malformed JSON in " + opts.input);
  } else {
    char* text = nullptr;
    check(mlip_params_default(&params));
    check(mlip_params_to_json(params, &text));
    mlip_params_free(params);
    params = nullptr;
    doc = json::parse(take_string(text));
  }
  for (const auto& spec : opts.overrides) apply_override(doc, spec);
  check(mlip_params_from_json(doc.dump().c_str(), &params));
  return params;
}

int cmd_matrices(const CommonOptions& opts) {
  mlip_params* params = params_from_options(opts);
  mlip_s2s* ua = nullptr;
  mlip_s2s* fa = nullptr;
  check(mlip_s2s_compose(params, 0, &ua));
  check(mlip_s2s_compose(params, 1, &fa));
  char* ua_json = nullptr;
  char* fa_json = nullptr;
  check(mlip_s2s_to_json(ua, &ua_json));
  check(mlip_s2s_to_json(fa, &fa_json));
  const std::string ua_text = take_string(ua_json);
  const std::string fa_text = take_string(fa_json);
  if (!opts.out_dir.empty()) {
    write_file_or_die(opts.out_dir + "/s2s_ua_end.json", ua_text);
    write_file_or_die(opts.out_dir + "/s2s_fa_end.json", fa_text);
  }
  report(opts, ua_text);
  int ok = 0;
  check(mlip_s2s_structure_ok(ua, &ok));
  mlip_s2s_free(ua);
  mlip_s2s_free(fa);
  mlip_params_free(params);
  if (!ok) die(2, "numerical failure", "structure validation failed");
  return 0;
}

int cmd_orbit(const CommonOptions& opts, double v, const std::string& mode,
              bool p2, double width) {
  mlip_params* params = params_from_options(opts);
  if (!mode.empty()) check(mlip_params_set_mode(params, mode.c_str()));
  mlip_s2s* s2s = nullptr;
  check(mlip_s2s_compose(params, 0, &s2s));
  mlip_orbit* orbit = nullptr;
  if (p2) {
    // Nominal width picks the left step size: u_left = width + v * T.
    char* ptext = nullptr;
    check(mlip_params_to_json(params, &ptext));
    const json pj = json::parse(take_string(ptext));
    const double T = pj["t_fa"].get<double>() + pj["t_ua"].get<double>() +
                     pj["t_oa"].get<double>();
    check(mlip_orbit_p2(s2s, v, width + v * T, &orbit));
  } else {
    check(mlip_orbit_p1(s2s, v, &orbit));
  }
  char* orbit_json = nullptr;
  char* phase_csv = nullptr;
  char* refs_csv = nullptr;
  check(mlip_orbit_to_json(orbit, &orbit_json));
  check(mlip_orbit_phase_csv(orbit, &phase_csv));
  check(mlip_reference_csv(params, v, &refs_csv));
  const std::string orbit_text = take_string(orbit_json);
  if (!opts.out_dir.empty()) {
    write_file_or_die(opts.out_dir + "/orbit.json", orbit_text);
    write_file_or_die(opts.out_dir + "/orbit_phase.csv", take_string(phase_csv));
    write_file_or_die(opts.out_dir + "/orbit_refs.csv", take_string(refs_csv));
  } else {
    mlip_string_free(phase_csv);
    mlip_string_free(refs_csv);
  }
  report(opts, orbit_text);
  mlip_orbit_free(orbit);
  mlip_s2s_free(s2s);
  mlip_params_free(params);
  return 0;
}

int cmd_gains(const CommonOptions& opts, const std::string& method, double r,
              const std::vector<double>& q, const std::vector<double>& w_max) {
  mlip_params* params = params_from_options(opts);
  mlip_s2s* s2s = nullptr;
  check(mlip_s2s_compose(params, 0, &s2s));
  mlip_gains* gains = nullptr;
  const double* q_ptr = nullptr;
  double q_buf[4];
  if (!q.empty()) {
    if (q.size() != 4) die(1, "parse error", "--q needs 4 row-major values");
    for (int i = 0; i < 4; ++i) q_buf[i] = q[i];
    q_ptr = q_buf;
  }
  check(mlip_gains_synthesize(s2s, method.c_str(), q_ptr, r, &gains));
  // The export always carries an invariant box; default to a nominal
  // residual bound when none is given.
  double w_buf[2] = {0.01, 0.02};
  if (!w_max.empty()) {
    if (w_max.size() != 2) die(1, "parse error", "--w-max needs 2 values");
    w_buf[0] = w_max[0];
    w_buf[1] = w_max[1];
  }
  const double* w_ptr = w_buf;
  char* text = nullptr;
  check(mlip_gains_to_json(gains, s2s, w_ptr, &text));
  const std::string gains_text = take_string(text);
  if (!opts.out_dir.empty())
    write_file_or_die(opts.out_dir + "/gains.json", gains_text);
  report(opts, gains_text);
  mlip_gains_free(gains);
  mlip_s2s_free(s2s);
  mlip_params_free(params);
  return 0;
}

int cmd_run(const std::string& kind, const CommonOptions& opts,
            const json& fallback) {
  const std::string config = prepare_config(opts, fallback);
  const std::string out_dir = opts.out_dir.empty() ? "." : opts.out_dir;
  if (g_log == LogLevel::kDebug)
    std::cerr << "mlip " << kind << " config: " << config << "\n";
  int exit_code = 0;
  char* metrics = nullptr;
  const mlip_status status =
      mlip_run(kind.c_str(), config.c_str(), out_dir.c_str(), &exit_code, &metrics);
  if (status != MLIP_OK)
    die(exit_code_for(status), mlip_status_name(status), mlip_last_error());
  report(opts, take_string(metrics));
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* level = std::getenv("MLIP_LOG")) {
    const std::string l = level;
    if (l == "quiet") g_log = LogLevel::kQuiet;
    else if (l == "debug") g_log = LogLevel::kDebug;
  }

  CLI::App app{"MLIP multi-domain walking toolkit"};
  app.require_subcommand(1);

  CommonOptions matrices_opts;
  auto* matrices = app.add_subcommand(
      "matrices", "compose the step-to-step matrices and validate structure");
  add_common(matrices, &matrices_opts, false);

  CommonOptions orbit_opts;
  double orbit_v = 0.0;
  std::string orbit_mode;
  bool orbit_p2 = false;
  double orbit_width = 0.0;
  auto* orbit = app.add_subcommand("orbit", "plan a periodic orbit");
  add_common(orbit, &orbit_opts, false);
  orbit->add_option("--v", orbit_v, "desired velocity [m/s]");
  orbit->add_option("--mode", orbit_mode,
                    "walking mode: heel-to-toe | toe-to-heel | flat-footed");
  orbit->add_flag("--p2", orbit_p2, "plan a period-2 orbit");
  orbit->add_option("--width", orbit_width, "nominal step width for --p2 [m]");

  CommonOptions gains_opts;
  std::string gains_method = "lqr";
  double gains_r = 1.0;
  std::vector<double> gains_q;
  std::vector<double> gains_w;
  auto* gains = app.add_subcommand("gains", "synthesize step-size feedback");
  add_common(gains, &gains_opts, false);
  gains->add_option("--method", gains_method, "lqr | deadbeat");
  gains->add_option("--r", gains_r, "LQR input weight");
  gains->add_option("--q", gains_q, "LQR state weight, 4 row-major values");
  gains->add_option("--w-max", gains_w,
                    "disturbance bound (2 values) for the invariant box");

  CommonOptions sim_opts, sweep_opts, push_opts, maxspeed_opts, figure_opts;
  auto* simulate = app.add_subcommand("simulate", "run one scenario");
  add_common(simulate, &sim_opts, true);
  auto* sweep = app.add_subcommand("sweep", "velocity sweep over a scenario");
  add_common(sweep, &sweep_opts, true);
  auto* push = app.add_subcommand("push", "push-recovery experiment");
  add_common(push, &push_opts, true);
  auto* maxspeed =
      app.add_subcommand("maxspeed", "per-mode maximum stable speed search");
  add_common(maxspeed, &maxspeed_opts, true);
  auto* figure =
      app.add_subcommand("figure", "regenerate the standard figure CSV bundles");
  add_common(figure, &figure_opts, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (matrices->parsed()) return cmd_matrices(matrices_opts);
    if (orbit->parsed())
      return cmd_orbit(orbit_opts, orbit_v, orbit_mode, orbit_p2, orbit_width);
    if (gains->parsed())
      return cmd_gains(gains_opts, gains_method, gains_r, gains_q, gains_w);
    if (simulate->parsed()) return cmd_run("simulate", sim_opts, json::object());
    if (sweep->parsed()) return cmd_run("sweep", sweep_opts, json::object());
    if (push->parsed()) return cmd_run("push", push_opts, json::object());
    if (maxspeed->parsed()) return cmd_run("maxspeed", maxspeed_opts, json::object());
    if (figure->parsed()) return cmd_run("figure", figure_opts, json::object());
  } catch (const std::exception& e) {
    die(1, "internal failure", e.what());
  }
  return 0;
}
