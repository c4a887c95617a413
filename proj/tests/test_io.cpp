#include <unistd.h>
#include <doctest.h>

#include <filesystem>
#include <string>

#include "mlip/io.hpp"

using namespace mlip;

namespace {

std::string temp_dir() {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("mlip_io_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir.string();
}

const char* kScenarioText = R"({
  "params": {"com_height": 0.8, "foot_length": 0.16, "t_fa": 0.2, "t_ua": 0.2, "t_oa": 0.1, "mode": "heel-to-toe"},
  "plant": {"kind": "mismatched", "com_height": 0.78},
  "gains": {"method": "lqr", "q": [1, 0, 0, 1], "r": 1.0},
  "command": [{"t": 0, "v": 0}, {"t": 5, "v": 1.0}],
  "disturbances": [{"t": 8, "duration": 0.5, "accel": 1.5}],
  "n_steps": 30,
  "step_size_limit": 0.9,
  "initial_error": [0.02, -0.04],
  "dt": 0.001
})";

}  // namespace

TEST_CASE("gait parameters survive a JSON round trip") {
  GaitParams p = default_lateral_gait(WalkingMode::kFlatFooted);
  p.com_height = 0.93;
  const GaitParams back = params_from_json(params_to_json(p));
  CHECK(back.com_height == p.com_height);
  CHECK(back.foot_length == p.foot_length);
  CHECK(back.gravity == p.gravity);
  CHECK(back.t_fa == p.t_fa);
  CHECK(back.t_ua == p.t_ua);
  CHECK(back.t_oa == p.t_oa);
  CHECK(back.mode == p.mode);
  // And the serialized form is reproducible.
  CHECK(params_to_json(back) == params_to_json(p));
}

TEST_CASE("unknown keys are rejected by name") {
  CHECK_THROWS_WITH_AS(params_from_json(R"({"com_hieght": 0.8})"),
                       doctest::Contains("com_hieght"), ParseError);
  CHECK_THROWS_WITH_AS(
      scenario_from_json(R"({"params": {}, "plants": {}})"),
      doctest::Contains("plants"), ParseError);
  CHECK_THROWS_WITH_AS(
      scenario_from_json(R"({"plant": {"kind": "exact", "lag": 1}})"),
      doctest::Contains("lag"), ParseError);
}

TEST_CASE("malformed JSON is a parse error") {
  CHECK_THROWS_AS(params_from_json("{"), ParseError);
  CHECK_THROWS_AS(scenario_from_json("not json"), ParseError);
}

TEST_CASE("scenario documents round trip through parse and export") {
  const Scenario sc = scenario_from_json(kScenarioText);
  CHECK(sc.plant.kind == PlantKind::kMismatched);
  CHECK(sc.plant.com_height == 0.78);
  CHECK(sc.n_steps == 30);
  CHECK(sc.command.segments.size() == 2);
  CHECK(sc.gains.method == GainMethod::kLQR);
  CHECK(sc.gains.rho_cl < 1.0);

  const std::string exported = scenario_to_json(sc);
  const Scenario back = scenario_from_json(exported);
  CHECK(scenario_to_json(back) == exported);
  CHECK(back.gains.K == sc.gains.K);
  CHECK(back.initial_error == sc.initial_error);
  CHECK(back.step_size_limit == sc.step_size_limit);
}

TEST_CASE("deadbeat gains parse without weights and reject them") {
  const Scenario sc = scenario_from_json(
      R"({"gains": {"method": "deadbeat"}, "n_steps": 2})");
  CHECK(sc.gains.method == GainMethod::kDeadbeat);
  CHECK_THROWS_AS(
      scenario_from_json(R"({"gains": {"method": "deadbeat", "r": 2}})"),
      ParseError);
}

TEST_CASE("csv formats carry the documented headers") {
  StepTrace trace;
  trace.samples.push_back({0.0, Domain::kOA, 0.1, 0.2, 0.3, 0.4});
  trace.steps.push_back({0, ReducedState{0.1, 0.2}, 0.4, Vector2d(0, 0), 0.0});
  CHECK(trace_samples_csv(trace).rfind("t,domain,p,L,p_zmp,u_cmd\n", 0) == 0);
  CHECK(trace_steps_csv(trace).rfind("k,p_R,L_R,u_R,w_p,w_L\n", 0) == 0);
  CHECK(phase_portrait_csv({}).rfind("t,domain,p,L,p_zmp\n", 0) == 0);
  CHECK(reference_trace_csv({}) ==
        "t,x_com_ref,v_com_ref,p_zmp_ref,theta_st_ref,theta_sw_ref\n");
  // 17 significant digits, LF endings, '.' decimal.
  const std::string csv = trace_samples_csv(trace);
  CHECK(csv.find("0.10000000000000001") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("atomic writes land complete and leave no temp file") {
  const std::string dir = temp_dir();
  const std::string path = dir + "/nested/out.csv";
  atomic_write_file(path, "a,b\n1,2\n");
  CHECK(read_file(path) == "a,b\n1,2\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  // Overwrite goes through the same path.
  atomic_write_file(path, "c\n");
  CHECK(read_file(path) == "c\n");
  std::filesystem::remove_all(dir);
}
