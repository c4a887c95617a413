// Acceptance suite: one check per release criterion, each printed as a
// single pass/fail line. Exits nonzero if anything fails.

#include <unistd.h>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "mlip/figures.hpp"
#include "mlip/io.hpp"
#include "mlip/sim.hpp"
#include "mlip/trajectory.hpp"
#include "support/oracles.hpp"

using namespace mlip;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void report(int number, const char* title, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] %2d. %s (%s, %.2f s)\n", pass ? "PASS" : "FAIL", number,
              title, detail.c_str(), seconds);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

Scenario exact_scenario(GainMethod method) {
  Scenario sc;
  sc.params = default_sagittal_gait();
  sc.plant.com_height = sc.params.com_height;
  const S2SDynamics dyn = compose_s2s(sc.params);
  sc.gains = method == GainMethod::kLQR
                 ? dlqr(dyn.A, dyn.B, Matrix2d::Identity(), 1.0)
                 : deadbeat_gain(dyn.A, dyn.B);
  return sc;
}

void criterion_1_structure() {
  Stopwatch watch;
  double worst = 0;
  auto residual = [&](const S2SDynamics& dyn) {
    worst = std::max({worst, std::abs(dyn.A_full(2, 2) - 1.0),
                      std::abs(dyn.B_full[2]), std::abs(dyn.C_full[2])});
  };
  residual(compose_s2s(default_sagittal_gait()));
  test::Rng rng(1);
  for (int i = 0; i < 100; ++i) residual(compose_s2s(test::random_valid_params(rng)));
  const double t = watch.seconds();
  report(1, "structural identities of the composed step map",
         worst <= 1e-12 && t < 1.0, "max residual " + fmt(worst), t);
}

void criterion_2_oracle() {
  Stopwatch watch;
  test::Rng rng(2);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const GaitParams p = test::random_valid_params(rng);
    const S2SDynamics dyn = compose_s2s(p);
    const Vector3d xi(rng.uniform(-0.5, 0.5), rng.uniform(-1.5, 1.5), 0.0);
    const double u = rng.uniform(-0.8, 0.8);
    const Vector3d composed = dyn.A_full * xi + dyn.B_full * u + dyn.C_full;
    worst = std::max(worst, (test::chained_cycle(p, xi, u) - composed)
                                .cwiseAbs()
                                .maxCoeff());
  }
  const double t = watch.seconds();
  report(2, "composed step equals chained flows and resets",
         worst <= 1e-10 && t < 1.0, "max deviation " + fmt(worst), t);
}

void criterion_3_matexp() {
  Stopwatch watch;
  test::Rng rng(3);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    GaitParams p = default_sagittal_gait();
    p.com_height = rng.uniform(0.5, 1.2);
    const double t = rng.uniform(0.0, 1.0);
    const Matrix3d closed = mat_exp_closed(p, t);
    const Eigen::MatrixXd series =
        mat_exp_series(continuous_dynamics_matrix(p), t);
    worst = std::max(worst, (closed - series).cwiseAbs().maxCoeff());
  }
  const double t = watch.seconds();
  report(3, "closed-form vs series matrix exponential",
         worst <= 1e-12 && t < 1.0, "max deviation " + fmt(worst), t);
}

void criterion_4_orbits() {
  Stopwatch watch;
  double worst = 0;
  const S2SDynamics sagittal = compose_s2s(default_sagittal_gait());
  for (double v : {0.0, 0.5, 1.0, 2.0, -0.75, -1.5}) {
    const OrbitSpec orbit = p1_orbit(sagittal, v);
    const ReducedState next = s2s_step(sagittal, orbit.x_star[0], orbit.u_star[0]);
    worst = std::max(worst,
                     (next.vec() - orbit.x_star[0].vec()).cwiseAbs().maxCoeff());
  }
  const S2SDynamics lateral = compose_s2s(default_lateral_gait());
  for (double w : {0.3, 0.4, 0.5}) {
    const OrbitSpec orbit = p2_orbit(lateral, 0.0, w);
    const ReducedState mid = s2s_step(lateral, orbit.x_star[0], orbit.u_star[0]);
    const ReducedState back = s2s_step(lateral, mid, orbit.u_star[1]);
    worst = std::max(worst,
                     (back.vec() - orbit.x_star[0].vec()).cwiseAbs().maxCoeff());
  }
  const double t = watch.seconds();
  report(4, "period-1 and period-2 orbit residuals", worst <= 1e-10 && t < 1.0,
         "max residual " + fmt(worst), t);
}

void criterion_5_reduction() {
  Stopwatch watch;
  GaitParams p;
  p.mode = WalkingMode::kFlatFooted;
  p.t_fa = 0.0;
  p.t_oa = 0.0;
  p.t_ua = 0.4;
  const S2SDynamics dyn = compose_s2s(p);
  const double deviation =
      (dyn.A - mat_exp_closed(p, p.t_ua).topLeftCorner<2, 2>())
          .cwiseAbs()
          .maxCoeff();
  report(5, "single-pivot reduction to the bare pendulum step",
         deviation <= 1e-12, "deviation " + fmt(deviation), watch.seconds());
}

void criterion_6_gains() {
  Stopwatch watch;
  const S2SDynamics dyn = compose_s2s(default_sagittal_gait());
  const GainSpec lqr = dlqr(dyn.A, dyn.B, Matrix2d::Identity(), 1.0);
  const double den = lqr.R + dyn.B.dot(lqr.riccati_p * dyn.B);
  const Matrix2d rhs =
      lqr.Q + dyn.A.transpose() * lqr.riccati_p * dyn.A -
      (dyn.A.transpose() * lqr.riccati_p * dyn.B) *
          (dyn.B.transpose() * lqr.riccati_p * dyn.A) / den;
  const double dare_residual = (lqr.riccati_p - rhs).cwiseAbs().maxCoeff();

  const GainSpec db = deadbeat_gain(dyn.A, dyn.B);
  const Matrix2d a_db = dyn.A + dyn.B * db.K;
  const double nilpotency = (a_db * a_db).cwiseAbs().maxCoeff();

  const bool pass =
      dare_residual <= 1e-10 && lqr.rho_cl < 1.0 && nilpotency <= 1e-9;
  report(6, "gain synthesis: Riccati residual, stability, nilpotency", pass,
         "dare " + fmt(dare_residual) + ", rho " + fmt(lqr.rho_cl) +
             ", (A+BK)^2 " + fmt(nilpotency),
         watch.seconds());
}

void criterion_7_convergence() {
  Stopwatch watch;
  test::Rng rng(7);
  const Vector2d e0(rng.uniform(0.4, 0.9), -rng.uniform(0.4, 0.9));

  Scenario db = exact_scenario(GainMethod::kDeadbeat);
  db.command = VelocityProfile::constant(1.0);
  db.initial_error = e0;
  db.n_steps = 6;
  const StepTrace db_trace = simulate(db);
  const OrbitSpec orbit = p1_orbit(compose_s2s(db.params), 1.0);
  double db_tail = 0;
  for (const auto& s : db_trace.steps)
    if (s.k >= 3)
      db_tail = std::max(
          db_tail, (s.state.vec() - orbit.x_star[0].vec()).cwiseAbs().maxCoeff());

  Scenario lqr = exact_scenario(GainMethod::kLQR);
  lqr.command = VelocityProfile::constant(1.0);
  lqr.initial_error = e0;
  lqr.n_steps = 12;
  const StepTrace lqr_trace = simulate(lqr);
  const double e2 =
      (lqr_trace.steps[2].state.vec() - orbit.x_star[0].vec()).norm();
  const double e10 =
      (lqr_trace.steps[10].state.vec() - orbit.x_star[0].vec()).norm();
  const double ratio = std::pow(e10 / e2, 1.0 / 8.0);

  const bool pass = db_tail <= 1e-6 && ratio <= lqr.gains.rho_cl + 0.05;
  report(7, "disturbance-free convergence: deadbeat by step 3, LQR geometric",
         pass, "deadbeat tail " + fmt(db_tail) + ", LQR ratio " + fmt(ratio) +
                   " vs " + fmt(lqr.gains.rho_cl + 0.05),
         watch.seconds());
}

void criterion_8_tracking() {
  Stopwatch watch;
  const std::vector<double> speeds{2.0, 1.0, 0.5, 0.0, -0.75, -1.5};

  Scenario exact = exact_scenario(GainMethod::kLQR);
  exact.n_steps = 60;
  double worst_exact = 0;
  for (const auto& e : velocity_sweep(exact, speeds))
    worst_exact = std::max(worst_exact, std::abs(e.mean_velocity - e.v_cmd));

  Scenario mismatched = exact_scenario(GainMethod::kLQR);
  mismatched.plant.kind = PlantKind::kMismatched;
  mismatched.plant.com_height = 0.78;
  mismatched.n_steps = 200;
  bool mismatched_ok = true;
  for (const auto& e : velocity_sweep(mismatched, speeds))
    mismatched_ok &= !e.diverged && e.within_band;

  const double t = watch.seconds();
  report(8, "velocity tracking: exact to 1e-6, mismatched inside the band",
         worst_exact <= 1e-6 && mismatched_ok && t < 5.0,
         "exact err " + fmt(worst_exact) +
             std::string(mismatched_ok ? ", mismatched banded" : ", band broken"),
         t);
}

void criterion_9_push() {
  Stopwatch watch;
  const std::vector<ForceEvent> pushes{{15.0, 0.5, 1.5}, {20.0, 0.5, -1.5}};
  bool lqr_ok = true;
  bool db_ok = true;
  int worst_db_steps = 0;
  for (double v : {1.0, 0.5, 0.75}) {
    Scenario lqr = exact_scenario(GainMethod::kLQR);
    lqr.command = VelocityProfile::ramped(v, lqr.params.step_period());
    lqr.n_steps = 70;
    const PushResult a = push_experiment(lqr, pushes);
    lqr_ok &= a.all_recovered && !a.trace.diverged;

    Scenario db = exact_scenario(GainMethod::kDeadbeat);
    db.command = VelocityProfile::ramped(v, db.params.step_period());
    db.n_steps = 70;
    const PushResult b = push_experiment(db, pushes);
    db_ok &= b.all_recovered && !b.trace.diverged;
    for (const auto& r : b.recoveries) {
      db_ok &= r.recovered && r.recovery_steps <= 3;
      worst_db_steps = std::max(worst_db_steps, r.recovery_steps);
    }
  }
  const double t = watch.seconds();
  report(9, "push recovery at 1.0/0.5/0.75 m/s, deadbeat within 3 steps",
         lqr_ok && db_ok && t < 5.0,
         std::string(lqr_ok ? "lqr recovered" : "lqr failed") +
             ", deadbeat worst " + std::to_string(worst_db_steps) + " steps",
         t);
}

void criterion_10_mode_ordering() {
  Stopwatch watch;
  Scenario base = exact_scenario(GainMethod::kLQR);
  const double u_limit = 0.4;
  const auto entries = max_speed_search(
      base, {WalkingMode::kHeelToToe, WalkingMode::kFlatFooted}, u_limit);
  const bool binding = entries[0].found && entries[1].found &&
                       entries[0].v_cmd_max < 19.0 && entries[1].v_cmd_max < 19.0;
  const bool ordered = entries[0].ground_speed > entries[1].ground_speed;
  const double t = watch.seconds();
  report(10, "max stable speed: heel-to-toe above flat-footed at a shared limit",
         binding && ordered && t < 30.0,
         "heel-to-toe " + fmt(entries[0].ground_speed) + " m/s vs flat " +
             fmt(entries[1].ground_speed) + " m/s",
         t);
}

void criterion_11_bezier() {
  Stopwatch watch;
  const GaitParams p = default_sagittal_gait();
  const double v = 1.0;
  const OrbitSpec fa_orbit = p1_orbit(compose_s2s_at_fa_end(p), v);
  const OrbitSpec ua_orbit = p1_orbit(compose_s2s(p), v);

  const DomainMap oa = domain_map(p, Domain::kOA);
  const ResetMap switch_legs = reset_map(p, Edge::kOAtoFA);
  const ContinuousState fa_entry = switch_legs.apply(
      oa.apply({ua_orbit.x_star[0].com_pos, ua_orbit.x_star[0].ang_mom, 0.0},
               ua_orbit.u_star[0]),
      ua_orbit.u_star[0]);
  const BezierCurve curve =
      fit_fa_com(fa_entry.com_pos, fa_entry.ang_mom / p.com_height,
                 fa_orbit.x_star[0], p.com_height, p.t_fa, 5);

  const double constraint_residual = std::max(
      {std::abs(bezier_eval(curve, 0.0) - fa_entry.com_pos),
       std::abs(bezier_deriv(curve, 0.0) - fa_entry.ang_mom / p.com_height),
       std::abs(bezier_eval(curve, 1.0) - fa_orbit.x_star[0].com_pos),
       std::abs(bezier_deriv(curve, 1.0) -
                fa_orbit.x_star[0].ang_mom / p.com_height)});

  double fd_residual = 0;
  const double h = 1e-6;
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double fd = (bezier_eval(curve, s + h) - bezier_eval(curve, s - h)) /
                      (2 * h * curve.duration);
    fd_residual = std::max(fd_residual, std::abs(bezier_deriv(curve, s) - fd));
  }

  // The exact-plant run must pass through the same section target.
  Scenario sc = exact_scenario(GainMethod::kLQR);
  sc.command = VelocityProfile::constant(v);
  sc.n_steps = 3;
  const StepTrace trace = simulate(sc);
  const double t_fa_end = 2 * sc.params.step_period() + p.t_oa + p.t_fa;
  double sim_residual = 1.0;
  for (const auto& s : trace.samples)
    if (std::abs(s.t - t_fa_end) < 1e-9)
      sim_residual = std::max(
          std::abs(s.com_pos - bezier_eval(curve, 1.0)),
          std::abs(s.ang_mom / p.com_height - bezier_deriv(curve, 1.0)));

  const bool pass = constraint_residual <= 1e-10 && fd_residual <= 1e-6 &&
                    sim_residual <= 1e-8;
  report(11, "Bezier fit: constraints, derivative, section consistency", pass,
         "constraints " + fmt(constraint_residual) + ", fd " + fmt(fd_residual) +
             ", sim " + fmt(sim_residual),
         watch.seconds());
}

void criterion_12_determinism() {
  Stopwatch watch;
  const std::string config = read_file("configs/figures.json");
  const fs::path base =
      fs::temp_directory_path() / ("mlip_accept_" + std::to_string(::getpid()));
  const fs::path dir_a = base / "a";
  const fs::path dir_b = base / "b";
  fs::remove_all(base);
  generate_figures(config, dir_a.string());
  generate_figures(config, dir_b.string());

  bool identical = true;
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    ++files;
    const fs::path other = dir_b / entry.path().filename();
    identical &= fs::exists(other) &&
                 read_file(entry.path().string()) == read_file(other.string());
  }
  for (const auto& entry : fs::directory_iterator(dir_b))
    identical &= fs::exists(dir_a / entry.path().filename());
  fs::remove_all(base);
  report(12, "figure bundles are byte-identical across runs",
         identical && files > 0, std::to_string(files) + " files compared",
         watch.seconds());
}

}  // namespace

int main() {
  criterion_1_structure();
  criterion_2_oracle();
  criterion_3_matexp();
  criterion_4_orbits();
  criterion_5_reduction();
  criterion_6_gains();
  criterion_7_convergence();
  criterion_8_tracking();
  criterion_9_push();
  criterion_10_mode_ordering();
  criterion_11_bezier();
  criterion_12_determinism();
  if (g_failures > 0) std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
