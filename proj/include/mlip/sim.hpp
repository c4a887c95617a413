#pragma once

// Closed-loop multi-domain walking of the step-placement controller
// against an integrated plant. The plant is either the model itself
// (residuals at integration noise) or a deliberately mismatched pendulum,
// which is where nonzero step-to-step discrepancy comes from. Pushes enter
// the momentum dynamics during continuous integration.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mlip/gains.hpp"
#include "mlip/model.hpp"
#include "mlip/orbit.hpp"
#include "mlip/s2s.hpp"

namespace mlip {

enum class PlantKind { kExact, kMismatched };

struct PlantSpec {
  PlantKind kind = PlantKind::kExact;
  // CoM height the plant actually integrates with. Must equal the model
  // height for an exact plant.
  double com_height = 0.8;
  std::optional<double> zmp_rate_limit;  // [m/s]
  double zmp_lag = 0.0;                  // first-order tracking constant [s], 0 = none
};

// Mass-normalized horizontal push, constant over its window.
struct ForceEvent {
  double t_start = 0;   // [s]
  double duration = 0;  // [s], > 0
  double accel = 0;     // [m/s^2]
};

// Piecewise-constant commanded velocity; each segment holds from its start
// time until the next segment.
struct VelocityProfile {
  struct Segment {
    double t_start = 0;
    double v = 0;
  };
  std::vector<Segment> segments;

  double at(double t) const;
  static VelocityProfile constant(double v);
  // Step-in-place preamble, then a linear ramp to v sampled once per step.
  static VelocityProfile ramped(double v, double step_period,
                                double preamble = 5.0, double ramp = 2.0);
};

struct Scenario {
  GaitParams params;  // the controller's model
  PlantSpec plant;
  GainSpec gains;
  VelocityProfile command = VelocityProfile::constant(0.0);
  std::vector<ForceEvent> disturbances;
  int n_steps = 1;
  std::optional<double> step_size_limit;  // max |u| [m]
  std::uint64_t seed = 0;
  Vector2d initial_error = Vector2d::Zero();  // offset from the initial orbit state
  double dt = 1e-3;                           // integrator step [s]
  OrbitKind orbit_kind = OrbitKind::kP1;
  double p2_width = 0.0;  // nominal step width for period-2 scenarios [m]

  void validate() const;
};

struct TraceSample {
  double t = 0;
  Domain domain = Domain::kOA;
  double com_pos = 0;
  double ang_mom = 0;
  double zmp_pos = 0;
  double u_cmd = 0;  // step size commanded for the ongoing step
};

struct StepRecord {
  int k = 0;
  ReducedState state;           // at the step-start section
  double u = 0;                 // commanded (post-clip) step size
  Vector2d w = Vector2d::Zero();  // step residual vs the model map
  double v_cmd = 0;             // commanded velocity for this step
  bool saturated = false;
  bool pushed = false;  // a force event was active during this step
  double pivot_world = 0;  // world position of the stance pivot at step start
};

struct TraceEvent {
  double t = 0;
  std::string kind;
  std::string detail;
};

struct StepTrace {
  std::vector<TraceSample> samples;
  std::vector<StepRecord> steps;
  std::vector<TraceEvent> events;
  bool diverged = false;
  double step_period = 0;
};

struct DomainInputs {
  Domain domain = Domain::kOA;
  double travel = 0;    // commanded zmp displacement over the domain [m]
  double duration = 0;  // [s]
};

// Fixed-step RK4 through one domain. The zmp tracks its piecewise-linear
// reference, optionally through a first-order lag and a rate limit;
// external_accel(t) adds straight into the momentum rate. Appends one
// sample per substep when sink is given.
ContinuousState integrate_domain(
    const ContinuousState& start, const PlantSpec& plant, double gravity,
    const DomainInputs& inputs, double dt,
    const std::function<double(double)>& external_accel = {}, double t0 = 0.0,
    std::vector<TraceSample>* sink = nullptr, double u_cmd_for_log = 0.0);

// Runs the scenario: once per step, read the section state, refresh the
// orbit for the commanded velocity, command u = u* + K (x - x*) (clipped
// when a step-size limit is set), and integrate the plant through the
// cycle. Divergence (|p| > 10 or |L| > 100) stops the run with the trace
// collected so far.
StepTrace simulate(const Scenario& scenario);

// --- run metrics -----------------------------------------------------------

// Componentwise max |w_k|; optionally skipping push-affected steps and the
// first `skip` steps.
Vector2d observed_disturbance_bound(const StepTrace& trace,
                                    bool exclude_pushed = false, int skip = 0);

// Mean commanded step velocity u/T over the last n steps.
double mean_step_velocity(const StepTrace& trace, int last_n = 10);

// World CoM travel per unit time over the last n steps.
double mean_ground_speed(const StepTrace& trace, int last_n = 10);

// Samples from the last n steps, shifted to start at time zero. The
// steady-state phase-portrait window.
std::vector<TraceSample> tail_samples(const StepTrace& trace, int last_n);

// --- experiments ------------------------------------------------------------

struct SweepEntry {
  double v_cmd = 0;
  double mean_velocity = 0;      // u/T over the last 10 steps
  double terminal_error = 0;     // |x_n - x*| at the final step
  Vector2d w_max = Vector2d::Zero();
  Vector2d e_box = Vector2d::Zero();  // invariant box for the observed w_max
  double velocity_band = 0;      // |K| e_box / T, the box-implied band
  bool within_band = false;
  bool diverged = false;
  StepTrace trace;
};

// Runs one scenario per speed with the ramped command profile.
std::vector<SweepEntry> velocity_sweep(const Scenario& base,
                                       const std::vector<double>& speeds);

struct PushRecovery {
  ForceEvent push;
  int push_step = -1;      // last step overlapping the push window
  int recovery_steps = -1; // steps after push_step until re-entry
  bool recovered = false;
};

struct PushResult {
  StepTrace trace;
  std::vector<PushRecovery> recoveries;
  Vector2d w_max = Vector2d::Zero();   // non-push residual bound (floored)
  Vector2d e_box = Vector2d::Zero();   // recovery box, pre-inflation
  bool all_recovered = false;
};

// Runs the scenario with the pushes injected and measures, for each push,
// how many steps until the section error re-enters the invariant box
// inflated by 10%. The box uses the non-push residual bound, floored at
// 1e-6 per component so exact plants do not produce a noise-level target.
PushResult push_experiment(const Scenario& base, const std::vector<ForceEvent>& pushes);

struct MaxSpeedEntry {
  WalkingMode mode = WalkingMode::kFlatFooted;
  double v_cmd_max = 0;      // largest stable commanded velocity
  double ground_speed = 0;   // realized world CoM speed at that command
  bool found = false;
};

// Bisection at 0.01 m/s resolution for the largest commanded velocity that
// completes 50 steps without clipping over the last 10, per walking mode,
// under one shared step-size limit. The reported speed is the realized
// ground speed, which is where in-foot zmp travel pays off.
std::vector<MaxSpeedEntry> max_speed_search(const Scenario& base,
                                            const std::vector<WalkingMode>& modes,
                                            double u_limit);

}  // namespace mlip
