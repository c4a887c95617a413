#pragma once

// Periodic orbits of the step-to-step dynamics. Period-1 orbits repeat
// every step and serve sagittal planning; period-2 orbits alternate two
// step sizes and serve lateral planning, where left and right stance are
// mirror images.

#include <stdexcept>
#include <vector>

#include "mlip/s2s.hpp"

namespace mlip {

// A linear solve in the orbit equations was too ill-conditioned to trust.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OrbitKind { kP1, kP2 };

struct OrbitSpec {
  OrbitKind kind = OrbitKind::kP1;
  double v_d = 0;          // average step velocity u/T [m/s]
  double step_period = 0;  // [s]
  // P1 uses index 0 only; P2 uses 0 = left stance, 1 = right stance.
  double u_star[2] = {0, 0};
  ReducedState x_star[2];
};

// Fixed point of the step map for step size u* = v_d * T.
OrbitSpec p1_orbit(const S2SDynamics& dyn, double v_d);

// Period-2 cycle alternating u_left, u_right with u_left + u_right =
// 2 v_d T; the left step size picks one orbit out of the family.
OrbitSpec p2_orbit(const S2SDynamics& dyn, double v_d, double u_left);

// Lateral-plane coordinates: the roll momentum enters with flipped sign so
// the planar dynamics matrix applies unchanged. Self-inverse.
ReducedState lateral_adapter(double pos, double ang_mom);

// One time-sampled point along a nominal cycle, for phase portraits.
struct OrbitSample {
  double t = 0;
  Domain domain = Domain::kOA;
  ContinuousState state;
};

// Samples the orbit through one full cycle (two steps for P2) with the
// exact flow maps. States are relative to the current stance pivot and the
// leg switch shows up as the usual jump in com_pos.
std::vector<OrbitSample> orbit_phase_portrait(const S2SDynamics& dyn,
                                              const OrbitSpec& orbit,
                                              double dt = 0.002);

}  // namespace mlip
