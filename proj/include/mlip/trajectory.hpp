#pragma once

// Continuous references implied by a step plan: a Bezier CoM trajectory
// that steers the flat-foot phase to its section target, blended foot
// pitch profiles, and the piecewise-linear zmp reference.

#include <vector>

#include "mlip/model.hpp"

namespace mlip {

// Polynomial in Bernstein form over a phase s in [0, 1]; time derivatives
// divide by the domain duration.
struct BezierCurve {
  std::vector<double> coeffs;  // degree = coeffs.size() - 1
  double duration = 1.0;       // [s]
};

double bezier_eval(const BezierCurve& curve, double s);
double bezier_deriv(const BezierCurve& curve, double s);  // d/dt at s

// Fits the flat-foot CoM trajectory: position/velocity at phase start must
// match the measured state, position/velocity at phase end must hit the
// section target (momentum converted to velocity by 1/z0). Degree >= 3;
// leftover coefficients sit on the chord between the endpoints.
BezierCurve fit_fa_com(double start_pos, double start_vel,
                       const ReducedState& target, double com_height,
                       double duration, int degree);

// Foot pitch reference that rides a 0-to-1 blend from the angle measured
// at domain entry to the desired end-of-domain angle.
struct FootPitchProfile {
  double theta_start = 0;   // [rad]
  double theta_target = 0;  // [rad]
  BezierCurve blend;

  double eval(double s) const;
};

FootPitchProfile foot_pitch_profile(double theta_start, double theta_target,
                                    int blend_degree = 5);

// Zmp position and rate at a time within one step (step order: double
// support, flat foot, pivot). Positions follow the frame the state is
// integrated in, so the leg switch appears as a jump of -(u + l).
struct ZmpReference {
  double position = 0;  // [m]
  double rate = 0;      // [m/s]
};

ZmpReference zmp_reference(const GaitParams& params, double t_in_step, double u);

// End-of-domain foot pitch targets used for rendering references. Only
// the stance heel-lift during the pivot phase of heel-to-toe walking is
// nonzero by default.
struct FootPitchTargets {
  double stance_ua = 0.2;  // [rad], applied for heel-to-toe only
};

// One row of the exported reference trajectory.
struct ReferenceSample {
  double t = 0;
  double com_pos_ref = 0;
  double com_vel_ref = 0;
  double zmp_ref = 0;
  double theta_stance_ref = 0;
  double theta_swing_ref = 0;
};

// Renders the references over one nominal step of a period-1 orbit at the
// given speed: Bezier CoM for the flat-foot phase, exact flows elsewhere,
// zmp reference, and blended foot pitch angles.
std::vector<ReferenceSample> reference_trace(const GaitParams& params,
                                             double v_d, double dt = 0.002,
                                             int bezier_degree = 5,
                                             const FootPitchTargets& targets = {});

}  // namespace mlip
