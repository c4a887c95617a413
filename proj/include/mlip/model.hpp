#pragma once

// Multi-domain linear inverted pendulum: a point mass at constant height
// above the stance pivot, with the zero-moment point carried as a third
// state so that weight shift across the FA/UA/OA gait phases is part of
// the model. All quantities are mass-normalized and expressed relative to
// the current stance pivot.

#include <Eigen/Dense>

namespace mlip {

using Eigen::Matrix2d;
using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;

// Durations at or below this are collapsed to the zero-duration branch so
// the 1/T factor in the input map never blows up.
inline constexpr double kZeroDuration = 1e-9;

enum class WalkingMode { kHeelToToe, kToeToHeel, kFlatFooted };

enum class Domain { kFA, kUA, kOA };

enum class Edge { kUAtoOA, kOAtoFA, kFAtoUA };

const char* to_string(WalkingMode mode);
const char* to_string(Domain domain);

// Physical and timing parameters of one planar MLIP instance.
struct GaitParams {
  double com_height = 0.8;   // CoM height above the stance pivot [m]
  double foot_length = 0.16; // ZMP travel available within the foot [m]
  double gravity = 9.81;     // [m/s^2]
  double t_fa = 0.2;         // flat-foot single support duration [s]
  double t_ua = 0.2;         // toe/heel pivot single support duration [s]
  double t_oa = 0.1;         // double support duration [s]
  WalkingMode mode = WalkingMode::kHeelToToe;

  double step_period() const { return t_fa + t_ua + t_oa; }
  double natural_frequency() const;  // sqrt(g / z0)

  // Throws std::invalid_argument when a physical invariant is violated.
  void validate() const;
};

// Paper-default sagittal gait: 40% FA, 40% UA, 20% OA over a 0.5 s step.
GaitParams default_sagittal_gait();
// Lateral plane gait: weight shift happens entirely in double support.
GaitParams default_lateral_gait(WalkingMode mode = WalkingMode::kFlatFooted);

// [com position, angular momentum about the pivot, zmp position], the
// full continuous state within any domain.
struct ContinuousState {
  double com_pos = 0;  // [m]
  double ang_mom = 0;  // mass-normalized, [m^2/s]
  double zmp_pos = 0;  // [m]

  Vector3d vec() const { return {com_pos, ang_mom, zmp_pos}; }
  static ContinuousState from_vec(const Vector3d& v) { return {v[0], v[1], v[2]}; }
};

// State at a step-to-step section, where the zmp sits at the pivot.
struct ReducedState {
  double com_pos = 0;  // [m]
  double ang_mom = 0;  // [m^2/s]

  Vector2d vec() const { return {com_pos, ang_mom}; }
  static ReducedState from_vec(const Vector2d& v) { return {v[0], v[1]}; }
};

// Exact end-of-domain affine map: xi_end = A * xi_start + B * travel,
// where travel is the total zmp displacement commanded over the domain.
struct DomainMap {
  Matrix3d A = Matrix3d::Identity();
  Vector3d B = Vector3d::Zero();
  double duration = 0;
  Domain domain = Domain::kFA;

  ContinuousState apply(const ContinuousState& xi, double travel) const {
    return ContinuousState::from_vec(A * xi.vec() + B * travel);
  }
};

// Leg-switch map applied on a domain edge: xi+ = xi- + input_gain * u + offset.
// Only the double-support exit moves the reference pivot; the other edges
// are identities.
struct ResetMap {
  Vector3d input_gain = Vector3d::Zero();
  Vector3d offset = Vector3d::Zero();
  Edge edge = Edge::kUAtoOA;

  ContinuousState apply(const ContinuousState& xi, double u) const {
    return ContinuousState::from_vec(xi.vec() + input_gain * u + offset);
  }
};

// Continuous-dynamics matrix d/dt [p, L, p_zmp] = A_ct [p, L, p_zmp] + B_ct * zmp_rate.
Matrix3d continuous_dynamics_matrix(const GaitParams& params);

// Exact exponential of the continuous dynamics over time t, in hyperbolic
// closed form. The bottom row is (0, 0, 1) for all t.
Matrix3d mat_exp_closed(const GaitParams& params, double t);

// integral_0^t exp(A_ct s) ds * B_ct, closed form. Scaled by the zmp rate
// this is the input contribution of a partial flow; the domain input map
// is this at the full duration divided by the duration.
Vector3d flow_input_integral(const GaitParams& params, double t);

// Scaling-and-squaring Taylor exponential of an arbitrary small dense
// matrix; serves as the independent numerical route against the closed
// form. n <= 8, finite entries.
Eigen::MatrixXd mat_exp_series(const Eigen::MatrixXd& m, double t);

// Signed ZMP travel within the foot for the given walking mode.
double zmp_travel(WalkingMode mode, double foot_length);

// Flow map of one domain. Zero-duration domains collapse to (I, 0).
DomainMap domain_map(const GaitParams& params, Domain domain);

// Reset map of one edge. The double-support exit subtracts the full pivot
// displacement u + l from both positions; when the double support has zero
// duration, the zmp transfer that flow could not perform happens here.
ResetMap reset_map(const GaitParams& params, Edge edge);

}  // namespace mlip
