#include "mlip/orbit.hpp"

#include <cmath>

namespace mlip {

namespace {

constexpr double kMaxConditionNumber = 1e12;

// Solves (I - M) x = rhs, refusing near-singular systems instead of
// returning garbage.
Vector2d solve_orbit_system(const Matrix2d& m, const Vector2d& rhs,
                            const char* what) {
  const Matrix2d lhs = Matrix2d::Identity() - m;
  const Eigen::JacobiSVD<Matrix2d> svd(lhs, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smin = svd.singularValues()(1);
  const double smax = svd.singularValues()(0);
  if (!(smin > 0) || smax / smin > kMaxConditionNumber)
    throw SingularSystemError(what);
  return svd.solve(rhs);
}

}  // namespace

OrbitSpec p1_orbit(const S2SDynamics& dyn, double v_d) {
  OrbitSpec orbit;
  orbit.kind = OrbitKind::kP1;
  orbit.v_d = v_d;
  orbit.step_period = dyn.params.step_period();
  const double u = v_d * orbit.step_period;
  orbit.u_star[0] = orbit.u_star[1] = u;
  const Vector2d x = solve_orbit_system(
      dyn.A, dyn.B * u + dyn.C, "period-1 orbit: I - A is singular");
  orbit.x_star[0] = orbit.x_star[1] = ReducedState::from_vec(x);
  return orbit;
}

OrbitSpec p2_orbit(const S2SDynamics& dyn, double v_d, double u_left) {
  OrbitSpec orbit;
  orbit.kind = OrbitKind::kP2;
  orbit.v_d = v_d;
  orbit.step_period = dyn.params.step_period();
  const double u_right = 2.0 * v_d * orbit.step_period - u_left;
  orbit.u_star[0] = u_left;
  orbit.u_star[1] = u_right;

  const Matrix2d a2 = dyn.A * dyn.A;
  const Vector2d affine = dyn.A * dyn.C + dyn.C;
  orbit.x_star[0] = ReducedState::from_vec(solve_orbit_system(
      a2, dyn.A * (dyn.B * u_left) + dyn.B * u_right + affine,
      "period-2 orbit: I - A^2 is singular"));
  orbit.x_star[1] = ReducedState::from_vec(solve_orbit_system(
      a2, dyn.A * (dyn.B * u_right) + dyn.B * u_left + affine,
      "period-2 orbit: I - A^2 is singular"));
  return orbit;
}

ReducedState lateral_adapter(double pos, double ang_mom) {
  return ReducedState{pos, -ang_mom};
}

namespace {

// Appends samples of one domain flow starting from xi, with total zmp
// travel over the domain. Uses the exact partial flow at each sample time.
void sample_domain(const GaitParams& params, Domain domain, double duration,
                   double travel, double t0, double dt,
                   const ContinuousState& xi, std::vector<OrbitSample>* out,
                   ContinuousState* xi_end) {
  if (duration <= kZeroDuration) {
    *xi_end = xi;
    return;
  }
  const Vector3d xi0 = xi.vec();
  const double rate = travel / duration;
  const int n = std::max(1, static_cast<int>(std::ceil(duration / dt)));
  for (int i = 0; i < n; ++i) {
    const double tau = duration * i / n;
    const Vector3d v = mat_exp_closed(params, tau) * xi0 +
                       flow_input_integral(params, tau) * rate;
    out->push_back({t0 + tau, domain, ContinuousState::from_vec(v)});
  }
  const Vector3d v_end = mat_exp_closed(params, duration) * xi0 +
                         flow_input_integral(params, duration) * rate;
  *xi_end = ContinuousState::from_vec(v_end);
}

}  // namespace

std::vector<OrbitSample> orbit_phase_portrait(const S2SDynamics& dyn,
                                              const OrbitSpec& orbit,
                                              double dt) {
  const GaitParams& params = dyn.params;
  const ResetMap switch_legs = reset_map(params, Edge::kOAtoFA);
  const double l = zmp_travel(params.mode, params.foot_length);
  const int steps = orbit.kind == OrbitKind::kP1 ? 1 : 2;

  std::vector<OrbitSample> samples;
  double t = 0;
  ContinuousState xi{orbit.x_star[0].com_pos, orbit.x_star[0].ang_mom, 0.0};
  for (int s = 0; s < steps; ++s) {
    const double u = orbit.u_star[s];
    ContinuousState next;
    sample_domain(params, Domain::kOA, params.t_oa, u, t, dt, xi, &samples, &next);
    t += params.t_oa;
    xi = switch_legs.apply(next, u);
    sample_domain(params, Domain::kFA, params.t_fa, l, t, dt, xi, &samples, &next);
    t += params.t_fa;
    sample_domain(params, Domain::kUA, params.t_ua, 0.0, t, dt, next, &samples, &next);
    t += params.t_ua;
    xi = next;
  }
  samples.push_back({t, Domain::kOA, xi});
  return samples;
}

}  // namespace mlip
