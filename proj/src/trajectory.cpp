#include "mlip/trajectory.hpp"

#include <cmath>
#include <stdexcept>

#include "mlip/orbit.hpp"
#include "mlip/s2s.hpp"

namespace mlip {

namespace {

// de Casteljau; stable for the small degrees used here.
double bernstein_eval(const std::vector<double>& coeffs, double s) {
  std::vector<double> work = coeffs;
  for (size_t level = work.size() - 1; level > 0; --level)
    for (size_t i = 0; i < level; ++i)
      work[i] = (1.0 - s) * work[i] + s * work[i + 1];
  return work[0];
}

}  // namespace

double bezier_eval(const BezierCurve& curve, double s) {
  if (curve.coeffs.empty()) throw std::invalid_argument("empty Bezier curve");
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("phase outside [0, 1]");
  return bernstein_eval(curve.coeffs, s);
}

double bezier_deriv(const BezierCurve& curve, double s) {
  if (curve.coeffs.empty()) throw std::invalid_argument("empty Bezier curve");
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("phase outside [0, 1]");
  if (!(curve.duration > 0)) throw std::invalid_argument("duration must be > 0");
  const size_t n = curve.coeffs.size() - 1;
  if (n == 0) return 0.0;
  std::vector<double> diff(n);
  for (size_t i = 0; i < n; ++i)
    diff[i] = static_cast<double>(n) * (curve.coeffs[i + 1] - curve.coeffs[i]);
  return bernstein_eval(diff, s) / curve.duration;
}

BezierCurve fit_fa_com(double start_pos, double start_vel,
                       const ReducedState& target, double com_height,
                       double duration, int degree) {
  if (degree < 3) throw std::invalid_argument("fit_fa_com needs degree >= 3");
  if (!(duration > 0)) throw std::invalid_argument("fit_fa_com needs duration > 0");
  if (!(com_height > 0)) throw std::invalid_argument("com_height must be > 0");

  const double n = degree;
  const double end_pos = target.com_pos;
  const double end_vel = target.ang_mom / com_height;

  // Endpoint values pin the first and last coefficients, endpoint
  // derivatives pin their neighbors; anything left sits on the chord.
  BezierCurve curve;
  curve.duration = duration;
  curve.coeffs.resize(degree + 1);
  curve.coeffs.front() = start_pos;
  curve.coeffs.back() = end_pos;
  curve.coeffs[1] = start_pos + start_vel * duration / n;
  curve.coeffs[degree - 1] = end_pos - end_vel * duration / n;
  for (int j = 2; j <= degree - 2; ++j)
    curve.coeffs[j] = start_pos + (end_pos - start_pos) * j / n;
  return curve;
}

double FootPitchProfile::eval(double s) const {
  const double b = bezier_eval(blend, s);
  return (1.0 - b) * theta_start + b * theta_target;
}

FootPitchProfile foot_pitch_profile(double theta_start, double theta_target,
                                    int blend_degree) {
  if (blend_degree < 3)
    throw std::invalid_argument("blend needs degree >= 3 for flat ends");
  FootPitchProfile profile;
  profile.theta_start = theta_start;
  profile.theta_target = theta_target;
  profile.blend.duration = 1.0;
  // 0,0,...,1,1: rises monotonically with zero derivative at both ends.
  profile.blend.coeffs.assign(blend_degree + 1, 0.0);
  for (int i = (blend_degree + 1) / 2; i <= blend_degree; ++i)
    profile.blend.coeffs[i] = 1.0;
  return profile;
}

ZmpReference zmp_reference(const GaitParams& params, double t_in_step, double u) {
  params.validate();
  if (t_in_step < 0 || t_in_step >= params.step_period())
    throw std::invalid_argument("t_in_step outside the step");
  const double l = zmp_travel(params.mode, params.foot_length);

  // Step order: double support (zmp crosses to the new foot), leg switch
  // (frame jump of -(u + l)), flat foot (zmp crosses the foot), pivot
  // (zmp parked at the pivot, position 0 at the section).
  const double t_oa = params.t_oa <= kZeroDuration ? 0.0 : params.t_oa;
  const double dur_fa = params.t_fa <= kZeroDuration ? 0.0 : params.t_fa;
  ZmpReference ref;
  if (t_in_step < t_oa) {
    ref.rate = u / t_oa;
    ref.position = ref.rate * t_in_step;
    return ref;
  }
  const double t_fa = t_in_step - t_oa;
  if (t_fa < dur_fa) {
    ref.rate = l / dur_fa;
    ref.position = -l + ref.rate * t_fa;
    return ref;
  }
  ref.rate = 0.0;
  ref.position = 0.0;
  return ref;
}

namespace {

struct PitchPlan {
  FootPitchProfile stance;
  FootPitchProfile swing;
};

PitchPlan pitch_plan(const GaitParams& params, Domain domain,
                     const FootPitchTargets& targets) {
  const bool lifts = params.mode == WalkingMode::kHeelToToe;
  const double lift = lifts ? targets.stance_ua : 0.0;
  switch (domain) {
    case Domain::kOA:
      // Back (outgoing) foot holds its lift through double support.
      return {foot_pitch_profile(0.0, 0.0), foot_pitch_profile(lift, lift)};
    case Domain::kFA:
      // The new swing foot (old stance) settles back to flat.
      return {foot_pitch_profile(0.0, 0.0), foot_pitch_profile(lift, 0.0)};
    case Domain::kUA:
      return {foot_pitch_profile(0.0, lift), foot_pitch_profile(0.0, 0.0)};
  }
  return {foot_pitch_profile(0.0, 0.0), foot_pitch_profile(0.0, 0.0)};
}

}  // namespace

std::vector<ReferenceSample> reference_trace(const GaitParams& params,
                                             double v_d, double dt,
                                             int bezier_degree,
                                             const FootPitchTargets& targets) {
  params.validate();
  if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");

  const S2SDynamics dyn = compose_s2s(params);
  const OrbitSpec orbit = p1_orbit(dyn, v_d);
  const double u = orbit.u_star[0];
  const double l = zmp_travel(params.mode, params.foot_length);

  // State entering the flat-foot phase of the nominal step.
  const DomainMap oa = domain_map(params, Domain::kOA);
  const ResetMap switch_legs = reset_map(params, Edge::kOAtoFA);
  ContinuousState xi{orbit.x_star[0].com_pos, orbit.x_star[0].ang_mom, 0.0};
  const ContinuousState fa_start = switch_legs.apply(oa.apply(xi, u), u);

  BezierCurve fa_curve;
  const bool has_fa = params.t_fa > kZeroDuration;
  if (has_fa) {
    const OrbitSpec fa_orbit = p1_orbit(compose_s2s_at_fa_end(params), v_d);
    fa_curve = fit_fa_com(fa_start.com_pos,
                          fa_start.ang_mom / params.com_height,
                          fa_orbit.x_star[0], params.com_height, params.t_fa,
                          bezier_degree);
  }

  const double T = params.step_period();
  const int n = std::max(1, static_cast<int>(std::ceil(T / dt)));
  std::vector<ReferenceSample> out;
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = std::min(T * i / n, std::nextafter(T, 0.0));
    ReferenceSample sample;
    sample.t = t;
    const ZmpReference zmp = zmp_reference(params, t, u);
    sample.zmp_ref = zmp.position;

    Domain domain;
    double s;
    if (t < params.t_oa) {
      domain = Domain::kOA;
      s = t / params.t_oa;
      const Vector3d v = mat_exp_closed(params, t) * xi.vec() +
                         flow_input_integral(params, t) * (u / params.t_oa);
      sample.com_pos_ref = v[0];
      sample.com_vel_ref = v[1] / params.com_height;
    } else if (has_fa && t < params.t_oa + params.t_fa) {
      domain = Domain::kFA;
      s = (t - params.t_oa) / params.t_fa;
      sample.com_pos_ref = bezier_eval(fa_curve, s);
      sample.com_vel_ref = bezier_deriv(fa_curve, s);
    } else {
      domain = Domain::kUA;
      const double tau = t - params.t_oa - params.t_fa;
      s = params.t_ua > kZeroDuration ? tau / params.t_ua : 0.0;
      const DomainMap fa = domain_map(params, Domain::kFA);
      const Vector3d ua_start = fa.A * fa_start.vec() + fa.B * l;
      const Vector3d v = mat_exp_closed(params, tau) * ua_start;
      sample.com_pos_ref = v[0];
      sample.com_vel_ref = v[1] / params.com_height;
    }
    const PitchPlan plan = pitch_plan(params, domain, targets);
    sample.theta_stance_ref = plan.stance.eval(std::min(s, 1.0));
    sample.theta_swing_ref = plan.swing.eval(std::min(s, 1.0));
    out.push_back(sample);
  }
  return out;
}

}  // namespace mlip
