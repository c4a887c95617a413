#include "mlip/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mlip {

const char* to_string(WalkingMode mode) {
  switch (mode) {
    case WalkingMode::kHeelToToe: return "heel-to-toe";
    case WalkingMode::kToeToHeel: return "toe-to-heel";
    case WalkingMode::kFlatFooted: return "flat-footed";
  }
  return "?";
}

const char* to_string(Domain domain) {
  switch (domain) {
    case Domain::kFA: return "FA";
    case Domain::kUA: return "UA";
    case Domain::kOA: return "OA";
  }
  return "?";
}

double GaitParams::natural_frequency() const {
  return std::sqrt(gravity / com_height);
}

void GaitParams::validate() const {
  if (!(com_height > 0)) throw std::invalid_argument("com_height must be > 0");
  if (!(gravity > 0)) throw std::invalid_argument("gravity must be > 0");
  if (!(foot_length >= 0)) throw std::invalid_argument("foot_length must be >= 0");
  if (!(t_fa >= 0) || !(t_ua >= 0) || !(t_oa >= 0))
    throw std::invalid_argument("domain durations must be >= 0");
  if (!(step_period() > 0)) throw std::invalid_argument("step period must be > 0");
  // A zero-duration FA domain cannot realize any in-foot ZMP travel, which
  // would silently break the zmp = 0 section convention.
  if (t_fa <= kZeroDuration && zmp_travel(mode, foot_length) != 0.0)
    throw std::invalid_argument(
        "t_fa = 0 requires flat-footed mode (or zero foot length): the "
        "in-foot ZMP travel has no domain to happen in");
  for (double v : {com_height, foot_length, gravity, t_fa, t_ua, t_oa})
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite gait parameter");
}

GaitParams default_sagittal_gait() {
  return GaitParams{};
}

GaitParams default_lateral_gait(WalkingMode mode) {
  GaitParams p;
  p.t_fa = 0.0;
  p.t_ua = 0.4;
  p.t_oa = 0.1;
  p.mode = mode;
  return p;
}

Matrix3d continuous_dynamics_matrix(const GaitParams& params) {
  params.validate();
  Matrix3d a = Matrix3d::Zero();
  a(0, 1) = 1.0 / params.com_height;
  a(1, 0) = params.gravity;
  a(1, 2) = -params.gravity;
  return a;
}

Matrix3d mat_exp_closed(const GaitParams& params, double t) {
  params.validate();
  if (!(t >= 0)) throw std::invalid_argument("t must be >= 0");
  const double lam = params.natural_frequency();
  const double g = params.gravity;
  const double z0 = params.com_height;
  const double ch = std::cosh(lam * t);
  const double sh = std::sinh(lam * t);
  Matrix3d e;
  e << ch, sh / (lam * z0), 1.0 - ch,
       g * sh / lam, ch, -g * sh / lam,
       0.0, 0.0, 1.0;
  return e;
}

Vector3d flow_input_integral(const GaitParams& params, double t) {
  params.validate();
  if (!(t >= 0)) throw std::invalid_argument("t must be >= 0");
  const double lam = params.natural_frequency();
  const double lt = lam * t;
  Vector3d v;
  v[0] = t - std::sinh(lt) / lam;
  v[1] = -params.com_height * (std::cosh(lt) - 1.0);
  v[2] = t;
  return v;
}

Eigen::MatrixXd mat_exp_series(const Eigen::MatrixXd& m, double t) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  if (m.rows() > 8) throw std::invalid_argument("matrix larger than 8x8");
  if (!m.allFinite() || !std::isfinite(t))
    throw std::invalid_argument("non-finite input to mat_exp_series");

  // Extended precision keeps the repeated squarings from eating into the
  // double-precision budget of the final result.
  using MatrixXl = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  MatrixXl x = m.cast<long double>() * static_cast<long double>(t);
  // Scale until the norm is small enough that the Taylor series converges
  // to machine precision in a handful of terms, then square back up.
  int squarings = 0;
  long double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25L) {
    x *= 0.5L;
    norm *= 0.5L;
    ++squarings;
  }
  const Eigen::Index n = m.rows();
  MatrixXl result = MatrixXl::Identity(n, n);
  MatrixXl term = MatrixXl::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = (term * x) / static_cast<long double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-24L) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result.cast<double>();
}

double zmp_travel(WalkingMode mode, double foot_length) {
  if (!(foot_length >= 0)) throw std::invalid_argument("foot_length must be >= 0");
  switch (mode) {
    case WalkingMode::kHeelToToe: return foot_length;
    case WalkingMode::kToeToHeel: return -foot_length;
    case WalkingMode::kFlatFooted: return 0.0;
  }
  return 0.0;
}

namespace {

double domain_duration(const GaitParams& params, Domain domain) {
  switch (domain) {
    case Domain::kFA: return params.t_fa;
    case Domain::kUA: return params.t_ua;
    case Domain::kOA: return params.t_oa;
  }
  return 0.0;
}

}  // namespace

DomainMap domain_map(const GaitParams& params, Domain domain) {
  params.validate();
  DomainMap map;
  map.domain = domain;
  const double T = domain_duration(params, domain);
  if (T <= kZeroDuration) {
    map.duration = 0.0;
    return map;  // identity flow, no input authority
  }
  map.duration = T;
  map.A = mat_exp_closed(params, T);
  // The third component comes out exactly 1: the zmp advances by precisely
  // the commanded travel.
  map.B = flow_input_integral(params, T) / T;
  return map;
}

ResetMap reset_map(const GaitParams& params, Edge edge) {
  params.validate();
  ResetMap map;
  map.edge = edge;
  if (edge != Edge::kOAtoFA) return map;  // leg roles swap, state unchanged

  const double l = zmp_travel(params.mode, params.foot_length);
  map.input_gain = Vector3d(-1.0, 0.0, -1.0);
  map.offset = Vector3d(-l, 0.0, -l);
  if (params.t_oa <= kZeroDuration) {
    // With no double-support phase the zmp jumps to the new foot here
    // instead of flowing there.
    map.input_gain[2] = 0.0;
  }
  return map;
}

}  // namespace mlip
