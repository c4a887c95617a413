#include "mlip/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlip {

double VelocityProfile::at(double t) const {
  if (segments.empty()) return 0.0;
  double v = segments.front().v;
  for (const auto& seg : segments) {
    if (seg.t_start <= t) v = seg.v;
    else break;
  }
  return v;
}

VelocityProfile VelocityProfile::constant(double v) {
  VelocityProfile p;
  p.segments.push_back({0.0, v});
  return p;
}

VelocityProfile VelocityProfile::ramped(double v, double step_period,
                                        double preamble, double ramp) {
  VelocityProfile p;
  p.segments.push_back({0.0, 0.0});
  if (ramp > 0) {
    // One constant segment per step boundary inside the ramp window keeps
    // the profile piecewise-constant while tracking the linear ramp.
    for (double t = step_period * std::ceil(preamble / step_period);
         t < preamble + ramp; t += step_period) {
      if (t <= preamble) continue;
      p.segments.push_back({t, v * (t - preamble) / ramp});
    }
  }
  p.segments.push_back({preamble + ramp, v});
  return p;
}

void Scenario::validate() const {
  params.validate();
  if (!(plant.com_height > 0))
    throw std::invalid_argument("plant com_height must be > 0");
  if (plant.kind == PlantKind::kExact) {
    if (plant.com_height != params.com_height)
      throw std::invalid_argument("exact plant must use the model com_height");
    if (plant.zmp_rate_limit || plant.zmp_lag != 0.0)
      throw std::invalid_argument("exact plant admits no zmp tracking defects");
  }
  if (plant.zmp_rate_limit && !(*plant.zmp_rate_limit > 0))
    throw std::invalid_argument("zmp_rate_limit must be > 0");
  if (plant.zmp_lag < 0) throw std::invalid_argument("zmp_lag must be >= 0");
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
  for (double T : {params.t_fa, params.t_ua, params.t_oa})
    if (T > kZeroDuration && dt > T / 10.0 + 1e-15)
      throw std::invalid_argument("dt must be at most a tenth of each domain");
  if (step_size_limit && !(*step_size_limit > 0))
    throw std::invalid_argument("step_size_limit must be > 0");
  for (const auto& ev : disturbances)
    if (!(ev.duration > 0))
      throw std::invalid_argument("disturbance duration must be > 0");
  if (command.segments.empty())
    throw std::invalid_argument("velocity command must have a segment");
  for (size_t i = 1; i < command.segments.size(); ++i)
    if (command.segments[i].t_start <= command.segments[i - 1].t_start)
      throw std::invalid_argument("velocity segments must be strictly ordered");
  if (command.segments.front().t_start > 0)
    throw std::invalid_argument("velocity command must cover t = 0");
  if (!initial_error.allFinite() || !std::isfinite(p2_width))
    throw std::invalid_argument("non-finite scenario field");
}

ContinuousState integrate_domain(const ContinuousState& start,
                                 const PlantSpec& plant, double gravity,
                                 const DomainInputs& inputs, double dt,
                                 const std::function<double(double)>& external_accel,
                                 double t0, std::vector<TraceSample>* sink,
                                 double u_cmd_for_log) {
  if (!(plant.com_height > 0))
    throw std::invalid_argument("plant com_height must be > 0");
  if (!(dt > 0)) throw std::invalid_argument("dt must be > 0");
  const double T = inputs.duration;
  if (T <= kZeroDuration) return start;
  if (dt > T / 10.0 + 1e-15)
    throw std::invalid_argument("dt must be at most a tenth of the domain");

  const int n = static_cast<int>(std::ceil(T / dt - 1e-12));
  const double h = T / n;
  const double nominal_rate = inputs.travel / T;
  const double zmp_from = start.zmp_pos;

  auto zmp_rate = [&](double tau, double zmp) {
    double rate = nominal_rate;
    if (plant.zmp_lag > 0)
      rate = (zmp_from + nominal_rate * tau - zmp) / plant.zmp_lag;
    if (plant.zmp_rate_limit)
      rate = std::clamp(rate, -*plant.zmp_rate_limit, *plant.zmp_rate_limit);
    return rate;
  };
  auto deriv = [&](const Vector3d& x, double tau) {
    const double a = external_accel ? external_accel(t0 + tau) : 0.0;
    return Vector3d(x[1] / plant.com_height,
                    gravity * (x[0] - x[2]) + a,
                    zmp_rate(tau, x[2]));
  };

  Vector3d x = start.vec();
  for (int i = 0; i < n; ++i) {
    const double tau = h * i;
    if (sink)
      sink->push_back({t0 + tau, inputs.domain, x[0], x[1], x[2], u_cmd_for_log});
    const Vector3d k1 = deriv(x, tau);
    const Vector3d k2 = deriv(x + 0.5 * h * k1, tau + 0.5 * h);
    const Vector3d k3 = deriv(x + 0.5 * h * k2, tau + 0.5 * h);
    const Vector3d k4 = deriv(x + h * k3, tau + h);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return ContinuousState::from_vec(x);
}

namespace {

bool out_of_envelope(const ContinuousState& xi) {
  return !(std::abs(xi.com_pos) <= 10.0) || !(std::abs(xi.ang_mom) <= 100.0);
}

OrbitSpec orbit_for(const S2SDynamics& dyn, const Scenario& sc, double v) {
  if (sc.orbit_kind == OrbitKind::kP1) return p1_orbit(dyn, v);
  return p2_orbit(dyn, v, sc.p2_width + v * dyn.params.step_period());
}

}  // namespace

StepTrace simulate(const Scenario& sc) {
  sc.validate();
  const S2SDynamics dyn = compose_s2s(sc.params);
  if (!(spectral_radius(dyn.A + dyn.B * sc.gains.K) < 1.0))
    throw GainSynthesisError("gains do not stabilize the step-to-step model");

  const GaitParams& gp = sc.params;
  const double T = gp.step_period();
  const double l = zmp_travel(gp.mode, gp.foot_length);
  const ResetMap switch_legs = reset_map(gp, Edge::kOAtoFA);

  auto fext = [&](double t) {
    double a = 0.0;
    for (const auto& ev : sc.disturbances)
      if (t >= ev.t_start && t < ev.t_start + ev.duration) a += ev.accel;
    return a;
  };
  auto push_overlaps = [&](double a, double b) {
    for (const auto& ev : sc.disturbances)
      if (ev.t_start < b && ev.t_start + ev.duration > a) return true;
    return false;
  };

  StepTrace trace;
  trace.step_period = T;
  for (const auto& ev : sc.disturbances)
    trace.events.push_back({ev.t_start, "push", std::to_string(ev.accel) + " m/s^2 for " +
                                                    std::to_string(ev.duration) + " s"});

  const OrbitSpec orbit0 = orbit_for(dyn, sc, sc.command.at(0.0));
  ContinuousState xi{orbit0.x_star[0].com_pos + sc.initial_error[0],
                     orbit0.x_star[0].ang_mom + sc.initial_error[1], 0.0};
  double pivot_world = 0.0;

  for (int k = 0; k < sc.n_steps; ++k) {
    const double t_k = k * T;
    const double v = sc.command.at(t_k);
    const OrbitSpec orbit = orbit_for(dyn, sc, v);
    const int idx = sc.orbit_kind == OrbitKind::kP2 ? k % 2 : 0;

    StepRecord rec;
    rec.k = k;
    rec.state = ReducedState{xi.com_pos, xi.ang_mom};
    rec.v_cmd = v;
    rec.pivot_world = pivot_world;
    double u = orbit.u_star[idx] +
               sc.gains.K.dot(rec.state.vec() - orbit.x_star[idx].vec());
    if (sc.step_size_limit && std::abs(u) > *sc.step_size_limit) {
      u = std::clamp(u, -*sc.step_size_limit, *sc.step_size_limit);
      rec.saturated = true;
    }
    rec.u = u;
    rec.pushed = push_overlaps(t_k, t_k + T);

    xi = integrate_domain(xi, sc.plant, gp.gravity, {Domain::kOA, u, gp.t_oa},
                          sc.dt, fext, t_k, &trace.samples, u);
    trace.events.push_back({t_k + gp.t_oa, "transition", "OA->FA"});
    xi = switch_legs.apply(xi, u);
    xi = integrate_domain(xi, sc.plant, gp.gravity, {Domain::kFA, l, gp.t_fa},
                          sc.dt, fext, t_k + gp.t_oa, &trace.samples, u);
    trace.events.push_back({t_k + gp.t_oa + gp.t_fa, "transition", "FA->UA"});
    xi = integrate_domain(xi, sc.plant, gp.gravity, {Domain::kUA, 0.0, gp.t_ua},
                          sc.dt, fext, t_k + gp.t_oa + gp.t_fa, &trace.samples, u);
    trace.events.push_back({t_k + T, "transition", "UA->OA"});

    rec.w = Vector2d(xi.com_pos, xi.ang_mom) -
            (dyn.A * rec.state.vec() + dyn.B * u + dyn.C);
    trace.steps.push_back(rec);
    pivot_world += u + l;

    if (out_of_envelope(xi)) {
      trace.diverged = true;
      trace.events.push_back({t_k + T, "divergence",
                              "state left the |p| <= 10, |L| <= 100 envelope"});
      break;
    }
  }
  const double t_end = trace.steps.size() * T;
  trace.samples.push_back({t_end, Domain::kOA, xi.com_pos, xi.ang_mom, xi.zmp_pos,
                           trace.steps.empty() ? 0.0 : trace.steps.back().u});
  return trace;
}

Vector2d observed_disturbance_bound(const StepTrace& trace, bool exclude_pushed,
                                    int skip) {
  Vector2d bound = Vector2d::Zero();
  for (const auto& s : trace.steps) {
    if (s.k < skip) continue;
    if (exclude_pushed && s.pushed) continue;
    bound = bound.cwiseMax(s.w.cwiseAbs());
  }
  return bound;
}

double mean_step_velocity(const StepTrace& trace, int last_n) {
  if (trace.steps.empty() || trace.step_period <= 0) return 0.0;
  const int n = static_cast<int>(trace.steps.size());
  const int from = std::max(0, n - last_n);
  double sum = 0.0;
  for (int i = from; i < n; ++i) sum += trace.steps[i].u;
  return sum / ((n - from) * trace.step_period);
}

double mean_ground_speed(const StepTrace& trace, int last_n) {
  const int n = static_cast<int>(trace.steps.size());
  if (n < 2 || trace.step_period <= 0) return 0.0;
  const int from = std::max(0, n - 1 - last_n);
  const auto& a = trace.steps[from];
  const auto& b = trace.steps[n - 1];
  const double world_a = a.pivot_world + a.state.com_pos;
  const double world_b = b.pivot_world + b.state.com_pos;
  return (world_b - world_a) / ((b.k - a.k) * trace.step_period);
}

std::vector<TraceSample> tail_samples(const StepTrace& trace, int last_n) {
  const double t_from = std::max(
      0.0, (static_cast<double>(trace.steps.size()) - last_n) * trace.step_period);
  std::vector<TraceSample> out;
  for (const auto& s : trace.samples)
    if (s.t >= t_from) {
      TraceSample shifted = s;
      shifted.t -= t_from;
      out.push_back(shifted);
    }
  return out;
}

std::vector<SweepEntry> velocity_sweep(const Scenario& base,
                                       const std::vector<double>& speeds) {
  std::vector<SweepEntry> out;
  const S2SDynamics dyn = compose_s2s(base.params);
  const Matrix2d a_cl = dyn.A + dyn.B * base.gains.K;
  const double T = base.params.step_period();
  const int warmup =
      static_cast<int>(std::ceil(7.0 / T)) + 2;  // preamble + ramp + margin

  for (double v : speeds) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite sweep speed");
    Scenario sc = base;
    sc.command = VelocityProfile::ramped(v, T);
    SweepEntry entry;
    entry.v_cmd = v;
    entry.trace = simulate(sc);
    entry.diverged = entry.trace.diverged;
    entry.mean_velocity = mean_step_velocity(entry.trace, 10);
    if (!entry.trace.steps.empty()) {
      const OrbitSpec orbit = p1_orbit(dyn, v);
      const auto& last = entry.trace.steps.back();
      entry.terminal_error =
          (last.state.vec() - orbit.x_star[0].vec()).cwiseAbs().maxCoeff();
    }
    entry.w_max = observed_disturbance_bound(entry.trace, false, warmup);
    entry.e_box = invariant_box(a_cl, {entry.w_max}).e_max;
    entry.velocity_band = base.gains.K.cwiseAbs().dot(entry.e_box) / T;
    entry.within_band =
        std::abs(entry.mean_velocity - v) <= entry.velocity_band + 1e-9;
    out.push_back(std::move(entry));
  }
  return out;
}

PushResult push_experiment(const Scenario& base,
                           const std::vector<ForceEvent>& pushes) {
  Scenario sc = base;
  sc.disturbances.insert(sc.disturbances.end(), pushes.begin(), pushes.end());
  const double total = sc.n_steps * sc.params.step_period();
  for (const auto& p : pushes)
    if (p.t_start < 0 || p.t_start + p.duration > total)
      throw std::invalid_argument("push outside the simulated window");

  PushResult result;
  result.trace = simulate(sc);

  const S2SDynamics dyn = compose_s2s(sc.params);
  const Matrix2d a_cl = dyn.A + dyn.B * sc.gains.K;
  // Non-push residual bound, floored so an exact plant does not hand us a
  // noise-level recovery target.
  result.w_max = observed_disturbance_bound(result.trace, true, 0)
                     .cwiseMax(Vector2d::Constant(1e-6));
  result.e_box = invariant_box(a_cl, {result.w_max}).e_max;
  const Vector2d inflated = 1.1 * result.e_box;

  const double T = sc.params.step_period();
  result.all_recovered = !result.trace.diverged;
  for (const auto& p : pushes) {
    PushRecovery rec;
    rec.push = p;
    for (const auto& s : result.trace.steps) {
      const double t0 = s.k * T;
      if (p.t_start < t0 + T && p.t_start + p.duration > t0) rec.push_step = s.k;
    }
    if (rec.push_step >= 0) {
      for (const auto& s : result.trace.steps) {
        if (s.k <= rec.push_step) continue;
        const OrbitSpec orbit = orbit_for(dyn, sc, s.v_cmd);
        const int idx = sc.orbit_kind == OrbitKind::kP2 ? s.k % 2 : 0;
        const Vector2d e = s.state.vec() - orbit.x_star[idx].vec();
        if ((e.cwiseAbs().array() <= inflated.array()).all()) {
          rec.recovery_steps = s.k - rec.push_step;
          rec.recovered = true;
          break;
        }
      }
    }
    result.all_recovered &= rec.recovered;
    result.recoveries.push_back(rec);
  }
  return result;
}

std::vector<MaxSpeedEntry> max_speed_search(const Scenario& base,
                                            const std::vector<WalkingMode>& modes,
                                            double u_limit) {
  if (!(u_limit > 0)) throw std::invalid_argument("u_limit must be > 0");
  constexpr double kResolution = 0.01;
  constexpr double kSpeedCap = 20.0;

  std::vector<MaxSpeedEntry> out;
  for (WalkingMode mode : modes) {
    Scenario sc = base;
    sc.params.mode = mode;
    sc.params.validate();
    sc.step_size_limit = u_limit;
    sc.n_steps = 50;
    const double T = sc.params.step_period();

    auto run = [&](double v) {
      sc.command = VelocityProfile::ramped(v, T);
      return simulate(sc);
    };
    auto stable = [&](double v) {
      const StepTrace trace = run(v);
      if (trace.diverged || static_cast<int>(trace.steps.size()) < sc.n_steps)
        return false;
      for (size_t i = trace.steps.size() - 10; i < trace.steps.size(); ++i)
        if (trace.steps[i].saturated) return false;
      return true;
    };

    MaxSpeedEntry entry;
    entry.mode = mode;
    if (!stable(0.0)) {
      out.push_back(entry);
      continue;
    }
    double lo = 0.0;
    double hi = std::max(0.5, u_limit / T);
    while (hi < kSpeedCap && stable(hi)) {
      lo = hi;
      hi *= 2.0;
    }
    if (hi >= kSpeedCap && stable(kSpeedCap)) {
      lo = kSpeedCap;  // the limit never bound at any tested speed
    } else {
      while (hi - lo > kResolution) {
        const double mid = 0.5 * (lo + hi);
        (stable(mid) ? lo : hi) = mid;
      }
    }
    entry.found = true;
    entry.v_cmd_max = lo;
    entry.ground_speed = mean_ground_speed(run(lo), 10);
    out.push_back(entry);
  }
  return out;
}

}  // namespace mlip
