#pragma once

// Test-side reference computations, kept independent of the library code
// paths they are used to check.

#include <cstdint>
#include <random>

#include "mlip/model.hpp"

namespace mlip::test {

// Plain RK4 of the ideal pendulum-with-zmp dynamics over one domain with a
// constant zmp rate. Used as the flow oracle against the closed forms.
inline Vector3d rk4_flow(const GaitParams& gp, Vector3d xi, double travel,
                         double duration, int substeps) {
  if (duration <= 0) return xi;
  const double h = duration / substeps;
  const double rate = travel / duration;
  auto f = [&](const Vector3d& x) {
    return Vector3d(x[1] / gp.com_height, gp.gravity * (x[0] - x[2]), rate);
  };
  for (int i = 0; i < substeps; ++i) {
    const Vector3d k1 = f(xi);
    const Vector3d k2 = f(xi + 0.5 * h * k1);
    const Vector3d k3 = f(xi + 0.5 * h * k2);
    const Vector3d k4 = f(xi + h * k3);
    xi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return xi;
}

// One full cycle from the pivot-phase end, chaining the per-domain flow and
// reset maps directly: transfer flow with u, leg switch with u, flat-foot
// flow with the in-foot travel, pivot flow with zero input.
inline Vector3d chained_cycle(const GaitParams& gp, const Vector3d& xi0, double u) {
  const DomainMap oa = domain_map(gp, Domain::kOA);
  const DomainMap fa = domain_map(gp, Domain::kFA);
  const DomainMap ua = domain_map(gp, Domain::kUA);
  const ResetMap switch_legs = reset_map(gp, Edge::kOAtoFA);
  const double l = zmp_travel(gp.mode, gp.foot_length);
  Vector3d xi = oa.A * xi0 + oa.B * u;
  xi += switch_legs.input_gain * u + switch_legs.offset;
  xi = fa.A * xi + fa.B * l;
  return ua.A * xi;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen); }
};

inline GaitParams random_valid_params(Rng& rng) {
  GaitParams p;
  p.com_height = rng.uniform(0.5, 1.2);
  p.foot_length = rng.uniform(0.0, 0.25);
  switch (rng.pick(3)) {
    case 0: p.mode = WalkingMode::kHeelToToe; break;
    case 1: p.mode = WalkingMode::kToeToHeel; break;
    default: p.mode = WalkingMode::kFlatFooted; break;
  }
  p.t_fa = rng.uniform(0.05, 0.4);
  p.t_ua = rng.uniform(0.05, 0.4);
  // Zero-duration weight transfer shows up in practice, so draw it often.
  p.t_oa = rng.pick(4) == 0 ? 0.0 : rng.uniform(0.02, 0.2);
  p.validate();
  return p;
}

}  // namespace mlip::test
