#include "mlip/s2s.hpp"

#include <cmath>

namespace mlip {

const char* to_string(Section section) {
  return section == Section::kUAEnd ? "UA_end" : "FA_end";
}

namespace {

struct CycleMaps {
  DomainMap fa, ua, oa;
  ResetMap switch_legs;  // double support -> flat foot
  double in_foot_travel = 0;
};

CycleMaps build_maps(const GaitParams& params) {
  CycleMaps m;
  m.fa = domain_map(params, Domain::kFA);
  m.ua = domain_map(params, Domain::kUA);
  m.oa = domain_map(params, Domain::kOA);
  m.switch_legs = reset_map(params, Edge::kOAtoFA);
  m.in_foot_travel = zmp_travel(params.mode, params.foot_length);
  return m;
}

void restrict_to_com_states(S2SDynamics* dyn) {
  dyn->A = dyn->A_full.topLeftCorner<2, 2>();
  dyn->B = dyn->B_full.head<2>();
  dyn->C = dyn->C_full.head<2>();
}

}  // namespace

S2SDynamics compose_s2s(const GaitParams& params) {
  const CycleMaps m = build_maps(params);
  S2SDynamics dyn;
  dyn.section = Section::kUAEnd;
  dyn.params = params;

  // Chain from one pivot-phase end to the next: double-support flow with
  // input u, leg switch (also carrying u), flat-foot flow with the in-foot
  // travel, pivot flow with zero travel. The in-foot travel term enters at
  // the end of the flat-foot flow, so only the pivot flow acts on it.
  dyn.A_full = m.ua.A * m.fa.A * m.oa.A;
  dyn.B_full = m.ua.A * m.fa.A * (m.oa.B + m.switch_legs.input_gain);
  dyn.C_full = m.ua.A * (m.fa.A * m.switch_legs.offset + m.fa.B * m.in_foot_travel);
  restrict_to_com_states(&dyn);
  return dyn;
}

S2SDynamics compose_s2s_at_fa_end(const GaitParams& params) {
  const CycleMaps m = build_maps(params);
  S2SDynamics dyn;
  dyn.section = Section::kFAEnd;
  dyn.params = params;

  dyn.A_full = m.fa.A * m.oa.A * m.ua.A;
  dyn.B_full = m.fa.A * (m.oa.B + m.switch_legs.input_gain);
  dyn.C_full = m.fa.A * m.switch_legs.offset + m.fa.B * m.in_foot_travel;
  restrict_to_com_states(&dyn);
  return dyn;
}

ReducedState s2s_step(const S2SDynamics& dyn, const ReducedState& x, double u) {
  return ReducedState::from_vec(dyn.A * x.vec() + dyn.B * u + dyn.C);
}

StructureReport validate_structure(const S2SDynamics& dyn) {
  constexpr double kTol = 1e-12;
  StructureReport report;
  auto add = [&](const std::string& name, double residual) {
    report.checks.push_back({name, residual, std::abs(residual) <= kTol});
  };
  add("A(3,3) = 1", dyn.A_full(2, 2) - 1.0);
  add("A(3,1) = 0", dyn.A_full(2, 0));
  add("A(3,2) = 0", dyn.A_full(2, 1));
  add("B(3) = 0", dyn.B_full(2));
  add("C(3) = 0", dyn.C_full(2));
  report.all_pass = true;
  for (const auto& c : report.checks) report.all_pass &= c.pass;
  return report;
}

}  // namespace mlip
