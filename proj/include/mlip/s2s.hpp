#pragma once

// Step-to-step dynamics: the affine Poincare map obtained by composing the
// per-domain flows and leg-switch resets over one full gait cycle. The
// section is either the end of the pivot phase (UA-, the default) or the
// end of the flat-foot phase (FA-, used for trajectory targets). At both
// sections the zmp sits exactly at the stance pivot, so the map restricts
// to the two CoM states.

#include <string>
#include <vector>

#include "mlip/model.hpp"

namespace mlip {

enum class Section { kUAEnd, kFAEnd };

const char* to_string(Section section);

struct S2SDynamics {
  Matrix3d A_full = Matrix3d::Identity();
  Vector3d B_full = Vector3d::Zero();
  Vector3d C_full = Vector3d::Zero();
  // Restriction to [com_pos, ang_mom]; valid because the third row of the
  // full map is (0, 0, 1) with zero input and offset.
  Matrix2d A = Matrix2d::Identity();
  Vector2d B = Vector2d::Zero();
  Vector2d C = Vector2d::Zero();
  Section section = Section::kUAEnd;
  GaitParams params;
};

// One structural identity of the composed map, with its residual.
struct StructureCheck {
  std::string name;
  double residual = 0;
  bool pass = false;
};

struct StructureReport {
  std::vector<StructureCheck> checks;
  bool all_pass = false;
};

// Composes the step map sampled at the end of the pivot phase
// (cycle order: double support, flat foot, pivot).
S2SDynamics compose_s2s(const GaitParams& params);

// Same cycle sampled at the end of the flat-foot phase
// (cycle order: pivot, double support, flat foot).
S2SDynamics compose_s2s_at_fa_end(const GaitParams& params);

// One discrete step x_{k+1} = A x_k + B u_k + C.
ReducedState s2s_step(const S2SDynamics& dyn, const ReducedState& x, double u);

// Checks that the composed map leaves the zmp coordinate invariant:
// A_full(3,3) = 1, B_full(3) = 0, C_full(3) = 0, at tolerance 1e-12.
StructureReport validate_structure(const S2SDynamics& dyn);

}  // namespace mlip
