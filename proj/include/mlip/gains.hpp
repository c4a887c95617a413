#pragma once

// Step-size feedback synthesis for the reduced step-to-step dynamics, plus
// an outer bound on where bounded model discrepancy can hold the error.
// Sign convention: u = u* + K (x - x*), so the closed loop is A + B K.

#include <stdexcept>

#include "mlip/model.hpp"

namespace mlip {

using Eigen::RowVector2d;

class GainSynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GainMethod { kLQR, kDeadbeat };

const char* to_string(GainMethod method);

struct GainSpec {
  RowVector2d K = RowVector2d::Zero();
  GainMethod method = GainMethod::kLQR;
  Matrix2d Q = Matrix2d::Identity();
  double R = 1.0;
  double rho_cl = 0.0;  // closed-loop spectral radius, < 1 by construction
  Matrix2d riccati_p = Matrix2d::Zero();  // LQR cost-to-go; zero for deadbeat
};

struct DisturbanceBound {
  Vector2d w_max = Vector2d::Zero();  // componentwise, nonnegative
};

struct InvariantBox {
  Vector2d e_max = Vector2d::Zero();
  // True when the componentwise iteration converged, in which case the box
  // maps into itself under worst-case |e| <= e_max, |w| <= w_max. When the
  // truncated reachable-set sum was used instead, the box bounds every
  // error reachable from zero but corner states may step outside.
  bool corner_invariant = true;
};

// Spectral radius of a 2x2 real matrix.
double spectral_radius(const Matrix2d& m);

// Discrete-time LQR via fixed-point Riccati iteration. Q must be symmetric
// PSD and R > 0; the returned gain satisfies rho(A + B K) < 1.
GainSpec dlqr(const Matrix2d& A, const Vector2d& B, const Matrix2d& Q, double R);

// Places both closed-loop eigenvalues at zero, so errors vanish two steps
// after the disturbance stops.
GainSpec deadbeat_gain(const Matrix2d& A, const Vector2d& B);

// Axis-aligned outer bound on the error set that bounded disturbances can
// sustain under e+ = A_cl e + w. Iterates e_max <- |A_cl| e_max + w_max
// when that contraction converges, otherwise sums |A_cl^k| w_max over the
// first 50 powers.
InvariantBox invariant_box(const Matrix2d& A_cl, const DisturbanceBound& w);

}  // namespace mlip
