#include "mlip/gains.hpp"

#include <cmath>

namespace mlip {

const char* to_string(GainMethod method) {
  return method == GainMethod::kLQR ? "lqr" : "deadbeat";
}

double spectral_radius(const Matrix2d& m) {
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

GainSpec dlqr(const Matrix2d& A, const Vector2d& B, const Matrix2d& Q, double R) {
  if (!(R > 0)) throw std::invalid_argument("R must be > 0");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("Q must be symmetric");
  const Eigen::SelfAdjointEigenSolver<Matrix2d> qe(Q);
  if (qe.eigenvalues().minCoeff() < -1e-12)
    throw std::invalid_argument("Q must be positive semidefinite");

  constexpr int kMaxIterations = 5000;
  Matrix2d P = Q;
  bool converged = false;
  for (int i = 0; i < kMaxIterations; ++i) {
    const double gain_den = R + B.dot(P * B);
    const Matrix2d next =
        Q + A.transpose() * P * A -
        (A.transpose() * P * B) * (B.transpose() * P * A) / gain_den;
    const double delta = (next - P).cwiseAbs().maxCoeff();
    P = next;
    if (delta <= 1e-13 * std::max(1.0, P.cwiseAbs().maxCoeff())) {
      converged = true;
      break;
    }
  }
  // Residual of the defining equation, the actual acceptance for P.
  const double gain_den = R + B.dot(P * B);
  const Matrix2d residual =
      P - (Q + A.transpose() * P * A -
           (A.transpose() * P * B) * (B.transpose() * P * A) / gain_den);
  if (!converged || residual.cwiseAbs().maxCoeff() > 1e-10)
    throw GainSynthesisError(
        "Riccati iteration did not converge; is (A, B) stabilizable?");

  GainSpec spec;
  spec.method = GainMethod::kLQR;
  spec.Q = Q;
  spec.R = R;
  spec.riccati_p = P;
  spec.K = -(B.transpose() * P * A) / gain_den;
  spec.rho_cl = spectral_radius(A + B * spec.K);
  if (!(spec.rho_cl < 1.0))
    throw GainSynthesisError("LQR produced an unstable closed loop");
  return spec;
}

GainSpec deadbeat_gain(const Matrix2d& A, const Vector2d& B) {
  Matrix2d ctrb;
  ctrb.col(0) = B;
  ctrb.col(1) = A * B;
  const Eigen::JacobiSVD<Matrix2d> svd(ctrb, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smin = svd.singularValues()(1);
  const double smax = svd.singularValues()(0);
  if (!(smin > 0) || smax / smin > 1e12)
    throw GainSynthesisError("deadbeat: (A, B) not controllable, condition " +
                             std::to_string(smax / (smin > 0 ? smin : 0.0)));

  // Ackermann with both target eigenvalues at the origin; the selector row
  // is [0 1] C^{-1}, i.e. the transposed solve.
  const RowVector2d last_row =
      ctrb.transpose().fullPivLu().solve(Vector2d(0.0, 1.0)).transpose();
  GainSpec spec;
  spec.method = GainMethod::kDeadbeat;
  spec.K = -last_row * (A * A);
  spec.rho_cl = spectral_radius(A + B * spec.K);
  return spec;
}

InvariantBox invariant_box(const Matrix2d& A_cl, const DisturbanceBound& w) {
  if ((w.w_max.array() < 0).any())
    throw std::invalid_argument("disturbance bound must be nonnegative");
  if (!(spectral_radius(A_cl) < 1.0))
    throw GainSynthesisError("invariant_box requires a stable closed loop");

  const Matrix2d abs_a = A_cl.cwiseAbs();
  InvariantBox box;
  if (spectral_radius(abs_a) < 1.0) {
    Vector2d e = Vector2d::Zero();
    for (int i = 0; i < 10000; ++i) {
      const Vector2d next = abs_a * e + w.w_max;
      const double delta = (next - e).cwiseAbs().maxCoeff();
      e = next;
      if (delta <= 1e-15 * std::max(1.0, e.maxCoeff())) break;
    }
    box.e_max = e;
    box.corner_invariant = true;
    return box;
  }

  // Reachable-set outer bound: sum of |A_cl^k| w_max. Converges since the
  // signed powers contract even when |A_cl| does not.
  Vector2d e = Vector2d::Zero();
  Matrix2d power = Matrix2d::Identity();
  for (int k = 0; k < 50; ++k) {
    e += power.cwiseAbs() * w.w_max;
    power = A_cl * power;
    if (power.cwiseAbs().maxCoeff() < 1e-16) break;
  }
  if (power.cwiseAbs().maxCoeff() > 1e-6)
    throw GainSynthesisError(
        "invariant_box: power sum not settled after 50 terms");
  box.e_max = e;
  box.corner_invariant = false;
  return box;
}

}  // namespace mlip
