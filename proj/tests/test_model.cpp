#include <doctest.h>

#include <cmath>

#include "mlip/model.hpp"
#include "support/oracles.hpp"

using namespace mlip;

namespace {

double max_abs_diff(const Matrix3d& a, const Matrix3d& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("closed-form exponential at t = 0 is the identity") {
  const Matrix3d e = mat_exp_closed(default_sagittal_gait(), 0.0);
  CHECK(max_abs_diff(e, Matrix3d::Identity()) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("closed-form exponential matches the series route") {
  GaitParams p = default_sagittal_gait();
  const Matrix3d a_ct = continuous_dynamics_matrix(p);
  CHECK(max_abs_diff(mat_exp_closed(p, 0.2),
                     mat_exp_series(a_ct, 0.2)) < 1e-12);
  CHECK(max_abs_diff(mat_exp_closed(p, 0.25),
                     mat_exp_series(a_ct, 0.25)) < 1e-12);
}

TEST_CASE("closed-form exponential keeps the zmp row trivial") {
  test::Rng rng(11);
  const GaitParams p = default_sagittal_gait();
  for (int i = 0; i < 20; ++i) {
    const Matrix3d e = mat_exp_closed(p, rng.uniform(0.0, 2.0));
    CHECK(e(2, 0) == 0.0);
    CHECK(e(2, 1) == 0.0);
    CHECK(e(2, 2) == 1.0);
  }
}

TEST_CASE("invalid heights are rejected") {
  GaitParams p = default_sagittal_gait();
  p.com_height = 0.0;
  CHECK_THROWS_AS(mat_exp_closed(p, 0.1), std::invalid_argument);
  p.com_height = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("series exponential basics") {
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
  CHECK((mat_exp_series(zero, 1.0) - Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = -1.7;
  const Eigen::MatrixXd e = mat_exp_series(diag, 1.0);
  CHECK(e(0, 0) == doctest::Approx(std::exp(0.3)).epsilon(1e-14));
  CHECK(e(1, 1) == doctest::Approx(std::exp(-1.7)).epsilon(1e-14));
  CHECK(std::abs(e(0, 1)) == 0.0);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(mat_exp_series(bad, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(mat_exp_series(Eigen::MatrixXd::Zero(9, 9), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(mat_exp_series(Eigen::MatrixXd::Zero(2, 3), 1.0),
                  std::invalid_argument);
}

TEST_CASE("zmp travel per walking mode") {
  CHECK(zmp_travel(WalkingMode::kHeelToToe, 0.16) == 0.16);
  CHECK(zmp_travel(WalkingMode::kFlatFooted, 0.16) == 0.0);
  CHECK(zmp_travel(WalkingMode::kToeToHeel, 0.16) == -0.16);
  CHECK_THROWS_AS(zmp_travel(WalkingMode::kHeelToToe, -0.1), std::invalid_argument);
}

TEST_CASE("zero-duration domains collapse to the identity") {
  GaitParams p = default_lateral_gait();  // t_fa = 0
  const DomainMap fa = domain_map(p, Domain::kFA);
  CHECK(max_abs_diff(fa.A, Matrix3d::Identity()) == 0.0);
  CHECK(fa.B.cwiseAbs().maxCoeff() == 0.0);
  CHECK(fa.duration == 0.0);
}

TEST_CASE("input map advances the zmp by exactly the commanded travel") {
  const GaitParams p = default_sagittal_gait();
  for (Domain d : {Domain::kFA, Domain::kUA, Domain::kOA}) {
    const DomainMap map = domain_map(p, d);
    CHECK(map.B[2] == 1.0);
    test::Rng rng(5);
    for (int i = 0; i < 10; ++i) {
      const ContinuousState xi{rng.uniform(-1, 1), rng.uniform(-2, 2),
                               rng.uniform(-0.3, 0.3)};
      const double travel = rng.uniform(-0.5, 0.5);
      const ContinuousState out = map.apply(xi, travel);
      CHECK(out.zmp_pos - xi.zmp_pos == doctest::Approx(travel).epsilon(1e-12));
    }
  }
}

TEST_CASE("pivot-phase flow with zero input leaves the zmp put") {
  const GaitParams p = default_sagittal_gait();
  const DomainMap ua = domain_map(p, Domain::kUA);
  const ContinuousState out = ua.apply({0.1, 0.4, 0.0}, 0.0);
  CHECK(out.zmp_pos == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("flow maps agree with an RK4 oracle and the series exponential") {
  test::Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    GaitParams p = test::random_valid_params(rng);
    p.t_oa = std::max(p.t_oa, 0.02);  // exercise all three flows
    for (Domain d : {Domain::kFA, Domain::kUA, Domain::kOA}) {
      const DomainMap map = domain_map(p, d);
      CHECK(max_abs_diff(map.A,
                         mat_exp_series(continuous_dynamics_matrix(p), map.duration))
            < 1e-12);
      const Vector3d xi(rng.uniform(-1, 1), rng.uniform(-2, 2), rng.uniform(-0.3, 0.3));
      const double travel = d == Domain::kUA ? 0.0 : rng.uniform(-0.5, 0.5);
      const Vector3d integrated =
          test::rk4_flow(p, xi, travel, map.duration, 1000);
      const Vector3d mapped = map.A * xi + map.B * travel;
      CHECK((integrated - mapped).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("reset maps") {
  GaitParams p = default_sagittal_gait();

  SUBCASE("non-switch edges are identities") {
    for (Edge e : {Edge::kUAtoOA, Edge::kFAtoUA}) {
      const ResetMap r = reset_map(p, e);
      CHECK(r.input_gain.cwiseAbs().maxCoeff() == 0.0);
      CHECK(r.offset.cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SUBCASE("leg switch subtracts the pivot displacement from both positions") {
    const ResetMap r = reset_map(p, Edge::kOAtoFA);
    const double u = 0.42;
    const double l = zmp_travel(p.mode, p.foot_length);
    const ContinuousState out = r.apply({0.1, 0.7, 0.3}, u);
    CHECK(out.com_pos == doctest::Approx(0.1 - u - l).epsilon(1e-15));
    CHECK(out.zmp_pos == doctest::Approx(0.3 - u - l).epsilon(1e-15));
    CHECK(out.ang_mom == 0.7);
  }

  SUBCASE("flat-footed mode has zero offset") {
    p.mode = WalkingMode::kFlatFooted;
    const ResetMap r = reset_map(p, Edge::kOAtoFA);
    CHECK(r.offset.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("zero double support moves the zmp transfer into the switch") {
    p.t_oa = 0.0;
    const ResetMap r = reset_map(p, Edge::kOAtoFA);
    CHECK(r.input_gain[0] == -1.0);
    CHECK(r.input_gain[1] == 0.0);
    CHECK(r.input_gain[2] == 0.0);
  }
}

TEST_CASE("zero flat-foot phase demands zero in-foot travel") {
  GaitParams p = default_sagittal_gait();
  p.t_fa = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.mode = WalkingMode::kFlatFooted;
  CHECK_NOTHROW(p.validate());
}
