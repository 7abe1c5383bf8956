#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "vdcsim/rigid_body.hpp"

using namespace vdcsim;
using testutil::Rng;
using testutil::rel_err;

TEST_CASE("point mass at the origin obeys Newton's law") {
  InertialParameters p;
  p.m = 2.5;
  const SpatialAcceleration dv(Vec3(1.0, -2.0, 0.5), Vec3::Zero());
  const SpatialVelocity v;
  const RigidBodyModel model = build_rigid_body_model(p, v, Vec3::Zero());
  const SpatialForce f = net_force(model, v, dv);
  CHECK((f.force - 2.5 * dv.linear).norm() < 1e-14);
  CHECK(f.moment.norm() < 1e-14);
}

TEST_CASE("unit inertia at rest maps acceleration through directly") {
  InertialParameters p;
  p.m = 1.0;
  p.I = Mat3::Identity();
  const RigidBodyModel model = build_rigid_body_model(p, SpatialVelocity(), Vec3::Zero());
  CHECK((model.M - Mat6::Identity()).norm() < 1e-15);
  SpatialAcceleration dv;
  dv.linear = Vec3(1, 0, 0);
  const SpatialForce f = net_force(model, SpatialVelocity(), dv);
  CHECK((f.stacked() - dv.stacked()).norm() < 1e-15);
}

TEST_CASE("net force agrees with the momentum-rate formulation") {
  // Independent oracle: f = dp + w x p, tau = dLm + w x Lm + v x p with
  // p = m v + w x h, Lm = I w + h x v.
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const InertialParameters p = rng.body();
    const SpatialVelocity v = rng.velocity(2.0);
    const SpatialAcceleration dv = SpatialAcceleration(rng.vec3(3.0), rng.vec3(3.0));
    const Vec3 g = rng.vec3(9.0);

    const Vec3 mom = p.m * v.linear + v.angular.cross(p.h);
    const Vec3 ang = p.I * v.angular + p.h.cross(v.linear);
    const Vec3 dmom = p.m * dv.linear + dv.angular.cross(p.h);
    const Vec3 dang = p.I * dv.angular + p.h.cross(dv.linear);

    Vec6 want;
    want.head<3>() = dmom + v.angular.cross(mom) - p.m * g;
    want.tail<3>() =
        dang + v.angular.cross(ang) + v.linear.cross(mom) - p.h.cross(g);

    const RigidBodyModel model = build_rigid_body_model(p, v, g);
    const SpatialForce got = net_force(model, v, dv);
    CHECK(rel_err(got.stacked(), want) < 1e-13);
  }
}

TEST_CASE("regressor identity: Y theta equals M dV + C V + G") {
  Rng rng(22);
  for (int i = 0; i < 500; ++i) {
    const InertialParameters p = rng.body();
    const SpatialVelocity v = rng.velocity(2.0);
    const SpatialAcceleration dv = SpatialAcceleration(rng.vec3(3.0), rng.vec3(3.0));
    const Vec3 g = rng.vec3(9.0);

    const RigidBodyModel model = build_rigid_body_model(p, v, g);
    const Vec6 direct = net_force(model, v, dv).stacked();
    const Vec6 via_regressor = regressor(dv, v, g) * p.theta();
    CHECK(rel_err(via_regressor, direct) < 1e-12);
  }
}

TEST_CASE("regressor at rest exposes only gravity columns") {
  Rng rng(23);
  const Vec3 g = Vec3(0, -9.81, 0);
  const Regressor y = regressor(SpatialAcceleration(), SpatialVelocity(), g);
  // mass column: -g on the force rows; h columns: skew(g) on moment rows.
  CHECK((y.block<3, 1>(0, 0) + g).norm() < 1e-15);
  CHECK((y.block<3, 3>(3, 1) - skew(g)).norm() < 1e-15);
  CHECK(y.block<3, 6>(3, 4).norm() == 0.0);
  CHECK(y.block<3, 6>(0, 4).norm() == 0.0);
  CHECK(y.block<3, 3>(0, 1).norm() == 0.0);
}

TEST_CASE("coriolis term produces no power at matched velocity") {
  Rng rng(24);
  for (int i = 0; i < 200; ++i) {
    const InertialParameters p = rng.body();
    const SpatialVelocity v = rng.velocity(3.0);
    const Mat6 c = coriolis_matrix(p, v.angular);
    const double power = v.stacked().dot(c * v.stacked());
    CHECK(std::abs(power) < 1e-10 * (1.0 + v.stacked().squaredNorm() * c.norm()));
  }
}

TEST_CASE("required net force is the regressor estimate plus damping") {
  Rng rng(25);
  const InertialParameters p = rng.body();
  const SpatialVelocity v = rng.velocity();
  const SpatialVelocity vr = rng.velocity();
  const Vec3 g(0, -9.81, 0);
  const Regressor y = regressor(SpatialAcceleration(), vr, g);
  const Mat6 ka = 7.0 * Mat6::Identity();
  const SpatialForce f = required_net_force(y, p.theta(), ka, vr, v);
  const Vec6 want = y * p.theta() + 7.0 * (vr - v).stacked();
  CHECK((f.stacked() - want).norm() < 1e-12);
}

TEST_CASE("virtual power flow is the inner product of error pairs") {
  Rng rng(26);
  const SpatialVelocity v = rng.velocity(), vr = rng.velocity();
  const SpatialForce f = rng.force(), fr = rng.force();
  const double want = (vr - v).stacked().dot((fr - f).stacked());
  CHECK(rel_err(vpf(vr, v, fr, f), want) < 1e-14);
}

TEST_CASE("mass matrix is symmetric and positive definite for consistent bodies") {
  Rng rng(27);
  for (int i = 0; i < 100; ++i) {
    const InertialParameters p = rng.body();
    const Mat6 m = mass_matrix(p);
    CHECK((m - m.transpose()).norm() < 1e-12);
    Eigen::LLT<Mat6> llt(m);
    CHECK(llt.info() == Eigen::Success);
  }
}
