#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "vdcsim/spatial.hpp"

using namespace vdcsim;
using testutil::Rng;

TEST_CASE("skew matrix reproduces the cross product and is antisymmetric") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const Vec3 r = rng.vec3(3.0);
    const Vec3 v = rng.vec3(3.0);
    const Mat3 s = skew(r);
    CHECK((s * v - r.cross(v)).norm() < 1e-14);
    CHECK((s + s.transpose()).norm() == 0.0);
  }
}

TEST_CASE("pure rotation offset by a lever arm produces tangential velocity") {
  FrameTransform u(Rotation3(), Vec3(1, 0, 0));
  SpatialVelocity va(Vec3::Zero(), Vec3(0, 0, 1));
  const SpatialVelocity vb = transform_velocity(u, va);
  CHECK((vb.linear - Vec3(0, 1, 0)).norm() < 1e-15);
  CHECK((vb.angular - Vec3(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("force transform picks up the moment of the offset") {
  FrameTransform u(Rotation3(), Vec3(1, 0, 0));
  SpatialForce fb(Vec3(0, 1, 0), Vec3::Zero());
  const SpatialForce fa = transform_force(u, fb);
  CHECK((fa.force - Vec3(0, 1, 0)).norm() < 1e-15);
  CHECK((fa.moment - Vec3(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("velocity and force transforms are power-conjugate") {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const FrameTransform u = rng.transform(2.0);
    const SpatialVelocity va = rng.velocity(3.0);
    const SpatialForce fb = rng.force(5.0);
    const double pa = dot(va, transform_force(u, fb));
    const double pb = dot(transform_velocity(u, va), fb);
    CHECK(testutil::rel_err(pa, pb) < 1e-12);
  }
}

TEST_CASE("transforms agree with their 6x6 matrix form") {
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const FrameTransform u = rng.transform(2.0);
    const Mat6 um = u.to_matrix();
    const SpatialVelocity va = rng.velocity();
    const SpatialForce fb = rng.force();
    CHECK((transform_velocity(u, va).stacked() - um.transpose() * va.stacked()).norm() <
          1e-12);
    CHECK((transform_force(u, fb).stacked() - um * fb.stacked()).norm() < 1e-12);
  }
}

TEST_CASE("composition matches matrix products and chains correctly") {
  Rng rng(14);
  for (int i = 0; i < 50; ++i) {
    const FrameTransform ab = rng.transform();
    const FrameTransform bc = rng.transform();
    const FrameTransform ac = compose(ab, bc);
    CHECK((ac.to_matrix() - ab.to_matrix() * bc.to_matrix()).norm() < 1e-12);

    const SpatialVelocity va = rng.velocity();
    const SpatialVelocity via_two = transform_velocity(bc, transform_velocity(ab, va));
    const SpatialVelocity direct = transform_velocity(ac, va);
    CHECK((via_two.stacked() - direct.stacked()).norm() < 1e-12);
  }
}

TEST_CASE("velocity transform inverts through the reversed pose") {
  Rng rng(15);
  for (int i = 0; i < 50; ++i) {
    const FrameTransform u = rng.transform();
    const FrameTransform inv(u.rotation.transpose(),
                             -(u.rotation.transpose() * u.offset));
    const SpatialVelocity va = rng.velocity();
    const SpatialVelocity back = transform_velocity(inv, transform_velocity(u, va));
    CHECK((back.stacked() - va.stacked()).norm() < 1e-12);
  }
}

TEST_CASE("non-orthonormal rotations are rejected, not repaired") {
  Mat3 bad = Mat3::Identity();
  bad(0, 0) = 1.0 + 1e-6;
  CHECK_THROWS_AS(Rotation3::from_matrix(bad), NumericError);

  Mat3 reflection = Mat3::Identity();
  reflection(2, 2) = -1.0;
  CHECK_THROWS_AS(Rotation3::from_matrix(reflection), NumericError);

  CHECK_NOTHROW(Rotation3::from_matrix(Rotation3::rot_z(0.7).matrix()));
}
