#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "test_geometry.hpp"
#include <vdcsim/force_chain.hpp>

using namespace vdcsim;
using testutil::demo_geometry;
using testutil::potential_energy;
using testutil::random_joint_state;
using testutil::random_static_state;
using testutil::rel_err;

namespace {

BodyForceSet random_net(testutil::Rng& rng, double scale = 1.0) {
  BodyForceSet net;
  for (FrameId f : kBodyFrames) net.of(f) = rng.force(scale);
  return net;
}

const FrameTransform& pt(const ChainState& c, FrameId f) {
  return c.parent_transform[frame_index(f)];
}

// The wrist cascade written out a second way: each body's wrench pushed to
// B4 through its own explicitly composed transform.
SpatialForce wrist_by_hand(const SpatialForce& f_t4, const BodyForceSet& net,
                           const ChainState& c) {
  const FrameTransform u_b4_a4 = pt(c, FrameId::A4);
  const FrameTransform u_b4_c4 = compose(u_b4_a4, pt(c, FrameId::C4));
  const FrameTransform u_b4_d4 = compose(u_b4_c4, pt(c, FrameId::D4));
  const FrameTransform u_b4_t4 = compose(u_b4_d4, pt(c, FrameId::T4));
  return net.of(FrameId::B4) + transform_force(u_b4_a4, net.of(FrameId::A4)) +
         transform_force(u_b4_c4, net.of(FrameId::C4)) +
         transform_force(u_b4_d4, net.of(FrameId::D4)) +
         transform_force(u_b4_t4, f_t4);
}

struct WristTorques {
  double t4, t5, t6;
};

// Joint-axis components of the wrenches crossing each wrist joint.
WristTorques wrist_torques(const SpatialForce& f_t4, const BodyForceSet& net,
                           const ChainState& c) {
  const SpatialForce f_d4 =
      net.of(FrameId::D4) + transform_force(pt(c, FrameId::T4), f_t4);
  const SpatialForce f_c4 =
      net.of(FrameId::C4) + transform_force(pt(c, FrameId::D4), f_d4);
  const SpatialForce f_a4 =
      net.of(FrameId::A4) + transform_force(pt(c, FrameId::C4), f_c4);
  return {f_a4.moment(0), f_c4.moment(2), f_d4.moment(0)};
}

}  // namespace

TEST_CASE("force chain: all-zero inputs give zero everywhere") {
  const HdrmGeometry g = demo_geometry();
  testutil::Rng rng(301);
  const ChainState c = propagate_chain(g, random_static_state(rng));
  const BodyForceSet zero;
  const ForceChainResult r = solve_actuator_forces(zero, SpatialForce{}, c, g);
  CHECK(r.f_b4.stacked().norm() == doctest::Approx(0.0));
  CHECK(r.f_bc3.stacked().norm() == doctest::Approx(0.0));
  CHECK(r.f_bc2.stacked().norm() == doctest::Approx(0.0));
  CHECK(r.f_t1.stacked().norm() == doctest::Approx(0.0));
  CHECK(r.f.f1 == doctest::Approx(0.0));
  CHECK(r.f.f2 == doctest::Approx(0.0));
  CHECK(r.f.f3 == doctest::Approx(0.0));
}

TEST_CASE("force chain: wrist passthrough is the composed transform") {
  const HdrmGeometry g = demo_geometry();
  testutil::Rng rng(302);
  for (int trial = 0; trial < 20; ++trial) {
    const ChainState c = propagate_chain(g, random_joint_state(rng));
    const SpatialForce f_t4 = rng.force(3.0);
    const BodyForceSet zero;
    const SpatialForce got = wrist_propagate(f_t4, zero, c);
    const FrameTransform u_b4_t4 =
        compose(compose(compose(pt(c, FrameId::A4), pt(c, FrameId::C4)),
                        pt(c, FrameId::D4)),
                pt(c, FrameId::T4));
    CHECK(rel_err(got.stacked(), transform_force(u_b4_t4, f_t4).stacked()) <
          1e-12);
  }
}

TEST_CASE("force chain: wrist cascade matches the hand expansion") {
  const HdrmGeometry g = demo_geometry();
  testutil::Rng rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const ChainState c = propagate_chain(g, random_joint_state(rng));
    const BodyForceSet net = random_net(rng, 2.0);
    const SpatialForce f_t4 = rng.force(2.0);
    CHECK(rel_err(wrist_propagate(f_t4, net, c).stacked(),
                  wrist_by_hand(f_t4, net, c).stacked()) < 1e-12);
  }
}

TEST_CASE("force chain: loop sums carry each body through its own chain") {
  const HdrmGeometry g = demo_geometry();
  testutil::Rng rng(304);
  const ChainState c = propagate_chain(g, random_joint_state(rng));

  // Single-term probes of the five-term tilt sum.
  BodyForceSet only_d3;
  only_d3.of(FrameId::D3) = rng.force(2.0);
  const FrameTransform u_bc3_d3 =
      compose(pt(c, FrameId::C3), pt(c, FrameId::D3));
  CHECK(rel_err(
            tilt_propagate(SpatialForce{}, only_d3, c).stacked(),
            transform_force(u_bc3_d3, only_d3.of(FrameId::D3)).stacked()) <
        1e-12);

  BodyForceSet only_bc3;
  only_bc3.of(FrameId::Bc3) = rng.force(2.0);
  CHECK(rel_err(tilt_propagate(SpatialForce{}, only_bc3, c).stacked(),
                only_bc3.of(FrameId::Bc3).stacked()) < 1e-12);

  // Downstream wrench enters through the link tip: U_A3 U_T13 U_B4.
  const SpatialForce f_b4 = rng.force(2.0);
  const BodyForceSet zero;
  const FrameTransform u_bc3_b4 = compose(
      compose(pt(c, FrameId::A3), pt(c, FrameId::T13)), pt(c, FrameId::B4));
  CHECK(rel_err(tilt_propagate(f_b4, zero, c).stacked(),
                transform_force(u_bc3_b4, f_b4).stacked()) < 1e-12);

  // Lift mirror: single cylinder term.
  BodyForceSet only_c2;
  only_c2.of(FrameId::C2) = rng.force(2.0);
  CHECK(rel_err(
            lift_propagate(SpatialForce{}, only_c2, c).stacked(),
            transform_force(pt(c, FrameId::C2), only_c2.of(FrameId::C2))
                .stacked()) < 1e-12);
}

TEST_CASE("force chain: lift line force matches the displayed terms") {
  const HdrmGeometry g = demo_geometry();
  testutil::Rng rng(305);
  const ChainState c = propagate_chain(g, random_joint_state(rng));
  const double s2 = std::sin(c.lift.q2);
  const double t2 = std::tan(c.lift.q2);
  const double len = c.lift.length();

  // Pure axial rod load: first term only.
  BodyForceSet net;
  net.of(FrameId::D2) = SpatialForce(Vec3(7.5, 0.0, 0.0), Vec3::Zero());
  CHECK(lift_actuator_force(net, SpatialForce{}, c, g) ==
        doctest::Approx(7.5));

  // Pure hinge-link moment: second term with the attachment radius L1.
  net = BodyForceSet{};
  net.of(FrameId::A2) = SpatialForce(Vec3::Zero(), Vec3(0.0, 0.0, 3.0));
  CHECK(lift_actuator_force(net, SpatialForce{}, c, g) ==
        doctest::Approx(-3.0 / (g.lift.L1 * s2)));

  // Pure cylinder moment: third term over the closing side.
  net = BodyForceSet{};
  net.of(FrameId::C2) = SpatialForce(Vec3::Zero(), Vec3(0.0, 0.0, 2.0));
  CHECK(lift_actuator_force(net, SpatialForce{}, c, g) ==
        doctest::Approx(-2.0 / (len * t2)));

  // Transverse rod force: moment arm is the closing side minus the
  // line-of-action offset (zero by default).
  net = BodyForceSet{};
  net.of(FrameId::D2) = SpatialForce(Vec3(0.0, 4.0, 0.0), Vec3::Zero());
  CHECK(lift_actuator_force(net, SpatialForce{}, c, g) ==
        doctest::Approx(-4.0 * (len - g.lift.lc) / (len * t2)));
}

TEST_CASE("force chain: base force and moment radius") {
  // Pure yaw moment M with r_B = 0.5 gives f1 = 2M.
  SpatialForce net_t1(Vec3::Zero(), Vec3(0.0, 3.0, 0.0));
  const auto [f_t1, f1] =
      base_force(SpatialForce{}, net_t1, FrameTransform{}, 0.5);
  CHECK(f1 == doctest::Approx(6.0));
  CHECK(rel_err(f_t1.stacked(), net_t1.stacked()) < 1e-15);
  CHECK_THROWS_AS(base_force(SpatialForce{}, net_t1, FrameTransform{}, 0.0),
                  ConfigError);
}

TEST_CASE("force chain: actuator powers balance the carried loads exactly") {
  // The defining property of the extraction: for any wrench set, any tool
  // load and any sensor rates, the actuator powers equal the power absorbed
  // by the net forces plus the power delivered at the tool.
  const HdrmGeometry g = demo_geometry();
  testutil::Rng rng(306);
  for (int trial = 0; trial < 200; ++trial) {
    const JointState js = random_joint_state(rng);
    const ChainState c = propagate_chain(g, js);
    const BodyForceSet net = random_net(rng, 2.0);
    const SpatialForce f_t4 = rng.force(2.0);

    const ForceChainResult r = solve_actuator_forces(net, f_t4, c, g);
    const WristTorques w = wrist_torques(f_t4, net, c);
    const double lhs = r.f.f1 * g.base_radius * js.dzeta[0] +
                       r.f.f2 * c.lift_rates.dx + r.f.f3 * c.tilt_rates.dx +
                       w.t4 * js.dzeta[3] + w.t5 * js.dzeta[4] +
                       w.t6 * js.dzeta[5];

    double rhs = dot(c.velocity_of(FrameId::T4), f_t4);
    double scale = std::abs(rhs);
    for (FrameId f : kBodyFrames) {
      const double p = dot(c.velocity_of(f), net.of(f));
      rhs += p;
      scale += std::abs(p);
    }
    CHECK(std::abs(lhs - rhs) < 1e-11 * (scale + 1.0));
  }
}

TEST_CASE("force chain: static line forces equal the potential gradient") {
  const HdrmGeometry g = demo_geometry();
  const BodySet bodies = default_body_set();
  testutil::Rng rng(307);
  const double h = 1e-6;
  for (int trial = 0; trial < 40; ++trial) {
    const JointState js = random_static_state(rng);
    const ChainState c = propagate_chain(g, js);
    const BodyForceSet net = static_net_forces(bodies, c, g.gravity);
    const ForceChainResult r = solve_actuator_forces(net, SpatialForce{}, c, g);

    // Oracle: finite differences of the potential against each actuator
    // coordinate, positions only.
    for (int axis : {1, 2}) {
      JointState plus = js;
      JointState minus = js;
      plus.zeta[axis] += h;
      minus.zeta[axis] -= h;
      const double du = potential_energy(bodies, g, plus) -
                        potential_energy(bodies, g, minus);
      const ChainState cp = propagate_chain(g, plus);
      const ChainState cm = propagate_chain(g, minus);
      const double dx = axis == 1 ? cp.lift.x - cm.lift.x
                                  : cp.tilt.x - cm.tilt.x;
      const double oracle = du / dx;
      const double got = axis == 1 ? r.f.f2 : r.f.f3;
      CHECK(rel_err(got, oracle) < 1e-4);
    }

    // Yaw does not change the potential, so the base force vanishes.
    CHECK(std::abs(r.f.f1) < 1e-6);
  }
}

TEST_CASE("force chain: base force balances the world yaw moment of a tool "
          "load") {
  const HdrmGeometry g = demo_geometry();
  const BodySet bodies = default_body_set();
  testutil::Rng rng(308);
  for (int trial = 0; trial < 40; ++trial) {
    const JointState js = random_static_state(rng);
    const ChainState c = propagate_chain(g, js);
    const BodyForceSet net = static_net_forces(bodies, c, g.gravity);
    const SpatialForce f_t4 = rng.force(5.0);
    const ForceChainResult r = solve_actuator_forces(net, f_t4, c, g);

    const Mat3 r_t4 = c.world_of(FrameId::T4).rotation.matrix();
    const Vec3 f_world = r_t4 * f_t4.force;
    const Vec3 tau_world = r_t4 * f_t4.moment;
    const Vec3 p_rel =
        c.world_of(FrameId::T4).offset - c.world_of(FrameId::T1).offset;
    const double m_y = p_rel.cross(f_world)(1) + tau_world(1);
    CHECK(rel_err(r.f.f1 * g.base_radius, m_y, 1e-9) < 1e-10);
  }
}

TEST_CASE("force chain: outputs are linear in the inputs") {
  const HdrmGeometry g = demo_geometry();
  testutil::Rng rng(309);
  for (int trial = 0; trial < 20; ++trial) {
    const ChainState c = propagate_chain(g, random_joint_state(rng));
    const BodyForceSet n1 = random_net(rng);
    const BodyForceSet n2 = random_net(rng);
    const SpatialForce t1 = rng.force();
    const SpatialForce t2 = rng.force();
    const double a = 0.7, b = -1.3;

    BodyForceSet mix;
    for (FrameId f : kBodyFrames) mix.of(f) = n1.of(f) * a + n2.of(f) * b;
    const ForceChainResult rm =
        solve_actuator_forces(mix, t1 * a + t2 * b, c, g);
    const ForceChainResult r1 = solve_actuator_forces(n1, t1, c, g);
    const ForceChainResult r2 = solve_actuator_forces(n2, t2, c, g);

    CHECK(rel_err(rm.f.f1, a * r1.f.f1 + b * r2.f.f1, 1e-9) < 1e-11);
    CHECK(rel_err(rm.f.f2, a * r1.f.f2 + b * r2.f.f2, 1e-9) < 1e-11);
    CHECK(rel_err(rm.f.f3, a * r1.f.f3 + b * r2.f.f3, 1e-9) < 1e-11);
    CHECK(rel_err(rm.f_t1.stacked(),
                  (r1.f_t1 * a + r2.f_t1 * b).stacked(), 1e-9) < 1e-11);
  }
}

TEST_CASE("force chain: line forces are invariant to yaw and base offset") {
  HdrmGeometry g = demo_geometry();
  const BodySet bodies = default_body_set();
  testutil::Rng rng(310);
  for (int trial = 0; trial < 10; ++trial) {
    JointState js = random_static_state(rng);
    const ChainState c0 = propagate_chain(g, js);
    const ForceChainResult r0 = solve_actuator_forces(
        static_net_forces(bodies, c0, g.gravity), SpatialForce{}, c0, g);

    js.zeta[0] = rng.uniform(-3.0, 3.0);
    HdrmGeometry g2 = g;
    g2.base_offset += Vec3(0.3, -0.2, 0.5);
    const ChainState c1 = propagate_chain(g2, js);
    const ForceChainResult r1 = solve_actuator_forces(
        static_net_forces(bodies, c1, g2.gravity), SpatialForce{}, c1, g2);

    CHECK(rel_err(r0.f.f2, r1.f.f2) < 1e-10);
    CHECK(rel_err(r0.f.f3, r1.f.f3) < 1e-10);
    CHECK(std::abs(r0.f.f1 - r1.f.f1) < 1e-8);
  }
}

TEST_CASE("force chain: stroke reversal raises a singularity error") {
  // A four-bar whose stroke rate changes sign inside the workspace: the
  // geometry this project rejected as a default. At the dead point no finite
  // line force holds the pose.
  HdrmGeometry g = demo_geometry();
  g.tilt = FourBarGeometry{0.45, 0.40, 0.5, 0.5, -0.3, -0.8, 0.55, 0.45, 0.0};

  auto dx_at = [&](double z) {
    JointState js;
    js.zeta[1] = 0.7;
    js.zeta[2] = z;
    js.dzeta[2] = 1.0;
    return propagate_chain(g, js).tilt_rates.dx;
  };
  double lo = -2.0, hi = -0.8;
  REQUIRE(dx_at(lo) * dx_at(hi) < 0.0);
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (dx_at(lo) * dx_at(mid) <= 0.0 ? hi : lo) = mid;
  }
  JointState js;
  js.zeta[1] = 0.7;
  js.zeta[2] = 0.5 * (lo + hi);
  js.dzeta[2] = 1.0;
  const ChainState c = propagate_chain(g, js);
  REQUIRE(std::abs(c.tilt_rates.dx) < 1e-10);

  testutil::Rng rng(311);
  const BodyForceSet net = random_net(rng);
  CHECK_THROWS_AS((void)tilt_actuator_force(net, rng.force(), c, g),
                  SingularityError);
}
