#include <vdcsim/chain.hpp>

#include <numbers>

#include <vdcsim/config.hpp>

namespace vdcsim {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<FrameId, kFrameCount> kParent = {
    FrameId::T1,   // T1 hangs off the ground; entry unused
    FrameId::T1,   // Bc2
    FrameId::Bc2,  // A2
    FrameId::A2,   // T12
    FrameId::Bc2,  // C2
    FrameId::C2,   // D2
    FrameId::D2,   // T22
    FrameId::T12,  // Bc3
    FrameId::Bc3,  // A3
    FrameId::A3,   // T13
    FrameId::Bc3,  // C3
    FrameId::C3,   // D3
    FrameId::D3,   // T23
    FrameId::T13,  // B4
    FrameId::B4,   // A4
    FrameId::A4,   // C4
    FrameId::C4,   // D4
    FrameId::D4,   // T4
};

}  // namespace

const char* frame_name(FrameId f) {
  static constexpr const char* kNames[kFrameCount] = {
      "T1", "Bc2", "A2", "T12", "C2", "D2", "T22", "Bc3", "A3",
      "T13", "C3", "D3", "T23", "B4", "A4", "C4", "D4", "T4"};
  return kNames[frame_index(f)];
}

FrameId parent_frame(FrameId f) { return kParent[frame_index(f)]; }

ChainState propagate_chain(const HdrmGeometry& g, const JointState& js) {
  ChainState c;
  c.lift = three_bar_positions(lift_angle(js.zeta[1], g.lift), g.lift, g.guards);
  c.lift_rates = three_bar_velocities(c.lift, js.dzeta[1], g.lift, g.guards);
  c.tilt = four_bar_solve(js.zeta[2], g.tilt, g.guards);
  c.tilt_rates = four_bar_velocities(c.tilt, js.dzeta[2], g.tilt, g.guards);

  auto set = [&](FrameId f, const Rotation3& r, const Vec3& off) {
    c.parent_transform[frame_index(f)] = FrameTransform(r, off);
  };
  set(FrameId::T1, Rotation3::rot_y(js.zeta[0]), g.base_offset);
  set(FrameId::Bc2, Rotation3::rot_z(g.lift_mount_angle), g.lift_mount_offset);
  // Hinge chain of the lift triangle: link, then the fixed L1 arm to the tip.
  set(FrameId::A2, Rotation3::rot_z(kPi + c.lift.q), Vec3::Zero());
  set(FrameId::T12, Rotation3(), Vec3(g.lift.L1, 0.0, 0.0));
  // Actuator chain: anchor pivot, prismatic stroke, tip alignment.
  set(FrameId::C2, Rotation3::rot_z(kPi + c.lift.q1), Vec3(g.lift.L2, 0.0, 0.0));
  set(FrameId::D2, Rotation3(), Vec3(c.lift.length(), 0.0, 0.0));
  set(FrameId::T22, Rotation3::rot_z(c.lift.q2), Vec3::Zero());
  set(FrameId::Bc3, Rotation3::rot_z(g.boom_mount_angle), g.boom_mount_offset);
  // Tilt loop mirrors the lift, but its hinge arm L1 = |AD| breathes with
  // the pose, so T13 also carries a prismatic rate below.
  set(FrameId::A3, Rotation3::rot_z(kPi + c.tilt.q), Vec3::Zero());
  set(FrameId::T13, Rotation3(), Vec3(c.tilt.L1, 0.0, 0.0));
  set(FrameId::C3, Rotation3::rot_z(kPi + c.tilt.q1), Vec3(g.tilt.L2, 0.0, 0.0));
  set(FrameId::D3, Rotation3(), Vec3(c.tilt.length(), 0.0, 0.0));
  set(FrameId::T23, Rotation3::rot_z(c.tilt.q2), Vec3::Zero());
  set(FrameId::B4, Rotation3::rot_z(g.arm_mount_angle), g.arm_mount_offset);
  set(FrameId::A4, Rotation3::rot_x(js.zeta[3]), g.wrist_offset_a);
  set(FrameId::C4, Rotation3::rot_z(js.zeta[4]), g.wrist_offset_c);
  set(FrameId::D4, Rotation3::rot_x(js.zeta[5]), g.wrist_offset_d);
  set(FrameId::T4, Rotation3(), g.tool_offset);

  // Twist each joint adds in its own frame, applied after the parent's
  // velocity is carried across the transform.
  std::array<Vec6, kFrameCount> own;
  for (auto& t : own) t.setZero();
  auto angular = [&](FrameId f, int axis, double rate) {
    own[frame_index(f)](3 + axis) = rate;
  };
  auto linear = [&](FrameId f, int axis, double rate) {
    own[frame_index(f)](axis) = rate;
  };
  angular(FrameId::T1, 1, js.dzeta[0]);
  angular(FrameId::A2, 2, js.dzeta[1]);  // hinge rate equals sensor rate
  angular(FrameId::C2, 2, c.lift_rates.dq1);
  linear(FrameId::D2, 0, c.lift_rates.dx);
  angular(FrameId::T22, 2, c.lift_rates.dq2);
  angular(FrameId::A3, 2, c.tilt_rates.dq);
  linear(FrameId::T13, 0, c.tilt_rates.dL1);
  angular(FrameId::C3, 2, c.tilt_rates.dq1);
  linear(FrameId::D3, 0, c.tilt_rates.dx);
  angular(FrameId::T23, 2, c.tilt_rates.dq2);
  angular(FrameId::A4, 0, js.dzeta[3]);
  angular(FrameId::C4, 2, js.dzeta[4]);
  angular(FrameId::D4, 0, js.dzeta[5]);

  for (int i = 0; i < kFrameCount; ++i) {
    const FrameTransform& u = c.parent_transform[i];
    const SpatialVelocity joint = SpatialVelocity::from_stacked(own[i]);
    if (i == frame_index(FrameId::T1)) {
      c.world[i] = u;
      c.velocity[i] = joint;  // the ground does not move
    } else {
      const int p = frame_index(kParent[i]);
      c.world[i] = compose(c.world[p], u);
      c.velocity[i] = joint + transform_velocity(u, c.velocity[p]);
    }
  }
  return c;
}

Mat6 task_jacobian(const HdrmGeometry& g, const JointState& js) {
  // The mechanism rate maps (three-bar, four-bar) are linear in the sensor
  // rates, so the tool twist is exactly J * dzeta; unit-rate propagation
  // recovers each column without differencing.
  Mat6 j;
  JointState unit;
  unit.zeta = js.zeta;
  for (int k = 0; k < 6; ++k) {
    unit.dzeta.fill(0.0);
    unit.dzeta[k] = 1.0;
    const ChainState c = propagate_chain(g, unit);
    const Mat3 r = c.world_of(FrameId::T4).rotation.matrix();
    const SpatialVelocity& v = c.velocity_of(FrameId::T4);
    j.block<3, 1>(0, k) = r * v.linear;
    j.block<3, 1>(3, k) = r * v.angular;
  }
  return j;
}

HdrmGeometry hdrm_from_config(const ConfigMap& cfg) {
  HdrmGeometry g;
  auto vec3 = [&](const std::string& key, const Vec3& fallback) {
    if (!cfg.has(key)) return fallback;
    const std::vector<double> v = cfg.get_vector(key);
    if (v.size() != 3)
      throw ConfigError("key '" + key + "' must have exactly 3 entries");
    return Vec3(v[0], v[1], v[2]);
  };
  g.gravity = vec3("world.gravity", g.gravity);
  g.base_offset = vec3("base.offset", g.base_offset);
  g.base_radius = cfg.get_double("base.radius", g.base_radius);
  if (!(g.base_radius > 0.0))
    throw ConfigError("key 'base.radius' must be positive");
  g.lift_mount_angle = cfg.get_double("mount.lift.angle", g.lift_mount_angle);
  g.lift_mount_offset = vec3("mount.lift.offset", g.lift_mount_offset);
  if (cfg.has("lift.L1")) g.lift = three_bar_from_config(cfg, "lift");
  g.boom_mount_angle = cfg.get_double("mount.boom.angle", g.boom_mount_angle);
  g.boom_mount_offset = vec3("mount.boom.offset", g.boom_mount_offset);
  if (cfg.has("tilt.d1")) g.tilt = four_bar_from_config(cfg, "tilt");
  g.arm_mount_angle = cfg.get_double("mount.arm.angle", g.arm_mount_angle);
  g.arm_mount_offset = vec3("mount.arm.offset", g.arm_mount_offset);
  g.wrist_offset_a = vec3("wrist.offset_a", g.wrist_offset_a);
  g.wrist_offset_c = vec3("wrist.offset_c", g.wrist_offset_c);
  g.wrist_offset_d = vec3("wrist.offset_d", g.wrist_offset_d);
  g.tool_offset = vec3("wrist.tool_offset", g.tool_offset);
  g.guards = guards_from_config(cfg);
  return g;
}

}  // namespace vdcsim
