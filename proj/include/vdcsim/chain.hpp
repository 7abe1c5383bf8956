#pragma once

#include <array>
#include <string>

#include <vdcsim/linkage.hpp>
#include <vdcsim/spatial.hpp>

// Frame graph of the manipulator: yaw column, lift (closed three-bar), tilt
// (closed four-bar), and a roll-pitch-roll wrist. Velocities propagate from
// the ground out to the tool; each closed mechanism is evaluated along both
// of its open chains, whose tips must agree (closure invariant).

namespace vdcsim {

class ConfigMap;

struct JointState {
  std::array<double, 6> zeta{};   // sensor angles: yaw, lift, tilt, wrist x3
  std::array<double, 6> dzeta{};  // sensor rates
};

// T12/T22 and T13/T23 are the two-chain tips of the lift and tilt loops;
// T12 and T13 also serve as the canonical downstream attachment (the
// coinciding tip frame of each mechanism).
enum class FrameId : int {
  T1, Bc2, A2, T12, C2, D2, T22, Bc3, A3, T13, C3, D3, T23, B4, A4, C4, D4, T4
};
inline constexpr int kFrameCount = 18;
constexpr int frame_index(FrameId f) { return static_cast<int>(f); }
const char* frame_name(FrameId f);

// Frames that carry a rigid body with inertia (one per VDC body).
inline constexpr std::array<FrameId, 13> kBodyFrames = {
    FrameId::T1,  FrameId::Bc2, FrameId::A2, FrameId::C2, FrameId::D2,
    FrameId::Bc3, FrameId::A3,  FrameId::C3, FrameId::D3, FrameId::B4,
    FrameId::A4,  FrameId::C4,  FrameId::D4};

struct HdrmGeometry {
  Vec3 gravity = Vec3(0.0, -9.81, 0.0);  // world frame, y up

  Vec3 base_offset = Vec3(0.0, 1.2, 0.0);  // ground to yaw joint

  // Lift bracket: x axis points from the hinge toward the cylinder anchor.
  double lift_mount_angle = -1.6;
  Vec3 lift_mount_offset = Vec3(0.3, 0.4, 0.0);
  ThreeBarGeometry lift{0.9, 0.6, 0.55, 0.25, 0.35, 0.0};

  // Boom structure from the lift tip to the tilt bracket.
  double boom_mount_angle = 0.0;
  Vec3 boom_mount_offset = Vec3(1.4, 0.15, 0.0);
  // Dimensions chosen so the stroke rate keeps one sign over the working
  // band (no dead point the actuator cannot hold).
  FourBarGeometry tilt{0.30, 0.20, 0.45, 0.65, -0.3, -1.0, 0.65, 0.40, 0.0};

  // Arm structure from the tilt tip to the wrist base.
  double arm_mount_angle = 0.0;
  Vec3 arm_mount_offset = Vec3(0.9, -0.1, 0.0);

  Vec3 wrist_offset_a = Vec3(0.25, 0.0, 0.0);
  Vec3 wrist_offset_c = Vec3(0.15, 0.0, 0.0);
  Vec3 wrist_offset_d = Vec3(0.15, 0.0, 0.0);
  Vec3 tool_offset = Vec3(0.2, 0.0, 0.0);

  // Moment radius converting the base drive's line force into yaw torque.
  double base_radius = 0.4;

  SolverGuards guards;
};

HdrmGeometry hdrm_from_config(const ConfigMap& cfg);

struct ChainState {
  ThreeBarPose lift;
  ThreeBarRates lift_rates;
  FourBarPose tilt;
  FourBarRates tilt_rates;

  std::array<FrameTransform, kFrameCount> parent_transform;  // parent -> frame
  std::array<FrameTransform, kFrameCount> world;             // ground -> frame
  std::array<SpatialVelocity, kFrameCount> velocity;         // own frame

  const FrameTransform& world_of(FrameId f) const {
    return world[frame_index(f)];
  }
  const SpatialVelocity& velocity_of(FrameId f) const {
    return velocity[frame_index(f)];
  }

  // Gravity resolved into a body's own axes.
  Vec3 gravity_in(FrameId f, const Vec3& gravity_world) const {
    return world_of(f).rotation.matrix().transpose() * gravity_world;
  }
};

// Parent of each frame in propagation order (T1's parent is the ground).
FrameId parent_frame(FrameId f);

ChainState propagate_chain(const HdrmGeometry& g, const JointState& js);

// World-axes tool twist per unit sensor rate: columns are [linear; angular]
// of T4 for dzeta = e_k, so world_twist(T4) = J * dzeta.
Mat6 task_jacobian(const HdrmGeometry& g, const JointState& js);

}  // namespace vdcsim
