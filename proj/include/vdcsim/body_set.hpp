#pragma once

#include <vdcsim/chain.hpp>
#include <vdcsim/rigid_body.hpp>

// Inertial parameters for every body frame of the manipulator, plus the
// net-force evaluation that feeds the recursive force propagation.

namespace vdcsim {

class ConfigMap;

struct BodySet {
  std::array<InertialParameters, kFrameCount> params{};

  InertialParameters& of(FrameId f) { return params[frame_index(f)]; }
  const InertialParameters& of(FrameId f) const {
    return params[frame_index(f)];
  }
};

// Desk-scale defaults matching HdrmGeometry{}; every body is physically
// consistent (positive mass, inertia built about the centre of mass).
BodySet default_body_set();

// Overrides on top of the defaults, keyed body.<frame>.mass (kg),
// body.<frame>.com (m, body frame) and body.<frame>.inertia
// (Ixx Ixy Ixz Iyy Iyz Izz about the centre of mass).
BodySet bodies_from_config(const ConfigMap& cfg);

struct BodyForceSet {
  std::array<SpatialForce, kFrameCount> net{};

  SpatialForce& of(FrameId f) { return net[frame_index(f)]; }
  const SpatialForce& of(FrameId f) const { return net[frame_index(f)]; }
};

// Net force/moment of every body in its own frame, M dV + C V + G, with the
// caller supplying body-frame accelerations (zero for static poses).
BodyForceSet net_forces(const BodySet& bodies, const ChainState& c,
                        const std::array<SpatialVelocity, kFrameCount>& accel,
                        const Vec3& gravity_world);

// Static shortcut: gravity wrenches only (the chain state must come from a
// zero-rate JointState for this to be the true net force).
BodyForceSet static_net_forces(const BodySet& bodies, const ChainState& c,
                               const Vec3& gravity_world);

}  // namespace vdcsim
