#include <vdcsim/force_chain.hpp>

#include <cmath>
#include <string>

namespace vdcsim {

namespace {

const FrameTransform& parent_u(const ChainState& c, FrameId f) {
  return c.parent_transform[frame_index(f)];
}

// Hinge-chain load at the link pivot: the link's own net force plus the
// downstream wrench entering at the link tip.
SpatialForce tilt_hinge_load(const SpatialForce& f_b4, const BodyForceSet& net,
                             const ChainState& c) {
  const FrameTransform u_a3_b4 =
      compose(parent_u(c, FrameId::T13), parent_u(c, FrameId::B4));
  return net.of(FrameId::A3) + transform_force(u_a3_b4, f_b4);
}

SpatialForce lift_hinge_load(const SpatialForce& f_bc3, const BodyForceSet& net,
                             const ChainState& c) {
  const FrameTransform u_a2_bc3 =
      compose(parent_u(c, FrameId::T12), parent_u(c, FrameId::Bc3));
  return net.of(FrameId::A2) + transform_force(u_a2_bc3, f_bc3);
}

// Shared form of the actuator line force: axial rod load, hinge-chain moment
// over the attachment radius, and the in-plane moments of the actuator pair
// over the closing side.
double actuator_line_force(const SpatialForce& hinge, const SpatialForce& cyl,
                           const SpatialForce& rod, double attach_radius,
                           double closing, double lc, double q2,
                           const SolverGuards& guards, const char* which) {
  const double s = std::sin(q2);
  const double t = std::tan(q2);
  if (std::abs(s) < guards.eps_sing || std::abs(t) < guards.eps_sing)
    throw SingularityError(std::string(which) +
                           " actuator force: attachment angle q2 within "
                           "eps_sing of 0 or pi");
  if (!(closing > 0.0))
    throw SingularityError(std::string(which) +
                           " actuator force: closing length not positive");
  return rod.force(0) - hinge.moment(2) / (attach_radius * s) -
         (cyl.moment(2) + rod.moment(2) + rod.force(1) * (closing - lc)) /
             (closing * t);
}

}  // namespace

SpatialForce wrist_propagate(const SpatialForce& f_t4, const BodyForceSet& net,
                             const ChainState& c) {
  const SpatialForce f_d4 =
      net.of(FrameId::D4) + transform_force(parent_u(c, FrameId::T4), f_t4);
  const SpatialForce f_c4 =
      net.of(FrameId::C4) + transform_force(parent_u(c, FrameId::D4), f_d4);
  const SpatialForce f_a4 =
      net.of(FrameId::A4) + transform_force(parent_u(c, FrameId::C4), f_c4);
  return net.of(FrameId::B4) + transform_force(parent_u(c, FrameId::A4), f_a4);
}

SpatialForce tilt_propagate(const SpatialForce& f_b4, const BodyForceSet& net,
                            const ChainState& c) {
  const SpatialForce rod =
      net.of(FrameId::C3) +
      transform_force(parent_u(c, FrameId::D3), net.of(FrameId::D3));
  return net.of(FrameId::Bc3) +
         transform_force(parent_u(c, FrameId::A3),
                         tilt_hinge_load(f_b4, net, c)) +
         transform_force(parent_u(c, FrameId::C3), rod);
}

double tilt_actuator_force(const BodyForceSet& net, const SpatialForce& f_b4,
                           const ChainState& c, const HdrmGeometry& g) {
  const double s = std::sin(c.tilt.q2);
  const double t = std::tan(c.tilt.q2);
  if (std::abs(s) < g.guards.eps_sing || std::abs(t) < g.guards.eps_sing)
    throw SingularityError(
        "tilt actuator force: attachment angle q2 within eps_sing of 0 or pi");
  const double closing = c.tilt.length();
  if (!(closing > 0.0))
    throw SingularityError("tilt actuator force: closing length not positive");
  // The attachment radius L1 breathes with the pose, so the pure-triangle
  // ratios dq/dx = -1/(L1 sin q2) and dq1/dx = -1/(l tan q2) pick up dL1
  // terms, and the axial component of the downstream load works against dL1.
  // Using the exact rate ratios keeps the force chain power-conjugate to the
  // velocity chain; with dL1 = 0 this is the same expression as the lift.
  const FourBarRates r = four_bar_velocities(c.tilt, 1.0, g.tilt, g.guards);
  if (std::abs(r.dx) < g.guards.eps_sing)
    throw SingularityError(
        "tilt actuator force: stroke reversal, dx/dzeta below eps_sing");
  const FrameTransform u_a3_b4 =
      compose(parent_u(c, FrameId::T13), parent_u(c, FrameId::B4));
  const SpatialForce carried = transform_force(u_a3_b4, f_b4);
  const SpatialForce hinge = net.of(FrameId::A3) + carried;
  const SpatialForce& cyl = net.of(FrameId::C3);
  const SpatialForce& rod = net.of(FrameId::D3);
  return rod.force(0) + hinge.moment(2) * (r.dq / r.dx) +
         (cyl.moment(2) + rod.moment(2) +
          rod.force(1) * (closing - g.tilt.lc)) *
             (r.dq1 / r.dx) +
         carried.force(0) * (r.dL1 / r.dx);
}

SpatialForce lift_propagate(const SpatialForce& f_bc3, const BodyForceSet& net,
                            const ChainState& c) {
  const SpatialForce rod =
      net.of(FrameId::C2) +
      transform_force(parent_u(c, FrameId::D2), net.of(FrameId::D2));
  return net.of(FrameId::Bc2) +
         transform_force(parent_u(c, FrameId::A2),
                         lift_hinge_load(f_bc3, net, c)) +
         transform_force(parent_u(c, FrameId::C2), rod);
}

double lift_actuator_force(const BodyForceSet& net, const SpatialForce& f_bc3,
                           const ChainState& c, const HdrmGeometry& g) {
  return actuator_line_force(lift_hinge_load(f_bc3, net, c),
                             net.of(FrameId::C2), net.of(FrameId::D2),
                             g.lift.L1, c.lift.length(), g.lift.lc, c.lift.q2,
                             g.guards, "lift");
}

std::pair<SpatialForce, double> base_force(const SpatialForce& f_bc2,
                                           const SpatialForce& net_t1,
                                           const FrameTransform& u_t1_bc2,
                                           double r_base) {
  if (!(r_base > 0.0))
    throw ConfigError("base drive radius must be positive");
  const SpatialForce f_t1 = net_t1 + transform_force(u_t1_bc2, f_bc2);
  return {f_t1, f_t1.moment(1) / r_base};
}

ForceChainResult solve_actuator_forces(const BodyForceSet& net,
                                       const SpatialForce& f_t4,
                                       const ChainState& c,
                                       const HdrmGeometry& g) {
  ForceChainResult r;
  r.f_b4 = wrist_propagate(f_t4, net, c);
  r.f.f3 = tilt_actuator_force(net, r.f_b4, c, g);
  r.f_bc3 = tilt_propagate(r.f_b4, net, c);
  r.f.f2 = lift_actuator_force(net, r.f_bc3, c, g);
  r.f_bc2 = lift_propagate(r.f_bc3, net, c);
  std::tie(r.f_t1, r.f.f1) =
      base_force(r.f_bc2, net.of(FrameId::T1),
                 c.parent_transform[frame_index(FrameId::Bc2)], g.base_radius);
  return r;
}

}  // namespace vdcsim
