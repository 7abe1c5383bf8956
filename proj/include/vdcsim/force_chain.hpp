#pragma once

#include <vdcsim/body_set.hpp>

// Recursive force/moment propagation from the tool to the ground, and
// extraction of the three actuator line forces. The recursion is the adjoint
// of the velocity propagation, so each f_i satisfies the power balance
// f_i * dx_i = sum(F*^T V) over the bodies it carries; the tool wrench F_T4
// is the load the arm delivers to the environment (a hanging payload of
// weight W enters as +W along world up, resolved into T4 axes).
//
// The same code path serves simulation (net forces from the plant state) and
// control (required net forces); only the BodyForceSet differs.

namespace vdcsim {

struct ActuatorForces {
  double f1 = 0.0;  // base (N, along the base drive tangent)
  double f2 = 0.0;  // lift (N, along the lift actuator axis)
  double f3 = 0.0;  // tilt (N, along the tilt actuator axis)
};

// Wrist cascade: D4 <- T4, C4 <- D4, A4 <- C4, B4 <- A4.
SpatialForce wrist_propagate(const SpatialForce& f_t4, const BodyForceSet& net,
                             const ChainState& c);

// Five-term sum collecting both tilt chains at the bracket: the bracket's own
// net force, the hinge chain (link plus everything past its tip), and the
// actuator chain (cylinder plus rod).
SpatialForce tilt_propagate(const SpatialForce& f_b4, const BodyForceSet& net,
                            const ChainState& c);

// Line force of the tilt actuator. Requires |sin q2|, |tan q2| above
// eps_sing, a positive closing length, and |dx/dzeta| above eps_sing (a
// stroke reversal means no finite force can hold the pose).
double tilt_actuator_force(const BodyForceSet& net, const SpatialForce& f_b4,
                           const ChainState& c, const HdrmGeometry& g);

SpatialForce lift_propagate(const SpatialForce& f_bc3, const BodyForceSet& net,
                            const ChainState& c);

double lift_actuator_force(const BodyForceSet& net, const SpatialForce& f_bc3,
                           const ChainState& c, const HdrmGeometry& g);

// F_T1 = F*_T1 + U F_Bc2 and the base drive force f1 = y_tau^T F_T1 / r_B.
std::pair<SpatialForce, double> base_force(const SpatialForce& f_bc2,
                                           const SpatialForce& net_t1,
                                           const FrameTransform& u_t1_bc2,
                                           double r_base);

struct ForceChainResult {
  SpatialForce f_b4;
  SpatialForce f_bc3;
  SpatialForce f_bc2;
  SpatialForce f_t1;
  ActuatorForces f;
};

ForceChainResult solve_actuator_forces(const BodyForceSet& net,
                                       const SpatialForce& f_t4,
                                       const ChainState& c,
                                       const HdrmGeometry& g);

}  // namespace vdcsim
