#pragma once

#include <vdcsim/errors.hpp>

// Closed-chain planar mechanisms that convert actuator strokes into joint
// angles: a three-bar triangle for the lift and a four-bar cascade for the
// tilt. Angle sign convention is counterclockwise-positive throughout; the
// working range puts q, q1, q2 below zero.

namespace vdcsim {

class ConfigMap;

// Guards shared by all kinematic solvers. arccos/arcsin arguments are
// clamped only within domain_tol of [-1, 1]; velocity divisions require the
// relevant |sin| to stay above eps_sing.
struct SolverGuards {
  double domain_tol = 1e-9;
  double eps_sing = 1e-4;
};

struct ThreeBarGeometry {
  double L1 = 1.0;    // hinge-to-rod-attachment length on the moving link
  double L2 = 1.0;    // hinge-to-cylinder-anchor length on the frame
  double x0 = 0.0;    // actuator zero length; closing side is x + x0
  double beta1 = 0.0; // frame mounting angle
  double beta2 = 0.0; // link mounting angle
  double lc = 0.0;    // line-of-action offset used by the actuator force law
};

struct ThreeBarPose {
  double q;   // hinge angle; the triangle's interior apex angle is pi + q
  double x;   // actuator stroke
  double q1;  // anchor-side angle (interior angle there is -q1)
  double q2;  // attachment-side angle (interior angle there is -q2)

  double length() const { return closing; }
  double closing;  // x + x0, kept to avoid re-deriving from geometry
};

struct ThreeBarRates {
  double dx;
  double dq1;
  double dq2;
};

// Sensor angle to hinge angle, q = (-pi/2 - beta1 - beta2) + zeta.
// Unit slope, so dq = dzeta.
double lift_angle(double zeta, const ThreeBarGeometry& g);
double lift_sensor_angle(double q, const ThreeBarGeometry& g);

ThreeBarPose three_bar_positions(double q, const ThreeBarGeometry& g,
                                 const SolverGuards& guards = {});
ThreeBarRates three_bar_velocities(const ThreeBarPose& p, double dq,
                                   const ThreeBarGeometry& g,
                                   const SolverGuards& guards = {});

// Inverse of the closing-side map: hinge angle from actuator length x + x0.
// Returns the counterclockwise-negative branch in (-pi, 0).
double three_bar_angle_from_length(double length, const ThreeBarGeometry& g,
                                   const SolverGuards& guards = {});

// Four-bar crank ABCD plus a driven actuator triangle. A and B are frame
// pivots (|AB| = d1), C rides the crank (|AC| = d2), D the rocker
// (|BD| = d4), coupler |CD| = d5. The pose-dependent diagonals are
// d3 = |BC| and L1 = |AD|; the actuator closes a triangle over L1 and L2.
struct FourBarGeometry {
  double d1 = 1.0;
  double d2 = 1.0;
  double d4 = 1.0;
  double d5 = 1.0;
  double gamma1 = 0.0;  // crank mounting angle
  double gamma7 = 0.0;  // rocker mounting angle
  double L2 = 1.0;      // actuator anchor length in the driven triangle
  double x0 = 0.0;      // actuator zero length
  double lc = 0.0;      // line-of-action offset used by the actuator force law
};

struct FourBarPose {
  double gamma2;  // crank angle at A, gamma1 + pi + zeta
  double d3;      // |BC|
  double gamma3;  // angle at B between BA and BC
  double gamma4;  // angle at B between BC and BD
  double gamma5;  // gamma3 + gamma4
  double L1;      // |AD|
  double gamma6;  // angle at A between AC and AD
  double q;       // driven triangle hinge angle, -gamma7 - gamma6 + zeta
  double x;       // actuator stroke
  double q1;      // anchor-side angle
  double q2;      // attachment-side angle

  double length() const { return closing; }
  double closing;  // x + x0
};

struct FourBarRates {
  double dd3;
  double dgamma3;
  double dgamma4;
  double dgamma5;
  double dL1;
  double dgamma6;
  double dq;
  double dx;
  double dq1;
  double dq2;
};

FourBarPose four_bar_solve(double zeta, const FourBarGeometry& g,
                           const SolverGuards& guards = {});
FourBarRates four_bar_velocities(const FourBarPose& p, double dzeta,
                                 const FourBarGeometry& g,
                                 const SolverGuards& guards = {});

// Sensor angle producing a given actuator stroke, by Newton iteration from
// zeta_guess. Intended for plant-side use with a warm start each tick.
double four_bar_sensor_from_stroke(double x, double zeta_guess,
                                   const FourBarGeometry& g,
                                   const SolverGuards& guards = {});

// Config loaders; keys are <prefix>.L1, <prefix>.d1, and so on.
ThreeBarGeometry three_bar_from_config(const ConfigMap& cfg,
                                       const std::string& prefix);
FourBarGeometry four_bar_from_config(const ConfigMap& cfg,
                                     const std::string& prefix);
SolverGuards guards_from_config(const ConfigMap& cfg);

}  // namespace vdcsim
