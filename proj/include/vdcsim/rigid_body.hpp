#pragma once

#include <Eigen/Dense>

#include "vdcsim/spatial.hpp"

// Single rigid body dynamics in its own frame:
//
//   M dV/dt + C(omega) V + G = F*
//
// with V = [v; w] the body-frame spatial velocity, h = m c the first moment
// and I the rotational inertia about the frame origin. The same force is
// linear in the ten inertial parameters, F* = Y(dV, V, g) theta, and the
// regressor is assembled independently of M/C/G so the identity is a real
// cross-check, not a tautology.

namespace vdcsim {

using Vec10 = Eigen::Matrix<double, 10, 1>;
using Regressor = Eigen::Matrix<double, 6, 10>;
using SpatialAcceleration = SpatialVelocity;

// theta ordering: [m, hx, hy, hz, Ixx, Ixy, Ixz, Iyy, Iyz, Izz].
struct InertialParameters {
  double m = 0.0;
  Vec3 h = Vec3::Zero();
  Mat3 I = Mat3::Zero();  // about the frame origin, symmetric

  Vec10 theta() const {
    Vec10 t;
    t << m, h.x(), h.y(), h.z(),
         I(0, 0), I(0, 1), I(0, 2), I(1, 1), I(1, 2), I(2, 2);
    return t;
  }

  static InertialParameters from_theta(const Vec10& t) {
    InertialParameters p;
    p.m = t(0);
    p.h = t.segment<3>(1);
    p.I << t(4), t(5), t(6),
           t(5), t(7), t(8),
           t(6), t(8), t(9);
    return p;
  }

  // Convenience: body given by mass, centre of mass and inertia about the
  // centre of mass; I is moved to the frame origin by the parallel axis rule.
  static InertialParameters from_com(double m, const Vec3& com, const Mat3& I_com) {
    InertialParameters p;
    p.m = m;
    p.h = m * com;
    p.I = I_com + m * (com.squaredNorm() * Mat3::Identity() - com * com.transpose());
    return p;
  }
};

inline Mat6 mass_matrix(const InertialParameters& p) {
  Mat6 m = Mat6::Zero();
  m.topLeftCorner<3, 3>() = p.m * Mat3::Identity();
  m.topRightCorner<3, 3>() = -skew(p.h);
  m.bottomLeftCorner<3, 3>() = skew(p.h);
  m.bottomRightCorner<3, 3>() = p.I;
  return m;
}

// Coriolis/centrifugal matrix; depends on the angular velocity only.
inline Mat6 coriolis_matrix(const InertialParameters& p, const Vec3& w) {
  const Mat3 wx = skew(w);
  const Mat3 hx = skew(p.h);
  Mat6 c = Mat6::Zero();
  c.topLeftCorner<3, 3>() = p.m * wx;
  c.topRightCorner<3, 3>() = -wx * hx;
  c.bottomLeftCorner<3, 3>() = hx * wx;
  c.bottomRightCorner<3, 3>() = wx * p.I;
  return c;
}

// Gravity enters on the left-hand side; g is the gravity acceleration vector
// expressed in the body frame.
inline Vec6 gravity_wrench(const InertialParameters& p, const Vec3& g) {
  Vec6 gw;
  gw << -p.m * g, -p.h.cross(g);
  return gw;
}

struct RigidBodyModel {
  Mat6 M = Mat6::Zero();
  Mat6 C = Mat6::Zero();
  Vec6 G = Vec6::Zero();
};

inline RigidBodyModel build_rigid_body_model(const InertialParameters& p,
                                             const SpatialVelocity& v,
                                             const Vec3& g_body) {
  RigidBodyModel m;
  m.M = mass_matrix(p);
  m.C = coriolis_matrix(p, v.angular);
  m.G = gravity_wrench(p, g_body);
  return m;
}

inline SpatialForce net_force(const RigidBodyModel& m, const SpatialVelocity& v,
                              const SpatialAcceleration& dv) {
  return SpatialForce::from_stacked(m.M * dv.stacked() + m.C * v.stacked() + m.G);
}

// 3x6 map with K(w) * [Ixx Ixy Ixz Iyy Iyz Izz]^T = I w.
inline Eigen::Matrix<double, 3, 6> inertia_vec_product(const Vec3& w) {
  Eigen::Matrix<double, 3, 6> k;
  k << w.x(), w.y(), w.z(), 0.0, 0.0, 0.0,
       0.0, w.x(), 0.0, w.y(), w.z(), 0.0,
       0.0, 0.0, w.x(), 0.0, w.y(), w.z();
  return k;
}

// Column-wise closed form of the body regressor.
inline Regressor regressor(const SpatialAcceleration& dv, const SpatialVelocity& v,
                           const Vec3& g_body) {
  const Vec3& a = dv.linear;
  const Vec3& dw = dv.angular;
  const Vec3& vel = v.linear;
  const Vec3& w = v.angular;

  Regressor y = Regressor::Zero();
  y.block<3, 1>(0, 0) = a + w.cross(vel) - g_body;
  y.block<3, 3>(0, 1) = skew(dw) + skew(w) * skew(w);
  y.block<3, 3>(3, 1) = -skew(a) - skew(w.cross(vel)) + skew(g_body);
  y.block<3, 6>(3, 4) = inertia_vec_product(dw) + skew(w) * inertia_vec_product(w);
  return y;
}

// Model-based required force plus velocity-error feedback.
inline SpatialForce required_net_force(const Regressor& y, const Vec10& theta_hat,
                                       const Mat6& k_a, const SpatialVelocity& vr,
                                       const SpatialVelocity& v) {
  return SpatialForce::from_stacked(y * theta_hat + k_a * (vr - v).stacked());
}

// Virtual power flow at a cutting point.
inline double vpf(const SpatialVelocity& vr, const SpatialVelocity& v,
                  const SpatialForce& fr, const SpatialForce& f) {
  return dot(vr - v, fr - f);
}

}  // namespace vdcsim
