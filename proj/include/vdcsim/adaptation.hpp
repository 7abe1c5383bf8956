#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>

#include "vdcsim/rigid_body.hpp"

// Natural adaptation of inertial parameters on the manifold of 4x4
// positive-definite pseudo-inertia matrices
//
//   L = [ 0.5 tr(I) 1 - I   h ]
//       [ h^T               m ],
//
// driven by dL/dt = (1/gamma) L S L where S is the dual image of the
// regressor-weighted velocity error, tr(S f(dtheta)) = (Y^T e)^T dtheta.

namespace vdcsim {

using Mat4 = Eigen::Matrix4d;

class AdaptationStepError : public NumericError {
 public:
  AdaptationStepError(const std::string& what, double suggested)
      : NumericError(what), suggested_dt(suggested) {}
  double suggested_dt;
};

struct PseudoInertia {
  Mat4 L = Mat4::Identity();

  bool is_positive_definite() const {
    Eigen::LLT<Mat4> llt(L);
    return llt.info() == Eigen::Success;
  }
};

inline PseudoInertia theta_to_pseudo(const Vec10& theta) {
  const InertialParameters p = InertialParameters::from_theta(theta);
  PseudoInertia out;
  out.L.topLeftCorner<3, 3>() = 0.5 * p.I.trace() * Mat3::Identity() - p.I;
  out.L.topRightCorner<3, 1>() = p.h;
  out.L.bottomLeftCorner<1, 3>() = p.h.transpose();
  out.L(3, 3) = p.m;
  return out;
}

inline Vec10 pseudo_to_theta(const PseudoInertia& li) {
  if ((li.L - li.L.transpose()).norm() > 1e-9 * std::max(1.0, li.L.norm()))
    throw NumericError("pseudo_to_theta: asymmetric pseudo-inertia");
  const Mat3 sigma = li.L.topLeftCorner<3, 3>();
  InertialParameters p;
  p.m = li.L(3, 3);
  p.h = li.L.topRightCorner<3, 1>();
  p.I = sigma.trace() * Mat3::Identity() - sigma;
  return p.theta();
}

// Bregman divergence of the log-det potential, D(L || Lhat).
inline double bregman_divergence(const PseudoInertia& l, const PseudoInertia& lhat) {
  Eigen::LLT<Mat4> llt_hat(lhat.L);
  Eigen::LLT<Mat4> llt(l.L);
  if (llt_hat.info() != Eigen::Success || llt.info() != Eigen::Success)
    throw NumericError("bregman_divergence: operand not positive definite");

  auto logdet = [](const Eigen::LLT<Mat4>& f) {
    return 2.0 * f.matrixL().toDenseMatrix().diagonal().array().log().sum();
  };
  const double tr = llt_hat.solve(l.L).trace();
  return logdet(llt_hat) - logdet(llt) + tr - 4.0;
}

// Unique symmetric S with tr(S f(dtheta)) = a . dtheta for every dtheta,
// a = Y^T (Vr - V) in the theta ordering.
inline Mat4 s_matrix(const Vec10& a) {
  Mat3 a3;
  a3 << a(4), 0.5 * a(5), 0.5 * a(6),
        0.5 * a(5), a(7), 0.5 * a(8),
        0.5 * a(6), 0.5 * a(8), a(9);
  Mat4 s = Mat4::Zero();
  s.topLeftCorner<3, 3>() = a3.trace() * Mat3::Identity() - a3;
  s.topRightCorner<3, 1>() = 0.5 * a.segment<3>(1);
  s.bottomLeftCorner<1, 3>() = 0.5 * a.segment<3>(1).transpose();
  s(3, 3) = a(0);
  return s;
}

inline Mat4 s_matrix(const Regressor& y, const SpatialVelocity& vr,
                     const SpatialVelocity& v) {
  return s_matrix(Vec10(y.transpose() * (vr - v).stacked()));
}

struct AdaptationState {
  PseudoInertia L_hat;
  double gamma = 100.0;
};

// Explicit Euler on the natural gradient flow, optionally substepped. A step
// that destroys positive definiteness is refused with a suggested smaller dt.
inline AdaptationState nal_step(const AdaptationState& state, const Mat4& s,
                                double dt, int substeps = 1) {
  if (substeps < 1) throw NumericError("nal_step: substeps must be >= 1");
  AdaptationState out = state;
  const double h = dt / substeps;
  for (int k = 0; k < substeps; ++k) {
    const Mat4 increment = (h / out.gamma) * out.L_hat.L * s * out.L_hat.L;
    Mat4 next = out.L_hat.L + increment;
    next = 0.5 * (next + next.transpose());
    PseudoInertia cand;
    cand.L = next;
    if (!cand.is_positive_definite())
      throw AdaptationStepError(
          "nal_step: update would leave the positive-definite cone", 0.5 * dt);
    out.L_hat = cand;
  }
  return out;
}

}  // namespace vdcsim
