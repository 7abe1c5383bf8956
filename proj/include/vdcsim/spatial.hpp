#pragma once

#include <Eigen/Dense>

#include <vdcsim/errors.hpp>

// Spatial (6-D) vector algebra. Stacking order is [linear; angular] for
// velocities and [force; moment] for wrenches, throughout the library.

namespace vdcsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline Mat3 skew(const Vec3& r) {
  Mat3 s;
  s << 0.0, -r.z(), r.y(),
       r.z(), 0.0, -r.x(),
      -r.y(), r.x(), 0.0;
  return s;
}

// Rotation matrix wrapper. Construction and composition verify orthonormality
// (Frobenius norm of R^T R - I); nothing ever re-orthogonalizes silently.
class Rotation3 {
 public:
  Rotation3() : m_(Mat3::Identity()) {}

  static Rotation3 from_matrix(const Mat3& r, double tol = 1e-8) {
    Rotation3 out(r, Unchecked{});
    const double err = out.orthonormality_error();
    if (err > tol || r.determinant() < 0.0)
      throw NumericError("Rotation3: matrix is not a proper rotation (error " +
                         std::to_string(err) + ")");
    return out;
  }

  static Rotation3 rot_x(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << 1, 0, 0,
         0, c, -s,
         0, s, c;
    return Rotation3(r, Unchecked{});
  }

  static Rotation3 rot_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << c, 0, s,
         0, 1, 0,
        -s, 0, c;
    return Rotation3(r, Unchecked{});
  }

  static Rotation3 rot_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << c, -s, 0,
         s, c, 0,
         0, 0, 1;
    return Rotation3(r, Unchecked{});
  }

  const Mat3& matrix() const { return m_; }

  double orthonormality_error() const {
    return (m_.transpose() * m_ - Mat3::Identity()).norm();
  }

  Rotation3 transpose() const { return Rotation3(m_.transpose(), Unchecked{}); }

  // Composition re-checks drift; it does not renormalize.
  Rotation3 operator*(const Rotation3& o) const {
    Rotation3 out(m_ * o.m_, Unchecked{});
    if (out.orthonormality_error() > 1e-8)
      throw NumericError("Rotation3: orthonormality drift after composition");
    return out;
  }

  Vec3 operator*(const Vec3& v) const { return m_ * v; }

 private:
  struct Unchecked {};
  Rotation3(const Mat3& r, Unchecked) : m_(r) {}
  Mat3 m_;
};

struct SpatialVelocity {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();

  SpatialVelocity() = default;
  SpatialVelocity(const Vec3& lin, const Vec3& ang) : linear(lin), angular(ang) {}

  static SpatialVelocity from_stacked(const Vec6& v) {
    return SpatialVelocity(v.head<3>(), v.tail<3>());
  }
  Vec6 stacked() const {
    Vec6 v;
    v << linear, angular;
    return v;
  }

  SpatialVelocity operator+(const SpatialVelocity& o) const {
    return {linear + o.linear, angular + o.angular};
  }
  SpatialVelocity operator-(const SpatialVelocity& o) const {
    return {linear - o.linear, angular - o.angular};
  }
  SpatialVelocity operator*(double s) const { return {linear * s, angular * s}; }
};

struct SpatialForce {
  Vec3 force = Vec3::Zero();
  Vec3 moment = Vec3::Zero();

  SpatialForce() = default;
  SpatialForce(const Vec3& f, const Vec3& m) : force(f), moment(m) {}

  static SpatialForce from_stacked(const Vec6& v) {
    return SpatialForce(v.head<3>(), v.tail<3>());
  }
  Vec6 stacked() const {
    Vec6 v;
    v << force, moment;
    return v;
  }

  SpatialForce operator+(const SpatialForce& o) const {
    return {force + o.force, moment + o.moment};
  }
  SpatialForce operator-(const SpatialForce& o) const {
    return {force - o.force, moment - o.moment};
  }
  SpatialForce operator*(double s) const { return {force * s, moment * s}; }
};

inline double dot(const SpatialVelocity& v, const SpatialForce& f) {
  return v.linear.dot(f.force) + v.angular.dot(f.moment);
}

// Pose of frame B in frame A: rotation (B axes in A) and offset (A-origin to
// B-origin, in A coordinates). The 6x6 matrix form is
//   [ R        0 ]
//   [ skew(r)R R ]
// velocities map B <- A through U^T, forces A <- B through U.
struct FrameTransform {
  Rotation3 rotation;
  Vec3 offset = Vec3::Zero();

  FrameTransform() = default;
  FrameTransform(const Rotation3& rot, const Vec3& off) : rotation(rot), offset(off) {}

  Mat6 to_matrix() const {
    if (rotation.orthonormality_error() > 1e-8)
      throw NumericError("FrameTransform: rotation drifted from orthonormality");
    Mat6 u = Mat6::Zero();
    u.topLeftCorner<3, 3>() = rotation.matrix();
    u.bottomLeftCorner<3, 3>() = skew(offset) * rotation.matrix();
    u.bottomRightCorner<3, 3>() = rotation.matrix();
    return u;
  }
};

// U_AB * U_BC, i.e. the pose of C in A.
inline FrameTransform compose(const FrameTransform& ab, const FrameTransform& bc) {
  return FrameTransform(ab.rotation * bc.rotation,
                        ab.offset + ab.rotation * bc.offset);
}

// v_B = U^T v_A (expressed-in change from parent A to child B).
inline SpatialVelocity transform_velocity(const FrameTransform& u,
                                          const SpatialVelocity& va) {
  const Mat3 rt = u.rotation.matrix().transpose();
  return SpatialVelocity(rt * (va.linear + va.angular.cross(u.offset)),
                         rt * va.angular);
}

// F_A = U F_B (wrench pushed from child B up to parent A).
inline SpatialForce transform_force(const FrameTransform& u, const SpatialForce& fb) {
  const Vec3 f = u.rotation * fb.force;
  return SpatialForce(f, u.offset.cross(f) + u.rotation * fb.moment);
}

}  // namespace vdcsim
