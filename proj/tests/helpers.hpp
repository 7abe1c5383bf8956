#pragma once

#include <random>

#include "vdcsim/adaptation.hpp"
#include "vdcsim/rigid_body.hpp"
#include "vdcsim/spatial.hpp"

namespace testutil {

using namespace vdcsim;

// Relative error with an absolute floor, so comparisons near zero stay sane.
inline double rel_err(double got, double want, double atol = 1e-12) {
  return std::abs(got - want) / (std::abs(got) + std::abs(want) + atol);
}

inline double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want,
                      double atol = 1e-12) {
  return (got - want).norm() / (got.norm() + want.norm() + atol);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

  Vec3 vec3(double scale = 1.0) {
    return Vec3(uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale));
  }

  Vec6 vec6(double scale = 1.0) {
    Vec6 v;
    for (int i = 0; i < 6; ++i) v(i) = uniform(-scale, scale);
    return v;
  }

  Rotation3 rotation() {
    // Random axis-angle; exact rotation by construction.
    const Vec3 axis = vec3().normalized();
    const double angle = uniform(-M_PI, M_PI);
    const Eigen::AngleAxisd aa(angle, axis);
    return Rotation3::from_matrix(aa.toRotationMatrix(), 1e-10);
  }

  FrameTransform transform(double offset_scale = 1.0) {
    return FrameTransform(rotation(), vec3(offset_scale));
  }

  SpatialVelocity velocity(double scale = 1.0) {
    return SpatialVelocity(vec3(scale), vec3(scale));
  }

  SpatialForce force(double scale = 1.0) {
    return SpatialForce(vec3(scale), vec3(scale));
  }

  // Physically consistent body: a cloud of point masses about the frame
  // origin. Guarantees a positive-definite pseudo-inertia.
  InertialParameters body(int points = 8, double extent = 0.5) {
    InertialParameters p;
    p.m = 0.0;
    p.h = Vec3::Zero();
    p.I = Mat3::Zero();
    for (int i = 0; i < points; ++i) {
      const double mi = uniform(0.1, 2.0);
      const Vec3 ri = vec3(extent) + Vec3(0.05, -0.03, 0.04);
      p.m += mi;
      p.h += mi * ri;
      p.I += mi * (ri.squaredNorm() * Mat3::Identity() - ri * ri.transpose());
    }
    return p;
  }

  std::mt19937_64& gen() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace testutil
