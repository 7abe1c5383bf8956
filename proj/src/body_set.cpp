#include <vdcsim/body_set.hpp>

#include <string>

#include <vdcsim/config.hpp>

namespace vdcsim {

BodySet default_body_set() {
  BodySet b;
  auto body = [&](FrameId f, double m, const Vec3& com, const Vec3& i_diag) {
    b.of(f) = InertialParameters::from_com(m, com, i_diag.asDiagonal());
  };
  // Column and lift bracket.
  body(FrameId::T1, 120.0, Vec3(0.0, -0.3, 0.0), Vec3(8.0, 4.0, 8.0));
  body(FrameId::Bc2, 25.0, Vec3(0.1, 0.1, 0.0), Vec3(0.8, 0.8, 0.8));
  // Lift: link, cylinder, rod. Rod-like bodies point along their own x.
  body(FrameId::A2, 60.0, Vec3(0.45, 0.0, 0.0), Vec3(0.2, 4.2, 4.2));
  body(FrameId::C2, 18.0, Vec3(0.25, 0.0, 0.0), Vec3(0.05, 0.9, 0.9));
  body(FrameId::D2, 8.0, Vec3(-0.25, 0.0, 0.0), Vec3(0.02, 0.5, 0.5));
  // Boom structure and tilt loop.
  body(FrameId::Bc3, 45.0, Vec3(0.7, 0.05, 0.0), Vec3(0.3, 6.0, 6.0));
  body(FrameId::A3, 30.0, Vec3(0.3, 0.0, 0.0), Vec3(0.1, 1.8, 1.8));
  body(FrameId::C3, 15.0, Vec3(0.22, 0.0, 0.0), Vec3(0.04, 0.7, 0.7));
  body(FrameId::D3, 7.0, Vec3(-0.22, 0.0, 0.0), Vec3(0.02, 0.4, 0.4));
  // Arm and wrist.
  body(FrameId::B4, 35.0, Vec3(0.45, -0.05, 0.0), Vec3(0.2, 3.2, 3.2));
  body(FrameId::A4, 12.0, Vec3(0.12, 0.0, 0.0), Vec3(0.08, 0.25, 0.25));
  body(FrameId::C4, 10.0, Vec3(0.08, 0.0, 0.0), Vec3(0.06, 0.15, 0.15));
  body(FrameId::D4, 14.0, Vec3(0.1, 0.0, 0.0), Vec3(0.1, 0.3, 0.3));
  return b;
}

BodySet bodies_from_config(const ConfigMap& cfg) {
  BodySet b = default_body_set();
  for (FrameId f : kBodyFrames) {
    const std::string prefix = std::string("body.") + frame_name(f) + ".";
    const bool any = cfg.has(prefix + "mass") || cfg.has(prefix + "com") ||
                     cfg.has(prefix + "inertia");
    if (!any) continue;
    const InertialParameters& d = b.of(f);
    const double m = cfg.get_double(prefix + "mass", d.m);
    if (!(m > 0.0))
      throw ConfigError("key '" + prefix + "mass' must be positive");
    const Vec3 dcom = d.m > 0.0 ? Vec3(d.h / d.m) : Vec3::Zero();
    Mat3 i_com = d.I - d.m * (dcom.squaredNorm() * Mat3::Identity() -
                              dcom * dcom.transpose());
    Vec3 com = dcom;
    if (cfg.has(prefix + "com")) {
      const std::vector<double> v = cfg.get_vector(prefix + "com");
      if (v.size() != 3)
        throw ConfigError("key '" + prefix + "com' must have 3 entries");
      com = Vec3(v[0], v[1], v[2]);
    }
    if (cfg.has(prefix + "inertia")) {
      const std::vector<double> v = cfg.get_vector(prefix + "inertia");
      if (v.size() != 6)
        throw ConfigError("key '" + prefix + "inertia' must have 6 entries");
      i_com << v[0], v[1], v[2],
               v[1], v[3], v[4],
               v[2], v[4], v[5];
    }
    b.of(f) = InertialParameters::from_com(m, com, i_com);
  }
  return b;
}

BodyForceSet net_forces(const BodySet& bodies, const ChainState& c,
                        const std::array<SpatialVelocity, kFrameCount>& accel,
                        const Vec3& gravity_world) {
  BodyForceSet out;
  for (FrameId f : kBodyFrames) {
    const InertialParameters& p = bodies.of(f);
    const SpatialVelocity& v = c.velocity_of(f);
    const RigidBodyModel m =
        build_rigid_body_model(p, v, c.gravity_in(f, gravity_world));
    out.of(f) = net_force(m, v, accel[frame_index(f)]);
  }
  return out;
}

BodyForceSet static_net_forces(const BodySet& bodies, const ChainState& c,
                               const Vec3& gravity_world) {
  std::array<SpatialVelocity, kFrameCount> zero{};
  return net_forces(bodies, c, zero, gravity_world);
}

}  // namespace vdcsim
