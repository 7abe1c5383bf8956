#include "vdcsim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vdcsim/errors.hpp"

namespace vdcsim {
namespace {

struct Profile {
  double s = 0.0;
  double ds = 0.0;
  double dds = 0.0;
};

// Quintic-basis ramp u^3 - u^4/2 scaled so ds reaches v_c at tau = t_b with
// zero acceleration at both ends. Covers distance v_c * t_b / 2.
Profile ramp(double tau, double t_b, double v_c) {
  const double u = tau / t_b;
  Profile p;
  p.s = v_c * t_b * (u * u * u - 0.5 * u * u * u * u);
  p.ds = v_c * (3.0 * u * u - 2.0 * u * u * u);
  p.dds = 6.0 * v_c * u * (1.0 - u) / t_b;
  return p;
}

// Arc parameter over one segment: ramp, cruise, mirrored ramp. Total distance
// 2 * (v_c t_b / 2) + v_c (T - 2 t_b) = v_c (T - t_b) = 1 by choice of v_c.
Profile scalar_profile(double tau, double T, double t_b) {
  const double v_c = 1.0 / (T - t_b);
  if (tau <= t_b) return ramp(tau, t_b, v_c);
  if (tau < T - t_b) {
    return {v_c * t_b * 0.5 + v_c * (tau - t_b), v_c, 0.0};
  }
  const Profile m = ramp(T - tau, t_b, v_c);
  return {1.0 - m.s, m.ds, -m.dds};
}

// Closed one-edge-at-a-time walk covering all 8 corners in 12 moves.
// Revisited corners (rows 4, 9, 10, 11) are unavoidable: the corner graph has
// all-odd degrees, so no Eulerian circuit exists and some edges repeat.
std::vector<Vec3> cube_walk(const Vec3& a, double e) {
  static constexpr int kBits[13][3] = {
      {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 0},
      {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}, {0, 1, 0},
      {1, 1, 0}, {1, 0, 0}, {0, 0, 0}};
  std::vector<Vec3> v;
  v.reserve(13);
  for (const auto& b : kBits) {
    v.push_back(a + e * Vec3(b[0], b[1], b[2]));
  }
  return v;
}

// Equilateral triangle in the x-y plane. y is up, so the plane is vertical.
std::vector<Vec3> triangle(const Vec3& a, double e) {
  return {a, a + e * Vec3(1.0, 0.0, 0.0),
          a + e * Vec3(0.5, std::sqrt(3.0) / 2.0, 0.0), a};
}

}  // namespace

void TrajectorySpec::validate() const {
  if (kind != Kind::kWaypoints && !(edge > 0.0)) {
    throw ConfigError("trajectory edge must be positive");
  }
  if (!(segment_duration > 0.0)) {
    throw ConfigError("trajectory segment_duration must be positive");
  }
  if (!(blend_time > 0.0)) {
    throw ConfigError("trajectory blend_time must be positive");
  }
}

Trajectory::Trajectory(const TrajectorySpec& spec) : blend_(spec.blend_time) {
  spec.validate();
  switch (spec.kind) {
    case TrajectorySpec::Kind::kCubePath:
      vertices_ = cube_walk(spec.anchor, spec.edge);
      break;
    case TrajectorySpec::Kind::kPlanarTriangle:
      vertices_ = triangle(spec.anchor, spec.edge);
      break;
    case TrajectorySpec::Kind::kWaypoints:
      if (spec.waypoints.empty()) {
        vertices_ = {spec.anchor};
      } else {
        vertices_ = spec.waypoints;
      }
      break;
  }

  const int segments = static_cast<int>(vertices_.size()) - 1;
  if (segments <= 0) {
    // Hold: the sampler pins the single vertex over one duration window.
    if (!spec.durations.empty()) {
      throw ConfigError("trajectory durations given for a path with no segments");
    }
    total_ = spec.segment_duration;
    return;
  }

  if (spec.durations.empty()) {
    durations_.assign(segments, spec.segment_duration);
  } else if (static_cast<int>(spec.durations.size()) == segments) {
    durations_ = spec.durations;
  } else {
    throw ConfigError("trajectory durations must have one entry per segment, got "
                      + std::to_string(spec.durations.size()) + " for "
                      + std::to_string(segments) + " segments");
  }

  starts_.reserve(durations_.size());
  total_ = 0.0;
  for (double d : durations_) {
    if (!(d > 0.0)) throw ConfigError("trajectory segment duration must be positive");
    if (!(2.0 * blend_ <= d)) {
      throw ConfigError("trajectory blend_time exceeds half a segment duration");
    }
    starts_.push_back(total_);
    total_ += d;
  }
}

TrajectorySample Trajectory::sample(double t) const {
  if (!(t >= 0.0 && t <= total_)) {
    throw NumericError("trajectory time " + std::to_string(t)
                       + " outside [0, " + std::to_string(total_) + "]");
  }
  TrajectorySample out;
  if (vertices_.size() < 2) {
    out.position = vertices_.front();
    return out;
  }
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  const int k = std::max<int>(0, static_cast<int>(it - starts_.begin()) - 1);
  const double T = durations_[static_cast<size_t>(k)];
  const double tau = std::clamp(t - starts_[static_cast<size_t>(k)], 0.0, T);
  const Profile p = scalar_profile(tau, T, blend_);
  const Vec3 d = vertices_[static_cast<size_t>(k) + 1] - vertices_[static_cast<size_t>(k)];
  out.position = vertices_[static_cast<size_t>(k)] + p.s * d;
  out.velocity = p.ds * d;
  out.acceleration = p.dds * d;
  return out;
}

double Trajectory::path_length() const {
  double length = 0.0;
  for (size_t i = 0; i + 1 < vertices_.size(); ++i) {
    length += (vertices_[i + 1] - vertices_[i]).norm();
  }
  return length;
}

TrajectorySample gen_trajectory(const TrajectorySpec& spec, double t) {
  return Trajectory(spec).sample(t);
}

TrajectorySpec trajectory_from_config(const ConfigMap& cfg) {
  TrajectorySpec spec;
  const std::string kind = cfg.get_string("trajectory.kind", "cube");
  if (kind == "cube") {
    spec.kind = TrajectorySpec::Kind::kCubePath;
  } else if (kind == "triangle") {
    spec.kind = TrajectorySpec::Kind::kPlanarTriangle;
  } else if (kind == "waypoints") {
    spec.kind = TrajectorySpec::Kind::kWaypoints;
  } else {
    throw ConfigError("unknown trajectory.kind: " + kind);
  }
  spec.edge = cfg.get_double("trajectory.edge", spec.edge);
  spec.segment_duration =
      cfg.get_double("trajectory.segment_duration", spec.segment_duration);
  spec.blend_time = cfg.get_double("trajectory.blend_time", spec.blend_time);
  if (cfg.has("trajectory.anchor")) {
    const std::vector<double> a = cfg.get_vector("trajectory.anchor");
    if (a.size() != 3) {
      throw ConfigError("trajectory.anchor needs exactly 3 entries");
    }
    spec.anchor = Vec3(a[0], a[1], a[2]);
  }
  if (cfg.has("trajectory.waypoints")) {
    const std::vector<double> w = cfg.get_vector("trajectory.waypoints");
    if (w.size() % 3 != 0) {
      throw ConfigError("trajectory.waypoints needs whole x y z triples");
    }
    for (size_t i = 0; i < w.size(); i += 3) {
      spec.waypoints.emplace_back(w[i], w[i + 1], w[i + 2]);
    }
  }
  if (cfg.has("trajectory.durations")) {
    spec.durations = cfg.get_vector("trajectory.durations");
  }
  return spec;
}

}  // namespace vdcsim
