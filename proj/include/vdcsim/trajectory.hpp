#pragma once

#include <vector>

#include "vdcsim/config.hpp"
#include "vdcsim/spatial.hpp"

namespace vdcsim {

// Piecewise rest-to-rest Cartesian path through a vertex list. Every segment
// stops at both ends, so the traversed length equals the polyline length
// exactly and corners never demand lateral acceleration. Within a segment the
// arc parameter ramps up over blend_time with the quintic basis u^3 - u^4/2
// (zero velocity and acceleration at both ends of the blend), cruises at
// constant speed, and mirrors the ramp down.
struct TrajectorySpec {
  enum class Kind {
    kCubePath,        // closed walk over all 8 corners of an axis-aligned cube
    kPlanarTriangle,  // closed equilateral triangle in a vertical plane
    kWaypoints,       // user vertex list; 0 or 1 points hold still
  };

  Kind kind = Kind::kCubePath;
  double edge = 0.2;              // cube or triangle side [m]
  double segment_duration = 2.0;  // per segment unless durations overrides [s]
  double blend_time = 0.2;        // quintic ramp at each segment end [s]
  Vec3 anchor = Vec3::Zero();     // first vertex of the named shapes
  std::vector<Vec3> waypoints;    // kWaypoints only
  std::vector<double> durations;  // optional, one entry per segment

  // Scalar sanity only; segment-count checks happen when the path is built.
  void validate() const;
};

struct TrajectorySample {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
};

class Trajectory {
 public:
  explicit Trajectory(const TrajectorySpec& spec);

  // Valid for t in [0, duration()]; throws NumericError outside.
  TrajectorySample sample(double t) const;

  double duration() const { return total_; }
  double path_length() const;
  int segment_count() const { return static_cast<int>(durations_.size()); }
  const std::vector<Vec3>& vertices() const { return vertices_; }

 private:
  std::vector<Vec3> vertices_;     // segment_count() + 1 entries, or 1 if held
  std::vector<double> durations_;  // per segment
  std::vector<double> starts_;     // cumulative start times, one per segment
  double blend_ = 0.2;
  double total_ = 0.0;
};

// One-shot sampling without keeping the Trajectory around.
TrajectorySample gen_trajectory(const TrajectorySpec& spec, double t);

// Reads trajectory.kind (cube | triangle | waypoints), trajectory.edge,
// trajectory.segment_duration, trajectory.blend_time, trajectory.anchor,
// trajectory.waypoints (flattened x y z triples), trajectory.durations.
TrajectorySpec trajectory_from_config(const ConfigMap& cfg);

}  // namespace vdcsim
