#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vdcsim/trajectory.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "helpers.hpp"

using namespace vdcsim;

namespace {

double strict_rel(double a, double want) {
  return std::abs(a - want) / std::abs(want);
}

TrajectorySpec two_point_spec() {
  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::kWaypoints;
  spec.waypoints = {Vec3(0.1, -0.2, 0.5), Vec3(0.4, 0.3, 0.1)};
  spec.segment_duration = 2.0;
  spec.blend_time = 0.2;
  return spec;
}

// Simpson per smooth piece. The blend velocity is cubic in t and the cruise
// velocity constant, so Simpson with any even n is exact up to roundoff;
// agreement of the integral of the reported velocity with the reported
// displacement is therefore an independent check that velocity really is the
// derivative of position.
double integrate_speed(const Trajectory& traj, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double sum = traj.sample(lo).velocity.norm() + traj.sample(hi).velocity.norm();
  for (int i = 1; i < n; ++i) {
    const double w = (i % 2 == 1) ? 4.0 : 2.0;
    sum += w * traj.sample(lo + i * h).velocity.norm();
  }
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("segment endpoints are rest points") {
  const TrajectorySpec spec = two_point_spec();
  const Trajectory traj(spec);
  CHECK(traj.duration() == 2.0);

  const TrajectorySample a = traj.sample(0.0);
  CHECK((a.position - spec.waypoints[0]).norm() == 0.0);
  CHECK(a.velocity.norm() == 0.0);
  CHECK(a.acceleration.norm() == 0.0);

  const TrajectorySample b = traj.sample(traj.duration());
  CHECK((b.position - spec.waypoints[1]).norm() < 1e-12);
  CHECK(b.velocity.norm() == 0.0);
  CHECK(b.acceleration.norm() == 0.0);
}

TEST_CASE("profile is symmetric about the segment midpoint") {
  const TrajectorySpec spec = two_point_spec();
  const Trajectory traj(spec);
  const Vec3 mid = 0.5 * (spec.waypoints[0] + spec.waypoints[1]);
  CHECK((traj.sample(1.0).position - mid).norm() < 1e-12);

  testutil::Rng rng(501);
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform(0.0, 2.0);
    const TrajectorySample fwd = traj.sample(t);
    const TrajectorySample bwd = traj.sample(2.0 - t);
    // s(t) + s(T - t) = 1 maps to positions summing to A + B.
    const Vec3 sum = fwd.position + bwd.position;
    const Vec3 want = spec.waypoints[0] + spec.waypoints[1];
    CHECK((sum - want).norm() < 1e-12);
    CHECK((fwd.velocity - bwd.velocity).norm() < 1e-12);
    CHECK((fwd.acceleration + bwd.acceleration).norm() < 1e-11);
  }
}

TEST_CASE("cruise plateau speed and peak blend acceleration match closed forms") {
  const TrajectorySpec spec = two_point_spec();
  const Trajectory traj(spec);
  const double length = (spec.waypoints[1] - spec.waypoints[0]).norm();
  const double v_c = 1.0 / (spec.segment_duration - spec.blend_time);

  // Mid segment sits on the constant-velocity plateau.
  CHECK(strict_rel(traj.sample(1.0).velocity.norm(), length * v_c) < 1e-13);
  CHECK(traj.sample(1.0).acceleration.norm() < 1e-13);

  // Acceleration peaks halfway into the blend at 6 v_c u(1-u)/t_b, u = 1/2.
  const double peak = 6.0 * v_c * 0.25 / spec.blend_time * length;
  CHECK(strict_rel(traj.sample(0.1).acceleration.norm(), peak) < 1e-12);
}

TEST_CASE("velocity is the derivative of position, acceleration of velocity") {
  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::kCubePath;
  spec.anchor = Vec3(0.3, -0.1, 0.7);
  const Trajectory traj(spec);
  const double h = 1e-5;

  testutil::Rng rng(502);
  int tested = 0;
  while (tested < 400) {
    const double t = rng.uniform(2.0 * h, traj.duration() - 2.0 * h);
    // Stay clear of the piecewise joints where third derivatives jump.
    const double local = std::fmod(t, spec.segment_duration);
    const double breaks[4] = {0.0, spec.blend_time,
                              spec.segment_duration - spec.blend_time,
                              spec.segment_duration};
    bool near = false;
    for (double b : breaks) near = near || std::abs(local - b) < 5.0 * h;
    if (near) continue;
    ++tested;

    const TrajectorySample s = traj.sample(t);
    // Central-difference truncation is h^2/6 * |s'''| * edge ~ 3e-10, so the
    // relative bound needs a floor where the blend velocity passes through
    // zero. 1e-3 is under 1% of the 0.111 m/s plateau speed.
    const Vec3 fd_v = (traj.sample(t + h).position - traj.sample(t - h).position)
                      / (2.0 * h);
    CHECK((fd_v - s.velocity).norm() < 1e-6 * (s.velocity.norm() + 1e-3));

    // The fourth derivative is bigger; shrink h and skip near-zero samples
    // (cruise acceleration is exactly zero and differences exactly cancel).
    const double ha = 2e-6;
    const Vec3 fd_a =
        (traj.sample(t + ha).velocity - traj.sample(t - ha).velocity)
        / (2.0 * ha);
    if (s.acceleration.norm() >= 1e-3) {
      CHECK((fd_a - s.acceleration).norm() < 1e-6 * s.acceleration.norm());
    } else {
      CHECK((fd_a - s.acceleration).norm() < 1e-8);
    }
  }
}

TEST_CASE("integrated speed equals the polyline length") {
  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::kCubePath;
  const Trajectory traj(spec);
  // Integrate per smooth piece so Simpson is exact for the cubic blends.
  double total = 0.0;
  for (int k = 0; k < traj.segment_count(); ++k) {
    const double t0 = k * spec.segment_duration;
    total += integrate_speed(traj, t0, t0 + spec.blend_time, 8);
    total += integrate_speed(traj, t0 + spec.blend_time,
                             t0 + spec.segment_duration - spec.blend_time, 8);
    total += integrate_speed(traj, t0 + spec.segment_duration - spec.blend_time,
                             t0 + spec.segment_duration, 8);
  }
  CHECK(strict_rel(total, traj.path_length()) < 1e-12);
}

TEST_CASE("cube walk: twelve segments of one edge each, all corners, closed") {
  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::kCubePath;
  spec.anchor = Vec3(0.25, 0.1, -0.4);
  const Trajectory traj(spec);

  const std::vector<Vec3>& v = traj.vertices();
  REQUIRE(v.size() == 13);
  CHECK(traj.segment_count() == 12);
  CHECK((v.front() - spec.anchor).norm() == 0.0);
  CHECK((v.front() - v.back()).norm() == 0.0);

  int axis_moves[3] = {0, 0, 0};
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    const Vec3 d = v[i + 1] - v[i];
    int moved = 0;
    for (int a = 0; a < 3; ++a) {
      if (d(a) == 0.0) continue;
      ++moved;
      ++axis_moves[a];
      CHECK(std::abs(std::abs(d(a)) - spec.edge) < 1e-15);
    }
    CHECK(moved == 1);
  }
  CHECK(axis_moves[0] + axis_moves[1] + axis_moves[2] == 12);

  std::set<std::array<long long, 3>> corners;
  for (const Vec3& p : v) {
    corners.insert({std::llround((p.x() - spec.anchor.x()) / spec.edge),
                    std::llround((p.y() - spec.anchor.y()) / spec.edge),
                    std::llround((p.z() - spec.anchor.z()) / spec.edge)});
  }
  CHECK(corners.size() == 8);

  CHECK(strict_rel(traj.path_length(), 12 * 0.20) < 1e-12);
  CHECK((traj.sample(0.0).position - traj.sample(traj.duration()).position)
            .norm() < 1e-12);
}

TEST_CASE("triangle: equilateral, closed, in a vertical plane") {
  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::kPlanarTriangle;
  spec.edge = 0.25;
  spec.anchor = Vec3(0.5, 0.2, 0.3);
  const Trajectory traj(spec);

  const std::vector<Vec3>& v = traj.vertices();
  REQUIRE(v.size() == 4);
  CHECK(traj.segment_count() == 3);
  CHECK((v.front() - v.back()).norm() == 0.0);
  for (int i = 0; i < 3; ++i)
    CHECK(strict_rel((v[i + 1] - v[i]).norm(), 0.25) < 1e-12);
  CHECK(strict_rel(traj.path_length(), 3 * 0.25) < 1e-12);

  // World y is up; a vertical plane contains it, so the normal is horizontal.
  const Vec3 n = (v[1] - v[0]).cross(v[2] - v[0]);
  CHECK(std::abs(n.normalized().y()) < 1e-15);
  CHECK(v[1].z() == v[0].z());
  CHECK(v[2].z() == v[0].z());
}

TEST_CASE("hold: no waypoints pins the anchor with zero rates") {
  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::kWaypoints;
  spec.anchor = Vec3(1.0, 2.0, 3.0);
  spec.segment_duration = 5.0;
  const Trajectory traj(spec);
  CHECK(traj.duration() == 5.0);
  CHECK(traj.segment_count() == 0);
  for (double t : {0.0, 1.3, 5.0}) {
    const TrajectorySample s = traj.sample(t);
    CHECK((s.position - spec.anchor).norm() == 0.0);
    CHECK(s.velocity.norm() == 0.0);
    CHECK(s.acceleration.norm() == 0.0);
  }

  // A single waypoint holds that point instead of the anchor.
  TrajectorySpec one = spec;
  one.waypoints = {Vec3(-1.0, 0.5, 0.25)};
  const Trajectory still(one);
  CHECK((still.sample(2.0).position - one.waypoints[0]).norm() == 0.0);
}

TEST_CASE("waypoint list: boundaries and per-segment durations honored") {
  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::kWaypoints;
  spec.waypoints = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 2, 0)};
  spec.durations = {1.0, 3.0};
  spec.blend_time = 0.2;
  const Trajectory traj(spec);
  CHECK(traj.duration() == 4.0);
  CHECK(traj.segment_count() == 2);

  CHECK((traj.sample(1.0).position - spec.waypoints[1]).norm() < 1e-12);
  CHECK(traj.sample(1.0).velocity.norm() < 1e-12);
  CHECK((traj.sample(4.0).position - spec.waypoints[2]).norm() < 1e-12);

  // Continuity across the vertex.
  const Vec3 before = traj.sample(1.0 - 1e-9).position;
  const Vec3 after = traj.sample(1.0 + 1e-9).position;
  CHECK((before - after).norm() < 1e-8);

  // The second segment uses its own 3 s clock: its plateau speed is
  // |B - C| / (3 - 0.2).
  const double v2 = traj.sample(2.5).velocity.norm();
  CHECK(strict_rel(v2, 2.0 / 2.8) < 1e-13);
}

TEST_CASE("free sampler matches the class") {
  TrajectorySpec spec;
  spec.kind = TrajectorySpec::Kind::kPlanarTriangle;
  spec.anchor = Vec3(0.2, 0.0, 0.1);
  const Trajectory traj(spec);
  for (double t : {0.0, 0.7, 1.9, 3.3, 5.99}) {
    const TrajectorySample a = gen_trajectory(spec, t);
    const TrajectorySample b = traj.sample(t);
    CHECK((a.position - b.position).norm() == 0.0);
    CHECK((a.velocity - b.velocity).norm() == 0.0);
    CHECK((a.acceleration - b.acceleration).norm() == 0.0);
  }
}

TEST_CASE("spec validation rejects broken shapes and out-of-range times") {
  TrajectorySpec spec = two_point_spec();

  TrajectorySpec bad = spec;
  bad.edge = 0.0;
  bad.kind = TrajectorySpec::Kind::kCubePath;
  CHECK_THROWS_AS(Trajectory{bad}, ConfigError);

  bad = spec;
  bad.segment_duration = 0.0;
  CHECK_THROWS_AS(Trajectory{bad}, ConfigError);

  bad = spec;
  bad.blend_time = 0.0;
  CHECK_THROWS_AS(Trajectory{bad}, ConfigError);

  bad = spec;
  bad.blend_time = 1.1;  // two blends exceed the 2 s segment
  CHECK_THROWS_AS(Trajectory{bad}, ConfigError);

  bad = spec;
  bad.durations = {1.0};  // two-point path has exactly one segment; size ok
  CHECK_NOTHROW(Trajectory{bad});
  bad.durations = {1.0, 2.0};
  CHECK_THROWS_AS(Trajectory{bad}, ConfigError);

  const Trajectory traj(spec);
  CHECK_THROWS_AS(traj.sample(-1e-9), NumericError);
  CHECK_THROWS_AS(traj.sample(traj.duration() + 1e-9), NumericError);
}

TEST_CASE("config loading") {
  const ConfigMap cfg = ConfigMap::from_string(
      "trajectory.kind = triangle\n"
      "trajectory.edge = 0.3\n"
      "trajectory.segment_duration = 1.5\n"
      "trajectory.blend_time = 0.1\n"
      "trajectory.anchor = 1 2 3\n");
  const TrajectorySpec spec = trajectory_from_config(cfg);
  const Trajectory traj(spec);
  CHECK(traj.duration() == 4.5);
  CHECK((traj.vertices()[0] - Vec3(1, 2, 3)).norm() == 0.0);
  CHECK(strict_rel(traj.path_length(), 0.9) < 1e-12);

  const ConfigMap way = ConfigMap::from_string(
      "trajectory.kind = waypoints\n"
      "trajectory.waypoints = 0 0 0  1 0 0  1 1 0\n"
      "trajectory.durations = 1 2\n");
  const Trajectory wtraj(trajectory_from_config(way));
  CHECK(wtraj.duration() == 3.0);
  CHECK(wtraj.segment_count() == 2);

  const ConfigMap bad = ConfigMap::from_string("trajectory.kind = spiral\n");
  CHECK_THROWS_AS(trajectory_from_config(bad), ConfigError);

  const ConfigMap ragged = ConfigMap::from_string(
      "trajectory.kind = waypoints\n"
      "trajectory.waypoints = 0 0 0  1 0\n");
  CHECK_THROWS_AS(trajectory_from_config(ragged), ConfigError);

  // Defaults: cube walk, 2 s segments.
  const ConfigMap empty = ConfigMap::from_string("");
  const Trajectory dflt(trajectory_from_config(empty));
  CHECK(dflt.segment_count() == 12);
  CHECK(dflt.duration() == 24.0);
}
