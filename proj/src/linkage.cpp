#include <vdcsim/linkage.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <vdcsim/config.hpp>

namespace vdcsim {

namespace {

constexpr double kPi = std::numbers::pi;

double checked_acos(double arg, const char* triangle,
                    const SolverGuards& guards) {
  if (std::abs(arg) > 1.0 + guards.domain_tol) {
    std::ostringstream msg;
    msg << "workspace violation in triangle " << triangle
        << ": arccos argument " << arg << " outside [-1, 1]";
    throw WorkspaceError(msg.str());
  }
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

double checked_asin(double arg, const char* triangle,
                    const SolverGuards& guards) {
  if (std::abs(arg) > 1.0 + guards.domain_tol) {
    std::ostringstream msg;
    msg << "workspace violation in triangle " << triangle
        << ": arcsin argument " << arg << " outside [-1, 1]";
    throw WorkspaceError(msg.str());
  }
  return std::asin(std::clamp(arg, -1.0, 1.0));
}

double checked_side(double squared, const char* triangle,
                    const SolverGuards& guards) {
  if (squared < guards.eps_sing * guards.eps_sing) {
    std::ostringstream msg;
    msg << "workspace violation in triangle " << triangle
        << ": side length collapsed (squared length " << squared << ")";
    throw WorkspaceError(msg.str());
  }
  return std::sqrt(squared);
}

void require_nonsingular(double value, const char* what,
                         const SolverGuards& guards) {
  if (std::abs(value) < guards.eps_sing) {
    std::ostringstream msg;
    msg << "kinematic singularity: |" << what << "| = " << std::abs(value)
        << " below guard " << guards.eps_sing;
    throw SingularityError(msg.str());
  }
}

}  // namespace

double lift_angle(double zeta, const ThreeBarGeometry& g) {
  return (-kPi / 2.0 - g.beta1 - g.beta2) + zeta;
}

double lift_sensor_angle(double q, const ThreeBarGeometry& g) {
  return q + kPi / 2.0 + g.beta1 + g.beta2;
}

ThreeBarPose three_bar_positions(double q, const ThreeBarGeometry& g,
                                 const SolverGuards& guards) {
  ThreeBarPose p;
  p.q = q;
  p.closing = checked_side(
      g.L1 * g.L1 + g.L2 * g.L2 + 2.0 * g.L1 * g.L2 * std::cos(q),
      "hinge triangle", guards);
  p.x = p.closing - g.x0;
  const double l = p.closing;
  p.q1 = -checked_acos((l * l + g.L2 * g.L2 - g.L1 * g.L1) / (2.0 * l * g.L2),
                       "hinge triangle (anchor corner)", guards);
  p.q2 = -checked_acos((l * l + g.L1 * g.L1 - g.L2 * g.L2) / (2.0 * l * g.L1),
                       "hinge triangle (attachment corner)", guards);
  return p;
}

ThreeBarRates three_bar_velocities(const ThreeBarPose& p, double dq,
                                   const ThreeBarGeometry& g,
                                   const SolverGuards& guards) {
  const double l = p.closing;
  const double sq1 = std::sin(p.q1);
  const double sq2 = std::sin(p.q2);
  require_nonsingular(sq1, "sin q1", guards);
  require_nonsingular(sq2, "sin q2", guards);
  ThreeBarRates r;
  r.dx = -(g.L1 * g.L2 * std::sin(p.q) / l) * dq;
  r.dq1 = -((l - g.L2 * std::cos(p.q1)) / (l * g.L2 * sq1)) * r.dx;
  r.dq2 = -((l - g.L1 * std::cos(p.q2)) / (l * g.L1 * sq2)) * r.dx;
  return r;
}

double three_bar_angle_from_length(double length, const ThreeBarGeometry& g,
                                   const SolverGuards& guards) {
  const double arg =
      (length * length - g.L1 * g.L1 - g.L2 * g.L2) / (2.0 * g.L1 * g.L2);
  return -checked_acos(arg, "hinge triangle (stroke inverse)", guards);
}

FourBarPose four_bar_solve(double zeta, const FourBarGeometry& g,
                           const SolverGuards& guards) {
  FourBarPose p;
  p.gamma2 = g.gamma1 + kPi + zeta;
  // The cascade models one assembly branch: crank above the frame axis and
  // an acute angle at B, so that arcsin returns the true triangle angle.
  // Outside that branch the formulas would return a geometrically
  // inconsistent pose, which must fail loudly instead.
  if (std::sin(p.gamma2) < -guards.domain_tol)
    throw WorkspaceError(
        "workspace violation in triangle ABC: crank below the frame axis, "
        "outside the modeled assembly branch");
  if (g.d2 * std::cos(p.gamma2) > g.d1 + guards.domain_tol)
    throw WorkspaceError(
        "workspace violation in triangle ABC: angle at B obtuse, outside "
        "the arcsin branch of the cascade");
  p.d3 = checked_side(
      g.d1 * g.d1 + g.d2 * g.d2 - 2.0 * g.d1 * g.d2 * std::cos(p.gamma2),
      "ABC", guards);
  p.gamma3 = checked_asin(g.d2 * std::sin(p.gamma2) / p.d3, "ABC", guards);
  p.gamma4 = checked_acos(
      (p.d3 * p.d3 + g.d4 * g.d4 - g.d5 * g.d5) / (2.0 * p.d3 * g.d4), "BCD",
      guards);
  p.gamma5 = p.gamma3 + p.gamma4;
  p.L1 = checked_side(
      g.d1 * g.d1 + g.d4 * g.d4 - 2.0 * g.d1 * g.d4 * std::cos(p.gamma5),
      "ABD", guards);
  p.gamma6 = checked_acos(
      (g.d2 * g.d2 + p.L1 * p.L1 - g.d5 * g.d5) / (2.0 * g.d2 * p.L1), "ACD",
      guards);
  p.q = -g.gamma7 - p.gamma6 + zeta;
  p.closing = checked_side(
      p.L1 * p.L1 + g.L2 * g.L2 + 2.0 * p.L1 * g.L2 * std::cos(p.q),
      "actuator triangle", guards);
  p.x = p.closing - g.x0;
  const double l = p.closing;
  p.q1 = -checked_acos((l * l + g.L2 * g.L2 - p.L1 * p.L1) / (2.0 * l * g.L2),
                       "actuator triangle (anchor corner)", guards);
  p.q2 = -checked_acos((l * l + p.L1 * p.L1 - g.L2 * g.L2) / (2.0 * l * p.L1),
                       "actuator triangle (attachment corner)", guards);
  return p;
}

FourBarRates four_bar_velocities(const FourBarPose& p, double dzeta,
                                 const FourBarGeometry& g,
                                 const SolverGuards& guards) {
  FourBarRates r;
  const double dgamma2 = dzeta;
  r.dd3 = g.d1 * g.d2 * std::sin(p.gamma2) / p.d3 * dgamma2;

  // gamma3 = arcsin(d2 sin gamma2 / d3); the arcsin branch keeps
  // cos gamma3 > 0, so the division below is safe away from +-pi/2.
  const double cg3 = std::cos(p.gamma3);
  require_nonsingular(cg3, "cos gamma3", guards);
  const double du = g.d2 *
                    (std::cos(p.gamma2) * dgamma2 * p.d3 -
                     std::sin(p.gamma2) * r.dd3) /
                    (p.d3 * p.d3);
  r.dgamma3 = du / cg3;

  const double sg4 = std::sin(p.gamma4);
  require_nonsingular(sg4, "sin gamma4", guards);
  const double dw =
      (p.d3 * p.d3 - g.d4 * g.d4 + g.d5 * g.d5) / (2.0 * p.d3 * p.d3 * g.d4) *
      r.dd3;
  r.dgamma4 = -dw / sg4;

  r.dgamma5 = r.dgamma3 + r.dgamma4;
  r.dL1 = g.d1 * g.d4 * std::sin(p.gamma5) / p.L1 * r.dgamma5;

  const double sg6 = std::sin(p.gamma6);
  require_nonsingular(sg6, "sin gamma6", guards);
  const double dv = (p.L1 * p.L1 - g.d2 * g.d2 + g.d5 * g.d5) /
                    (2.0 * g.d2 * p.L1 * p.L1) * r.dL1;
  r.dgamma6 = -dv / sg6;

  r.dq = dzeta - r.dgamma6;

  // Actuator triangle: both the apex angle q and the side L1 move.
  const double l = p.closing;
  r.dx = ((p.L1 + g.L2 * std::cos(p.q)) * r.dL1 -
          p.L1 * g.L2 * std::sin(p.q) * r.dq) /
         l;

  const double sq1 = std::sin(p.q1);
  const double sq2 = std::sin(p.q2);
  require_nonsingular(sq1, "sin q1", guards);
  require_nonsingular(sq2, "sin q2", guards);
  const double dc1 =
      (l * l - g.L2 * g.L2 + p.L1 * p.L1) / (2.0 * l * l * g.L2) * r.dx -
      p.L1 / (l * g.L2) * r.dL1;
  r.dq1 = -dc1 / sq1;
  const double dc2 =
      (l * l + g.L2 * g.L2 - p.L1 * p.L1) / (2.0 * l * l * p.L1) * r.dx +
      (p.L1 * p.L1 - l * l + g.L2 * g.L2) / (2.0 * l * p.L1 * p.L1) * r.dL1;
  r.dq2 = -dc2 / sq2;
  return r;
}

double four_bar_sensor_from_stroke(double x, double zeta_guess,
                                   const FourBarGeometry& g,
                                   const SolverGuards& guards) {
  double zeta = zeta_guess;
  FourBarPose p = four_bar_solve(zeta, g, guards);
  for (int it = 0; it < 100; ++it) {
    const double err = p.x - x;
    if (std::abs(err) < 1e-12) return zeta;
    const FourBarRates r = four_bar_velocities(p, 1.0, g, guards);
    require_nonsingular(r.dx, "dx/dzeta (stroke inverse)", guards);
    // Step limit keeps iterates near the warm start; backtracking halves
    // any step that would leave the workspace.
    double step = std::clamp(-err / r.dx, -0.2, 0.2);
    for (int back = 0;; ++back) {
      try {
        p = four_bar_solve(zeta + step, g, guards);
        zeta += step;
        break;
      } catch (const WorkspaceError&) {
        if (back >= 30) throw;
        step *= 0.5;
      }
    }
  }
  throw NumericError("four_bar_sensor_from_stroke: no convergence in 100 iterations");
}

ThreeBarGeometry three_bar_from_config(const ConfigMap& cfg,
                                       const std::string& prefix) {
  ThreeBarGeometry g;
  g.L1 = cfg.get_double(prefix + ".L1");
  g.L2 = cfg.get_double(prefix + ".L2");
  g.x0 = cfg.get_double(prefix + ".x0");
  g.beta1 = cfg.get_double(prefix + ".beta1");
  g.beta2 = cfg.get_double(prefix + ".beta2");
  g.lc = cfg.get_double(prefix + ".lc", 0.0);
  if (g.L1 <= 0.0 || g.L2 <= 0.0)
    throw ConfigError(prefix + ": link lengths must be positive");
  return g;
}

FourBarGeometry four_bar_from_config(const ConfigMap& cfg,
                                     const std::string& prefix) {
  FourBarGeometry g;
  g.d1 = cfg.get_double(prefix + ".d1");
  g.d2 = cfg.get_double(prefix + ".d2");
  g.d4 = cfg.get_double(prefix + ".d4");
  g.d5 = cfg.get_double(prefix + ".d5");
  g.gamma1 = cfg.get_double(prefix + ".gamma1");
  g.gamma7 = cfg.get_double(prefix + ".gamma7");
  g.L2 = cfg.get_double(prefix + ".L2");
  g.x0 = cfg.get_double(prefix + ".x0");
  g.lc = cfg.get_double(prefix + ".lc", 0.0);
  if (g.d1 <= 0.0 || g.d2 <= 0.0 || g.d4 <= 0.0 || g.d5 <= 0.0 || g.L2 <= 0.0)
    throw ConfigError(prefix + ": link lengths must be positive");
  return g;
}

SolverGuards guards_from_config(const ConfigMap& cfg) {
  SolverGuards guards;
  guards.domain_tol = cfg.get_double("guards.domain_tol", guards.domain_tol);
  guards.eps_sing = cfg.get_double("guards.eps_sing", guards.eps_sing);
  return guards;
}

}  // namespace vdcsim
