#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <vdcsim/emla.hpp>
#include <vdcsim/mlp.hpp>

// Quasi-steady actuator maps and the physics/surrogate blend. The physics
// half inverts the drivetrain balance at constant speed; the surrogate half
// is a trained network over the same (torque, motor rate) inputs. Residual
// blending interpolates the two with a weight in [0, 1].

namespace vdcsim {

struct SteadyPoint {
  double f_ext;  // N, load force opposing rod extension
  double x_dot;  // m/s
};

struct DrivePoint {
  double tau_e;    // N m
  double omega_m;  // rad/s
};

// Closed-form drive state holding a load point (f_ext, x_dot) at constant
// speed: omega from the screw kinematics, torque from the friction, gear
// branch, and backdrive balance.
DrivePoint steady_drive_for(double f_ext, double x_dot, const PmsmParams& p,
                            const DriveTrainParams& d);

// Inverse of steady_drive_for: the load point a drive state settles to. The
// shaft load solves a scalar balance with the power-dependent gear branch,
// bracketed and bisected to machine precision.
SteadyPoint physics_prediction(double tau_e, double omega_m,
                               const PmsmParams& p,
                               const DriveTrainParams& d);

// Quadrant-split efficiency of a predicted load point. Motoring (tau_e > 0,
// omega_m > 0): p_out / (p_in + p_loss). Backdriving (tau_e > 0,
// omega_m < 0): (p_in - p_loss) / p_out. Anything else, the omega_m = 0
// boundary included, is undefined, as is a vanishing denominator. The loss
// model is evaluated at the torque-producing current tau_e / (1.5 p lambda)
// with zero direct-axis current.
std::optional<double> efficiency_estimate(double tau_e, double omega_m,
                                          double f_hat, double xdot_hat,
                                          const LossModel& losses,
                                          const PmsmParams& p);

struct HybridModel {
  PmsmParams motor;
  DriveTrainParams drive;
  LossModel losses;
  MlpModel net;
  NormalizationSpec norm;
  double alpha = 0.5;  // 0 = physics only, 1 = surrogate only
};

struct HybridOutput {
  double f_ext;
  double x_dot;
  std::optional<double> eta;
};

// Residual blend, physics + alpha (surrogate - physics) per output, with
// alpha clamped to [0, 1]. The endpoints return the respective source
// bit-exactly. Efficiency follows the same blend; away from the endpoints
// it is undefined whenever either operand is undefined.
HybridOutput hybrid_predict(const HybridModel& h, double omega_m,
                            double tau_e);

struct GridSpec {
  double f_max = 70e3;  // N
  double v_max = 0.07;  // m/s
  int n_force = 24;
  int n_speed = 24;

  void validate() const;  // positive spans, at least two points per axis

  double force_at(int i) const;
  double speed_at(int j) const;
};

// Multiplicative efficiency droop applied to recorded targets, plus seeded
// Gaussian noise. With commanded grid values F and v:
//   F_rec = F [1 - force_droop (F/f_max)(0.5 + 0.5 v/v_max)] + force_noise xi
//   v_rec = v [1 - speed_droop (v/v_max)(0.5 + 0.5 F/f_max)] + speed_noise xi
// Zero settings leave the physics manifold untouched.
struct DisturbanceSpec {
  double force_droop = 0.0;
  double speed_droop = 0.0;
  double force_noise = 0.0;  // N
  double speed_noise = 0.0;  // m/s

  void validate() const;  // droops in [0, 1), noise non-negative
};

struct DatasetBuild {
  Dataset data;  // inputs (tau_e, omega_m), targets (f_ext, x_dot)
  int skipped = 0;
  std::vector<std::string> log;  // one line per skipped grid point
};

// Sweeps the load grid, runs the plant at each point until the drive state
// is quasi-steady, and records (tau_e, omega_m) -> (f_ext, x_dot) with the
// disturbance applied. Points that fail to settle are skipped and logged.
DatasetBuild generate_dataset(const PmsmParams& p, const DriveTrainParams& d,
                              const GridSpec& grid,
                              const DisturbanceSpec& disturbance,
                              uint64_t seed);

// Dense efficiency surface over the load grid, rows indexed by force and
// columns by speed; undefined cells are NaN.
Eigen::MatrixXd efficiency_map(const HybridModel& h, const GridSpec& grid);

// First row carries the speed axis, first column the force axis; undefined
// cells are written as nan. Values use %.17g.
void write_efficiency_map_csv(const std::string& path, const GridSpec& grid,
                              const Eigen::MatrixXd& map);

// Header tau_e,omega_m,F_ext,x_dot; %.17g values.
void save_dataset_csv(const std::string& path, const Dataset& data);
Dataset load_dataset_csv(const std::string& path);

// Keys surrogate.grid.{f_max,v_max,n_force,n_speed} and
// surrogate.disturbance.{force_droop,speed_droop,force_noise,speed_noise}.
GridSpec grid_from_config(const ConfigMap& cfg);
DisturbanceSpec disturbance_from_config(const ConfigMap& cfg);

}  // namespace vdcsim
