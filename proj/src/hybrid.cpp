#include <vdcsim/hybrid.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <vdcsim/config.hpp>

namespace vdcsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Settle schedule for the dataset sweep: long enough to damp the interface
// mode, short enough that the rod barely moves at full speed.
constexpr double kSettleDt = 1e-4;
constexpr int kSettleSteps = 400;

// Shaft-side torque demand seen by the motor for a given screw load.
double shaft_demand(double load, double screw_w, const DriveTrainParams& d) {
  return gear_branch(load * screw_w, d.eta_gear) * load / d.n_gear;
}

// Box-Muller from raw generator bits, so the noise stream is pinned to the
// seed and nothing else.
double normal_bits(std::mt19937_64& gen) {
  const double u1 = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  const double u2 = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(kTwoPi * u2);
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Torque-producing current under zero direct-axis control.
double quadrature_current(double tau_e, const PmsmParams& p) {
  return tau_e / (1.5 * p.pole_pairs * p.lambda_m);
}

}  // namespace

DrivePoint steady_drive_for(double f_ext, double x_dot, const PmsmParams& p,
                            const DriveTrainParams& d) {
  const double omega = kTwoPi * d.n_gear * x_dot / d.lead;
  const double screw_w = omega / d.n_gear;
  const double f_i = f_ext + d.c_act * x_dot;
  const double load = d.c_s * screw_w + d.lead / kTwoPi * f_i;
  return {motor_friction(omega, p) + shaft_demand(load, screw_w, d), omega};
}

SteadyPoint physics_prediction(double tau_e, double omega_m,
                               const PmsmParams& p,
                               const DriveTrainParams& d) {
  const double screw_w = omega_m / d.n_gear;
  const double rhs = tau_e - motor_friction(omega_m, p);

  // shaft_demand is strictly increasing in the load for any usable gear
  // efficiency, so the bracket below always straddles the root: the branch
  // factor lies in [eta, 1/eta].
  double lo = -(std::abs(rhs) + 1.0) * d.n_gear / d.eta_gear;
  double hi = -lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shaft_demand(mid, screw_w, d) < rhs) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double load = 0.5 * (lo + hi);

  const double tau_bd = load - d.c_s * screw_w;
  const double x_dot = d.lead / kTwoPi * screw_w;
  const double f_ext = kTwoPi / d.lead * tau_bd - d.c_act * x_dot;
  return {f_ext, x_dot};
}

std::optional<double> efficiency_estimate(double tau_e, double omega_m,
                                          double f_hat, double xdot_hat,
                                          const LossModel& losses,
                                          const PmsmParams& p) {
  if (!(tau_e > 0.0) || omega_m == 0.0) return std::nullopt;
  const double p_in = tau_e * omega_m;
  const double p_loss =
      losses.total(0.0, quadrature_current(tau_e, p), omega_m);
  if (omega_m > 0.0) {
    const double den = p_in + p_loss;
    if (std::abs(den) < kEfficiencyDenEps) return std::nullopt;
    return f_hat * xdot_hat / den;
  }
  const double p_out = f_hat * xdot_hat;
  if (std::abs(p_out) < kEfficiencyDenEps) return std::nullopt;
  return (p_in - p_loss) / p_out;
}

HybridOutput hybrid_predict(const HybridModel& h, double omega_m,
                            double tau_e) {
  h.motor.validate();
  h.drive.validate();
  h.losses.validate();

  const SteadyPoint phys =
      physics_prediction(tau_e, omega_m, h.motor, h.drive);
  const auto [f_sur, v_sur] = forward(h.net, h.norm, tau_e, omega_m);
  const double a = std::clamp(h.alpha, 0.0, 1.0);

  HybridOutput out;
  if (a == 0.0) {
    out.f_ext = phys.f_ext;
    out.x_dot = phys.x_dot;
  } else if (a == 1.0) {
    out.f_ext = f_sur;
    out.x_dot = v_sur;
  } else {
    out.f_ext = phys.f_ext + a * (f_sur - phys.f_ext);
    out.x_dot = phys.x_dot + a * (v_sur - phys.x_dot);
  }

  const std::optional<double> eta_phys = efficiency_estimate(
      tau_e, omega_m, phys.f_ext, phys.x_dot, h.losses, h.motor);
  const std::optional<double> eta_sur =
      efficiency_estimate(tau_e, omega_m, f_sur, v_sur, h.losses, h.motor);
  if (a == 0.0) {
    out.eta = eta_phys;
  } else if (a == 1.0) {
    out.eta = eta_sur;
  } else if (eta_phys && eta_sur) {
    out.eta = *eta_phys + a * (*eta_sur - *eta_phys);
  }
  return out;
}

void GridSpec::validate() const {
  if (!(f_max > 0.0) || !(v_max > 0.0))
    throw ConfigError("grid spans must be positive");
  if (n_force < 2 || n_speed < 2)
    throw ConfigError("grid needs at least two points per axis");
}

double GridSpec::force_at(int i) const {
  return f_max * static_cast<double>(i) / (n_force - 1);
}

double GridSpec::speed_at(int j) const {
  return v_max * static_cast<double>(j) / (n_speed - 1);
}

void DisturbanceSpec::validate() const {
  if (force_droop < 0.0 || force_droop >= 1.0 || speed_droop < 0.0 ||
      speed_droop >= 1.0)
    throw ConfigError("droop fractions must lie in [0, 1)");
  if (force_noise < 0.0 || speed_noise < 0.0)
    throw ConfigError("noise levels must be non-negative");
}

DatasetBuild generate_dataset(const PmsmParams& p, const DriveTrainParams& d,
                              const GridSpec& grid,
                              const DisturbanceSpec& disturbance,
                              uint64_t seed) {
  p.validate();
  d.validate();
  grid.validate();
  disturbance.validate();

  std::mt19937_64 gen(seed);
  std::vector<Eigen::Vector4d> rows;
  rows.reserve(static_cast<size_t>(grid.n_force) *
               static_cast<size_t>(grid.n_speed));
  DatasetBuild build;

  // Force-major sweep, speed varying fastest.
  for (int i = 0; i < grid.n_force; ++i) {
    for (int j = 0; j < grid.n_speed; ++j) {
      const double f_cmd = grid.force_at(i);
      const double v_cmd = grid.speed_at(j);
      const DrivePoint dp = steady_drive_for(f_cmd, v_cmd, p, d);

      // Start at the analytic equilibrium and let the plant confirm it.
      EmlaState s = rest_state(d);
      s.i_d = 0.0;
      s.i_q = quadrature_current(dp.tau_e, p);
      s.omega_m = dp.omega_m;
      s.x_dot = v_cmd;
      s.x_n = s.x + (f_cmd + d.c_act * v_cmd) / stiffness(s.x, d);
      const double v_d = -p.pole_pairs * s.omega_m * p.l_q * s.i_q;
      const double v_q =
          p.r_s * s.i_q + p.pole_pairs * s.omega_m * p.lambda_m;

      const double xi_f = normal_bits(gen);
      const double xi_v = normal_bits(gen);

      bool settled = true;
      std::string reason;
      try {
        for (int k = 0; k < kSettleSteps; ++k) s = step(s, v_d, v_q, f_cmd, kSettleDt, p, d);
      } catch (const std::exception& e) {
        settled = false;
        reason = e.what();
      }
      if (settled &&
          (std::abs(s.omega_m - dp.omega_m) >
               1e-3 * (1.0 + std::abs(dp.omega_m)) ||
           std::abs(s.x_dot - v_cmd) > 1e-3 * (1e-3 + std::abs(v_cmd)))) {
        settled = false;
        reason = "did not settle";
      }
      if (!settled) {
        ++build.skipped;
        build.log.push_back("skip F=" + format_g17(f_cmd) +
                            " v=" + format_g17(v_cmd) + ": " + reason);
        continue;
      }

      const double m_f = 1.0 - disturbance.force_droop * (f_cmd / grid.f_max) *
                                   (0.5 + 0.5 * v_cmd / grid.v_max);
      const double m_v = 1.0 - disturbance.speed_droop * (v_cmd / grid.v_max) *
                                   (0.5 + 0.5 * f_cmd / grid.f_max);
      Eigen::Vector4d row;
      row << em_torque(s, p), s.omega_m,
          f_cmd * m_f + disturbance.force_noise * xi_f,
          s.x_dot * m_v + disturbance.speed_noise * xi_v;
      rows.push_back(row);
    }
  }

  build.data.inputs.resize(static_cast<int>(rows.size()), 2);
  build.data.targets.resize(static_cast<int>(rows.size()), 2);
  for (size_t r = 0; r < rows.size(); ++r) {
    build.data.inputs(static_cast<int>(r), 0) = rows[r](0);
    build.data.inputs(static_cast<int>(r), 1) = rows[r](1);
    build.data.targets(static_cast<int>(r), 0) = rows[r](2);
    build.data.targets(static_cast<int>(r), 1) = rows[r](3);
  }
  return build;
}

Eigen::MatrixXd efficiency_map(const HybridModel& h, const GridSpec& grid) {
  grid.validate();
  Eigen::MatrixXd map(grid.n_force, grid.n_speed);
  for (int i = 0; i < grid.n_force; ++i)
    for (int j = 0; j < grid.n_speed; ++j) {
      const DrivePoint dp =
          steady_drive_for(grid.force_at(i), grid.speed_at(j), h.motor,
                           h.drive);
      const HybridOutput out = hybrid_predict(h, dp.omega_m, dp.tau_e);
      map(i, j) =
          out.eta ? *out.eta : std::numeric_limits<double>::quiet_NaN();
    }
  return map;
}

void write_efficiency_map_csv(const std::string& path, const GridSpec& grid,
                              const Eigen::MatrixXd& map) {
  if (map.rows() != grid.n_force || map.cols() != grid.n_speed)
    throw ConfigError("efficiency map shape does not match its grid");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write efficiency map: " + path);
  out << "force_n\\speed_mps";
  for (int j = 0; j < grid.n_speed; ++j)
    out << "," << format_g17(grid.speed_at(j));
  out << "\n";
  for (int i = 0; i < grid.n_force; ++i) {
    out << format_g17(grid.force_at(i));
    for (int j = 0; j < grid.n_speed; ++j) out << "," << format_g17(map(i, j));
    out << "\n";
  }
  if (!out) throw ConfigError("failed writing efficiency map: " + path);
}

void save_dataset_csv(const std::string& path, const Dataset& data) {
  if (data.inputs.cols() != 2 || data.targets.cols() != 2 ||
      data.inputs.rows() != data.targets.rows())
    throw ConfigError("dataset must be two inputs and two targets per row");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write dataset: " + path);
  out << "tau_e,omega_m,F_ext,x_dot\n";
  for (int r = 0; r < data.inputs.rows(); ++r)
    out << format_g17(data.inputs(r, 0)) << ","
        << format_g17(data.inputs(r, 1)) << ","
        << format_g17(data.targets(r, 0)) << ","
        << format_g17(data.targets(r, 1)) << "\n";
  if (!out) throw ConfigError("failed writing dataset: " + path);
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "tau_e,omega_m,F_ext,x_dot")
    throw ConfigError("dataset header mismatch: " + path);

  std::vector<Eigen::Vector4d> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    Eigen::Vector4d row;
    std::string tok;
    for (int k = 0; k < 4; ++k) {
      if (!std::getline(ss, tok, ','))
        throw ConfigError("dataset row too short: " + path);
      size_t used = 0;
      row(k) = std::stod(tok, &used);
      if (used != tok.size())
        throw ConfigError("dataset cell is not a number: " + path);
    }
    if (std::getline(ss, tok, ','))
      throw ConfigError("dataset row too long: " + path);
    rows.push_back(row);
  }

  Dataset data;
  data.inputs.resize(static_cast<int>(rows.size()), 2);
  data.targets.resize(static_cast<int>(rows.size()), 2);
  for (size_t r = 0; r < rows.size(); ++r) {
    data.inputs(static_cast<int>(r), 0) = rows[r](0);
    data.inputs(static_cast<int>(r), 1) = rows[r](1);
    data.targets(static_cast<int>(r), 0) = rows[r](2);
    data.targets(static_cast<int>(r), 1) = rows[r](3);
  }
  return data;
}

GridSpec grid_from_config(const ConfigMap& cfg) {
  GridSpec g;
  g.f_max = cfg.get_double("surrogate.grid.f_max", g.f_max);
  g.v_max = cfg.get_double("surrogate.grid.v_max", g.v_max);
  g.n_force = cfg.get_int("surrogate.grid.n_force", g.n_force);
  g.n_speed = cfg.get_int("surrogate.grid.n_speed", g.n_speed);
  g.validate();
  return g;
}

DisturbanceSpec disturbance_from_config(const ConfigMap& cfg) {
  DisturbanceSpec ds;
  ds.force_droop =
      cfg.get_double("surrogate.disturbance.force_droop", ds.force_droop);
  ds.speed_droop =
      cfg.get_double("surrogate.disturbance.speed_droop", ds.speed_droop);
  ds.force_noise =
      cfg.get_double("surrogate.disturbance.force_noise", ds.force_noise);
  ds.speed_noise =
      cfg.get_double("surrogate.disturbance.speed_noise", ds.speed_noise);
  ds.validate();
  return ds;
}

}  // namespace vdcsim
