#include <vdcsim/emla.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <vdcsim/config.hpp>

namespace vdcsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw ConfigError(std::string("emla parameter must be positive: ") + name);
  }
}

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0)) {
    throw ConfigError(std::string("emla loss coefficient must be non-negative: ") +
                      name);
  }
}

double interface_force(const EmlaState& s, double k_b,
                       const DriveTrainParams& d) {
  const double nut_v = d.lead / kTwoPi * (s.omega_m / d.n_gear);
  return d.c_b * (nut_v - s.x_dot) + k_b * (s.x_n - s.x);
}

// Everything mechanical_rates and the energy ledger need from one state.
struct DriveFlow {
  double k_b;
  double screw_w;
  double nut_v;
  double f_i;
  double tau_bd;
  double p_s;
  double branch;
  double domega;
  double dx_dot;
};

DriveFlow drive_flow(const EmlaState& s, double tau_e, double f_ext,
                     const PmsmParams& p, const DriveTrainParams& d) {
  DriveFlow f;
  f.k_b = stiffness(s.x, d);
  f.screw_w = s.omega_m / d.n_gear;
  f.nut_v = d.lead / kTwoPi * f.screw_w;
  f.f_i = interface_force(s, f.k_b, d);
  f.tau_bd = d.lead / kTwoPi * f.f_i;
  const double load = d.c_s * f.screw_w + f.tau_bd;
  f.p_s = load * f.screw_w;
  f.branch = gear_branch(f.p_s, d.eta_gear);
  f.domega = (tau_e - motor_friction(s.omega_m, p) -
              f.branch * load / d.n_gear) /
             reflected_inertia(p, d);
  f.dx_dot = (f.f_i - d.c_act * s.x_dot - f_ext) / d.m_act;
  return f;
}

double magnetic_energy(const EmlaState& s, const PmsmParams& p) {
  return 0.75 * (p.l_d * s.i_d * s.i_d + p.l_q * s.i_q * s.i_q);
}

double kinetic_energy(const EmlaState& s, const PmsmParams& p,
                      const DriveTrainParams& d) {
  return 0.5 * (reflected_inertia(p, d) * s.omega_m * s.omega_m +
                d.m_act * s.x_dot * s.x_dot);
}

// Integration vector: the seven states followed by ten power accumulators.
constexpr int kStates = 7;
constexpr int kDims = 17;
using Vec = std::array<double, kDims>;

EmlaState unpack(const Vec& y) {
  EmlaState s;
  s.i_d = y[0];
  s.i_q = y[1];
  s.theta_m = y[2];
  s.omega_m = y[3];
  s.x_n = y[4];
  s.x = y[5];
  s.x_dot = y[6];
  return s;
}

Vec derivatives(const Vec& y, double v_d, double v_q, double f_ext,
                const PmsmParams& p, const DriveTrainParams& d) {
  const EmlaState s = unpack(y);
  const ElectricalRates er = electrical_rates(s, v_d, v_q, p);
  const double tau_e = em_torque(s, p);
  const DriveFlow f = drive_flow(s, tau_e, f_ext, p, d);
  Vec dy;
  dy[0] = er.di_d;
  dy[1] = er.di_q;
  dy[2] = s.omega_m;
  dy[3] = f.domega;
  dy[4] = f.nut_v;
  dy[5] = s.x_dot;
  dy[6] = f.dx_dot;
  dy[7] = 1.5 * (v_d * s.i_d + v_q * s.i_q);
  dy[8] = 1.5 * p.r_s * (s.i_d * s.i_d + s.i_q * s.i_q);
  dy[9] = p.c_m * s.omega_m * s.omega_m;
  dy[10] = p.tau_c * std::tanh(s.omega_m / kCoulombRateEps) * s.omega_m;
  dy[11] = (f.branch - 1.0) * f.p_s;
  dy[12] = d.c_s * f.screw_w * f.screw_w;
  dy[13] = d.c_b * (f.nut_v - s.x_dot) * (f.nut_v - s.x_dot);
  dy[14] = d.c_act * s.x_dot * s.x_dot;
  dy[15] = f_ext * s.x_dot;
  dy[16] = f.k_b * (s.x_n - s.x) * (f.nut_v - s.x_dot);
  return dy;
}

}  // namespace

double gear_branch(double p_s, double eta) {
  return std::exp(std::log(1.0 / eta) * std::tanh(p_s / kGearBlendPowerEps));
}

double motor_friction(double omega_m, const PmsmParams& p) {
  return p.c_m * omega_m + p.tau_c * std::tanh(omega_m / kCoulombRateEps);
}

void PmsmParams::validate() const {
  require_positive(r_s, "r_s");
  require_positive(l_d, "l_d");
  require_positive(l_q, "l_q");
  require_positive(lambda_m, "lambda_m");
  if (pole_pairs < 1) throw ConfigError("emla pole_pairs must be at least 1");
  require_positive(j_m, "j_m");
  require_positive(c_m, "c_m");
  require_positive(tau_c, "tau_c");
}

void DriveTrainParams::validate() const {
  require_positive(n_gear, "n_gear");
  require_positive(eta_gear, "eta_gear");
  if (eta_gear > 1.0) throw ConfigError("emla eta_gear must not exceed 1");
  require_positive(lead, "lead");
  require_positive(j_s, "j_s");
  require_positive(c_s, "c_s");
  require_positive(c_b, "c_b");
  require_positive(m_act, "m_act");
  require_positive(c_act, "c_act");
  require_positive(k_s, "k_s");
  require_positive(k_br, "k_br");
  require_positive(k_n, "k_n");
  require_positive(k_r, "k_r");
  require_positive(k_rot, "k_rot");
  require_positive(stroke, "stroke");
}

void LossModel::validate() const {
  require_non_negative(k_cu, "k_cu");
  require_non_negative(sw_const, "sw_const");
  require_non_negative(sw_lin, "sw_lin");
  require_non_negative(sw_quad, "sw_quad");
  require_non_negative(core_lin, "core_lin");
  require_non_negative(core_quad, "core_quad");
  require_non_negative(mech_lin, "mech_lin");
  require_non_negative(mech_quad, "mech_quad");
}

double LossModel::copper(double i_d, double i_q) const {
  return k_cu * (i_d * i_d + i_q * i_q);
}

double LossModel::switching(double i_d, double i_q) const {
  const double mag = std::hypot(i_d, i_q);
  return sw_const + sw_lin * mag + sw_quad * mag * mag;
}

double LossModel::core(double omega_m) const {
  return core_lin * std::abs(omega_m) + core_quad * omega_m * omega_m;
}

double LossModel::mechanical(double omega_m) const {
  return mech_lin * std::abs(omega_m) + mech_quad * omega_m * omega_m;
}

double LossModel::total(double i_d, double i_q, double omega_m) const {
  return copper(i_d, i_q) + switching(i_d, i_q) + core(omega_m) +
         mechanical(omega_m);
}

LossModel default_losses(const PmsmParams& p) {
  LossModel l;
  l.k_cu = 1.5 * p.r_s;
  return l;
}

EmlaState rest_state(const DriveTrainParams& d) {
  EmlaState s;
  s.x = 0.5 * d.stroke;
  s.x_n = s.x;
  return s;
}

double screw_rate(const EmlaState& s, const DriveTrainParams& d) {
  return s.omega_m / d.n_gear;
}

double nut_rate(const EmlaState& s, const DriveTrainParams& d) {
  return d.lead / kTwoPi * (s.omega_m / d.n_gear);
}

double reflected_inertia(const PmsmParams& p, const DriveTrainParams& d) {
  return p.j_m + d.j_s / (d.n_gear * d.n_gear);
}

ElectricalRates electrical_rates(const EmlaState& s, double v_d, double v_q,
                                 const PmsmParams& p) {
  const double lambda_d = p.l_d * s.i_d + p.lambda_m;
  const double lambda_q = p.l_q * s.i_q;
  const double pw = p.pole_pairs * s.omega_m;
  ElectricalRates r;
  r.di_d = (v_d - p.r_s * s.i_d + pw * lambda_q) / p.l_d;
  r.di_q = (v_q - p.r_s * s.i_q - pw * lambda_d) / p.l_q;
  return r;
}

double em_torque(const EmlaState& s, const PmsmParams& p) {
  const double lambda_d = p.l_d * s.i_d + p.lambda_m;
  const double lambda_q = p.l_q * s.i_q;
  return 1.5 * p.pole_pairs * (lambda_d * s.i_q - lambda_q * s.i_d);
}

double engaged_length(double x, double stroke) {
  return x * (stroke - x) / stroke;
}

double stiffness(double x, const DriveTrainParams& d) {
  if (!(x > 0.0) || !(x < d.stroke)) {
    throw WorkspaceError("rod position outside the stroke: x=" +
                         std::to_string(x) + ", stroke=" +
                         std::to_string(d.stroke));
  }
  const double ls = engaged_length(x, d.stroke);
  const double compliance = ls / d.k_s + 1.0 / (2.0 * d.k_br) + 1.0 / d.k_n +
                            1.0 / d.k_r +
                            d.lead * d.lead * x / (kTwoPi * kTwoPi * d.k_rot);
  return 1.0 / compliance;
}

double backdrive_torque(const EmlaState& s, double k_b,
                        const DriveTrainParams& d) {
  return d.lead / kTwoPi * interface_force(s, k_b, d);
}

MechanicalRates mechanical_rates(const EmlaState& s, double tau_e,
                                 double f_ext, const PmsmParams& p,
                                 const DriveTrainParams& d) {
  const DriveFlow f = drive_flow(s, tau_e, f_ext, p, d);
  return MechanicalRates{f.domega, f.dx_dot};
}

double EnergyAudit::dissipated() const {
  return copper + viscous_motor + coulomb + gear + viscous_screw +
         interface_damping + viscous_rod;
}

double EnergyAudit::stored() const { return magnetic + kinetic + spring; }

double EnergyAudit::residual() const {
  return electrical_in - dissipated() - stored() - output;
}

double EnergyAudit::scale() const {
  return std::abs(electrical_in) + copper + viscous_motor + coulomb + gear +
         viscous_screw + interface_damping + viscous_rod + std::abs(output) +
         std::abs(spring) + std::abs(magnetic) + std::abs(kinetic);
}

EmlaState step(const EmlaState& s, double v_d, double v_q, double f_ext,
               double dt, const PmsmParams& p, const DriveTrainParams& d,
               EnergyAudit* audit) {
  Vec y{s.i_d, s.i_q, s.theta_m, s.omega_m, s.x_n, s.x, s.x_dot,
        0.0,   0.0,   0.0,       0.0,       0.0,   0.0, 0.0,
        0.0,   0.0,   0.0};
  for (int i = 0; i < kStates; ++i) {
    if (!std::isfinite(y[i])) throw NumericError("emla state is not finite");
  }

  auto eval = [&](const Vec& yy) {
    return derivatives(yy, v_d, v_q, f_ext, p, d);
  };
  const Vec k1 = eval(y);
  Vec tmp;
  for (int i = 0; i < kDims; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  const Vec k2 = eval(tmp);
  for (int i = 0; i < kDims; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  const Vec k3 = eval(tmp);
  for (int i = 0; i < kDims; ++i) tmp[i] = y[i] + dt * k3[i];
  const Vec k4 = eval(tmp);
  Vec out;
  for (int i = 0; i < kDims; ++i) {
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  const EmlaState next = unpack(out);
  for (int i = 0; i < kStates; ++i) {
    if (!std::isfinite(out[i])) throw NumericError("emla step diverged");
  }
  if (!(next.x > 0.0) || !(next.x < d.stroke)) {
    throw WorkspaceError("rod position outside the stroke: x=" +
                         std::to_string(next.x) + ", stroke=" +
                         std::to_string(d.stroke));
  }

  if (audit != nullptr) {
    audit->electrical_in += out[7];
    audit->copper += out[8];
    audit->viscous_motor += out[9];
    audit->coulomb += out[10];
    audit->gear += out[11];
    audit->viscous_screw += out[12];
    audit->interface_damping += out[13];
    audit->viscous_rod += out[14];
    audit->output += out[15];
    audit->spring += out[16];
    audit->magnetic += magnetic_energy(next, p) - magnetic_energy(s, p);
    audit->kinetic += kinetic_energy(next, p, d) - kinetic_energy(s, p, d);
  }
  return next;
}

std::optional<double> efficiency(const EmlaState& s, double tau_e,
                                 double f_ext, const LossModel& losses) {
  const double p_em = s.omega_m * tau_e;
  if (p_em <= 0.0) return std::nullopt;
  const double p_out = s.x_dot * f_ext;
  if (p_out <= 0.0) return std::nullopt;
  const double den = p_em + losses.total(s.i_d, s.i_q, s.omega_m);
  if (den < kEfficiencyDenEps) return std::nullopt;
  return p_out / den;
}

PmsmParams pmsm_from_config(const ConfigMap& cfg) {
  PmsmParams p;
  p.r_s = cfg.get_double("emla.motor.r_s", p.r_s);
  p.l_d = cfg.get_double("emla.motor.l_d", p.l_d);
  p.l_q = cfg.get_double("emla.motor.l_q", p.l_q);
  p.lambda_m = cfg.get_double("emla.motor.lambda_m", p.lambda_m);
  p.pole_pairs = cfg.get_int("emla.motor.pole_pairs", p.pole_pairs);
  p.j_m = cfg.get_double("emla.motor.j_m", p.j_m);
  p.c_m = cfg.get_double("emla.motor.c_m", p.c_m);
  p.tau_c = cfg.get_double("emla.motor.tau_c", p.tau_c);
  p.validate();
  return p;
}

DriveTrainParams drive_from_config(const ConfigMap& cfg) {
  DriveTrainParams d;
  d.n_gear = cfg.get_double("emla.drive.n_gear", d.n_gear);
  d.eta_gear = cfg.get_double("emla.drive.eta_gear", d.eta_gear);
  d.lead = cfg.get_double("emla.drive.lead", d.lead);
  d.j_s = cfg.get_double("emla.drive.j_s", d.j_s);
  d.c_s = cfg.get_double("emla.drive.c_s", d.c_s);
  d.c_b = cfg.get_double("emla.drive.c_b", d.c_b);
  d.m_act = cfg.get_double("emla.drive.m_act", d.m_act);
  d.c_act = cfg.get_double("emla.drive.c_act", d.c_act);
  d.k_s = cfg.get_double("emla.drive.k_s", d.k_s);
  d.k_br = cfg.get_double("emla.drive.k_br", d.k_br);
  d.k_n = cfg.get_double("emla.drive.k_n", d.k_n);
  d.k_r = cfg.get_double("emla.drive.k_r", d.k_r);
  d.k_rot = cfg.get_double("emla.drive.k_rot", d.k_rot);
  d.stroke = cfg.get_double("emla.drive.stroke", d.stroke);
  d.validate();
  return d;
}

LossModel losses_from_config(const ConfigMap& cfg, const PmsmParams& p) {
  LossModel l = default_losses(p);
  l.k_cu = cfg.get_double("emla.loss.k_cu", l.k_cu);
  l.sw_const = cfg.get_double("emla.loss.sw_const", l.sw_const);
  l.sw_lin = cfg.get_double("emla.loss.sw_lin", l.sw_lin);
  l.sw_quad = cfg.get_double("emla.loss.sw_quad", l.sw_quad);
  l.core_lin = cfg.get_double("emla.loss.core_lin", l.core_lin);
  l.core_quad = cfg.get_double("emla.loss.core_quad", l.core_quad);
  l.mech_lin = cfg.get_double("emla.loss.mech_lin", l.mech_lin);
  l.mech_quad = cfg.get_double("emla.loss.mech_quad", l.mech_quad);
  l.validate();
  return l;
}

}  // namespace vdcsim
