#pragma once

#include <optional>
#include <string>

#include <vdcsim/errors.hpp>

// Electromechanical linear actuator plant: PMSM dq electrical dynamics
// through a rigid gearbox and lead screw to a compliant nut-rod interface
// that produces the output force. One instance is the simulation ground
// truth for a single cylinder; three instances run independently.
//
// Lumping convention: the gearbox is rigid, so the screw shaft contributes
// reflected inertia j_s / n_gear^2 on the motor axis and the screw-side load
// torque crosses the gearbox scaled by the efficiency branch (divide by
// eta_gear when driving the load, multiply when back-driven). The nut-rod
// compliance stays a two-mass interface exactly as modeled.

namespace vdcsim {

class ConfigMap;

// Coulomb friction regularization width (rad/s). The friction torque is
// tau_c * tanh(omega_m / width), which keeps the right-hand side Lipschitz
// for the fixed-step integrator.
inline constexpr double kCoulombRateEps = 1e-3;

// Gearbox efficiency blend width (W). Screw-side power beyond this magnitude
// selects the motoring or back-driving branch to machine precision.
inline constexpr double kGearBlendPowerEps = 0.1;

// Below this electrical input power (W) the efficiency quotient is noise.
inline constexpr double kEfficiencyDenEps = 1e-9;

// Defaults describe an 11.6 kW class 8-pole machine; they are assumptions
// shipped for convenience, not measured data.
struct PmsmParams {
  double r_s = 0.05;        // stator resistance, ohm
  double l_d = 2.0e-3;      // d-axis inductance, H
  double l_q = 2.0e-3;      // q-axis inductance, H
  double lambda_m = 0.105;  // permanent magnet flux linkage, Wb
  int pole_pairs = 4;
  double j_m = 0.01;    // rotor inertia, kg m^2
  double c_m = 0.005;   // rotor viscous damping, N m s/rad
  double tau_c = 0.15;  // Coulomb friction at the rotor, N m

  // All fields positive, pole_pairs >= 1. Throws ConfigError.
  void validate() const;
};

struct DriveTrainParams {
  double n_gear = 10.0;
  double eta_gear = 0.97;  // in (0, 1]
  double lead = 0.01;      // screw lead, m per revolution
  double j_s = 0.002;      // screw shaft inertia, kg m^2
  double c_s = 0.002;      // screw shaft viscous damping, N m s/rad
  double c_b = 2.0e4;      // nut-rod interface damping, N s/m
  double m_act = 50.0;     // rod plus driven attachment mass, kg
  double c_act = 150.0;    // rod damping, N s/m
  double k_s = 4.0e9;      // screw shaft axial stiffness
  double k_br = 5.0e8;     // bearing stiffness
  double k_n = 8.0e8;      // nut interface stiffness
  double k_r = 6.0e8;      // rod stiffness
  double k_rot = 1.2e4;    // torsional stiffness of the rotating parts
  double stroke = 0.8;     // axial distance between shaft bearings, m

  // All fields positive, eta_gear <= 1. Throws ConfigError.
  void validate() const;
};

// Motor loss components as polynomials in current magnitude and speed.
// Copper keeps the (3/2) power-convention factor; the default k_cu matches
// the default stator resistance. Everything else defaults to zero.
struct LossModel {
  double k_cu = 0.075;  // copper: k_cu * (i_d^2 + i_q^2); set to (3/2) r_s
  double sw_const = 0.0;  // switching: sw_const + sw_lin*I + sw_quad*I^2
  double sw_lin = 0.0;
  double sw_quad = 0.0;
  double core_lin = 0.0;  // core: core_lin*|omega| + core_quad*omega^2
  double core_quad = 0.0;
  double mech_lin = 0.0;  // windage: mech_lin*|omega| + mech_quad*omega^2
  double mech_quad = 0.0;

  // Coefficients non-negative, so every component is >= 0. ConfigError.
  void validate() const;

  double copper(double i_d, double i_q) const;
  double switching(double i_d, double i_q) const;
  double core(double omega_m) const;
  double mechanical(double omega_m) const;
  double total(double i_d, double i_q, double omega_m) const;
};

LossModel default_losses(const PmsmParams& p);

// Plant state. The screw shaft rate is omega_m / n_gear by the rigid-gearbox
// convention and is never stored separately.
struct EmlaState {
  double i_d = 0.0;      // A
  double i_q = 0.0;      // A
  double theta_m = 0.0;  // motor shaft angle, rad
  double omega_m = 0.0;  // motor shaft rate, rad/s
  double x_n = 0.0;      // nut position, m
  double x = 0.0;        // rod position, m; valid range (0, stroke)
  double x_dot = 0.0;    // rod rate, m/s
};

// Quiescent state at mid stroke with the nut and rod matched. Stepping it
// with zero inputs is a fixed point.
EmlaState rest_state(const DriveTrainParams& d);

double screw_rate(const EmlaState& s, const DriveTrainParams& d);
double nut_rate(const EmlaState& s, const DriveTrainParams& d);
double reflected_inertia(const PmsmParams& p, const DriveTrainParams& d);

struct ElectricalRates {
  double di_d;  // A/s
  double di_q;  // A/s
};

// dq voltage equations solved for the current derivatives, with flux
// linkages lambda_d = l_d*i_d + lambda_m and lambda_q = l_q*i_q.
ElectricalRates electrical_rates(const EmlaState& s, double v_d, double v_q,
                                 const PmsmParams& p);

// (3/2) p (lambda_d i_q - lambda_q i_d). With l_d == l_q the reluctance part
// cancels and only i_q and lambda_m contribute.
double em_torque(const EmlaState& s, const PmsmParams& p);

// Engaged shaft length under axial load, x (stroke - x) / stroke. Maximal at
// mid stroke.
double engaged_length(double x, double stroke);

// Series compliance sum of shaft, bearings, nut, rod, and torsion, inverted.
// Throws WorkspaceError when x leaves (0, stroke).
double stiffness(double x, const DriveTrainParams& d);

// (lead / 2 pi) * [c_b (nut rate - rod rate) + k_b (x_n - x)]. The stiffness
// is passed in so the caller controls where it was evaluated.
double backdrive_torque(const EmlaState& s, double k_b,
                        const DriveTrainParams& d);

// Gearbox efficiency branch, eta^(-tanh(p_s / blend width)). Equals 1/eta
// when the motor drives the screw side, eta when the load drives back, and
// crosses 1 at zero power so the implied gear loss (branch - 1) * p_s never
// goes negative.
double gear_branch(double p_s, double eta);

// Viscous drag plus smoothed Coulomb friction at the motor shaft.
double motor_friction(double omega_m, const PmsmParams& p);

struct MechanicalRates {
  double domega_m;  // rad/s^2
  double dx_dot;    // m/s^2
};

// Motor axis with reflected screw inertia against electromagnetic torque,
// viscous and Coulomb friction, and the gearbox-scaled screw load; rod mass
// against its damping, the interface force, and the external load. f_ext
// positive opposes rod extension, so f_ext * x_dot is power delivered to
// the load.
MechanicalRates mechanical_rates(const EmlaState& s, double tau_e,
                                 double f_ext, const PmsmParams& p,
                                 const DriveTrainParams& d);

// Energy ledger for a run of steps. Accumulators integrate inside the same
// RK4 pass as the state, so residual() is zero to integrator accuracy:
//   electrical_in = dissipated() + stored() + output.
struct EnergyAudit {
  double electrical_in = 0.0;  // (3/2)(v_d i_d + v_q i_q)
  double copper = 0.0;         // (3/2) r_s (i_d^2 + i_q^2)
  double viscous_motor = 0.0;  // c_m omega^2
  double coulomb = 0.0;        // tau_c tanh(omega/eps) omega
  double gear = 0.0;           // (branch factor - 1) * screw-side power
  double viscous_screw = 0.0;  // c_s screw_rate^2
  double interface_damping = 0.0;  // c_b (nut rate - rod rate)^2
  double viscous_rod = 0.0;        // c_act x_dot^2
  double output = 0.0;             // f_ext x_dot
  double spring = 0.0;    // interface elastic work, path integral
  double magnetic = 0.0;  // delta (3/4)(l_d i_d^2 + l_q i_q^2)
  double kinetic = 0.0;   // delta (1/2)(j_eq omega^2 + m_act x_dot^2)

  double dissipated() const;
  double stored() const;
  double residual() const;
  double scale() const;  // magnitude sum for relative residual checks
};

// One fixed-step RK4 step with v_d, v_q, f_ext held constant across the
// step. Throws WorkspaceError when the rod leaves the stroke and
// NumericError when the state stops being finite. Pass an audit to
// accumulate the energy ledger across calls.
EmlaState step(const EmlaState& s, double v_d, double v_q, double f_ext,
               double dt, const PmsmParams& p, const DriveTrainParams& d,
               EnergyAudit* audit = nullptr);

// Output power over electrical input power, x_dot f_ext / (omega tau_e +
// losses), defined only in the motoring quadrant (positive electromagnetic
// power, positive output power, denominator above kEfficiencyDenEps).
std::optional<double> efficiency(const EmlaState& s, double tau_e,
                                 double f_ext, const LossModel& losses);

// Config loaders. Keys: emla.motor.r_s ... emla.drive.n_gear ...
// emla.loss.k_cu; absent keys keep the documented defaults.
PmsmParams pmsm_from_config(const ConfigMap& cfg);
DriveTrainParams drive_from_config(const ConfigMap& cfg);
LossModel losses_from_config(const ConfigMap& cfg, const PmsmParams& p);

}  // namespace vdcsim
