#pragma once

#include <array>
#include <string>
#include <vector>

#include <vdcsim/adaptation.hpp>
#include <vdcsim/body_set.hpp>
#include <vdcsim/chain.hpp>
#include <vdcsim/config.hpp>
#include <vdcsim/emla.hpp>
#include <vdcsim/errors.hpp>
#include <vdcsim/force_chain.hpp>
#include <vdcsim/rigid_body.hpp>
#include <vdcsim/spatial.hpp>

namespace vdcsim {

// Task-rate inversion switches to damped least squares below this smallest
// singular value, with damping ramped up to kDlsDampingMax at sigma = 0.
inline constexpr double kDlsSigmaThreshold = 1e-3;
inline constexpr double kDlsDampingMax = 1e-3;
// Beyond this condition number the pose is treated as unusable outright.
inline constexpr double kClikConditionCap = 1e8;
// The velocity gain coupling is an equality constraint; it is accepted
// within this relative band.
inline constexpr double kGainEqualityRelTol = 1e-9;

// Full gain schedule: one task matrix, per-joint position gains, one 6x6
// velocity-feedback matrix per frame, and three per-actuator electrical
// loops (index 0 = slew base, 1 = lift, 2 = tilt).
struct GainSet {
  Mat6 task_gain;
  std::array<double, 6> joint_lambda{};
  std::array<Mat6, kFrameCount> body_gain;
  std::array<double, 3> k_i{};
  std::array<double, 3> k_f{};
  std::array<double, 3> k_v{};
  std::array<double, 3> lambda_i{};
  std::array<double, 3> k1{};
  std::array<double, 3> k2{};
  double gamma = 100.0;

  GainSet();
  void validate() const;
};

GainSet default_gains();
// Reads controller.* overrides on top of the defaults and validates.
GainSet gains_from_config(const ConfigMap& cfg);

struct ClikResult {
  Vec6 theta_dot_r = Vec6::Zero();
  double sigma_min = 0.0;
  double condition = 0.0;
  bool damped = false;
};

// Closed-loop task-rate inversion: theta_dot_r solves
// J theta_dot = dpi_d + task_gain * task_error, damped near singularities.
// Throws SingularityError when the condition number exceeds the cap.
ClikResult clik(const Mat6& jacobian, const Vec6& dpi_d,
                const Vec6& task_error, const Mat6& task_gain);

// Joint-space variant: dq_d + lambda (q_d - q), elementwise.
Vec6 required_joint_velocity(const Vec6& dq_d, const Vec6& q_d, const Vec6& q,
                             const std::array<double, 6>& lambda);

// Propagates the chain at the actual pose but with the required joint rates
// substituted, yielding the required velocity of every frame.
ChainState required_velocity_chain(const Vec6& theta_dot_r,
                                   const JointState& js,
                                   const HdrmGeometry& g);

// Rotation-vector logarithm of a rotation matrix (angle * axis), stable at
// both the identity and the half-turn.
Vec3 rotation_log(const Mat3& r);

struct AdaptationSet {
  std::array<AdaptationState, kFrameCount> body;
};

AdaptationSet adaptation_from_bodies(const BodySet& bodies, double gamma);
BodySet bodies_from_adaptation(const AdaptationSet& a);

struct AdaptationUpdate {
  AdaptationSet next;
  int refused = 0;  // bodies frozen this step after all retries failed
};

// One manifold step per body frame, driven by the required-velocity
// regressor and the velocity error. A step that would leave the cone is
// retried with 2, 4, 8, 16 substeps, then the body is frozen for this tick.
AdaptationUpdate adaptation_update(
    const AdaptationSet& a, const ChainState& actual,
    const ChainState& required,
    const std::array<SpatialAcceleration, kFrameCount>& required_accel,
    const Vec3& gravity_world, double dt);

struct RequiredForces {
  BodyForceSet net;
  ForceChainResult chain;
};

// Net required force per body, Y(theta_hat) + body_gain (V_r - V), then the
// closed-chain recursion down to the three actuator line forces. With
// model_feedforward false the regressor term is dropped.
RequiredForces required_force_chain(
    const ChainState& actual, const ChainState& required,
    const std::array<SpatialAcceleration, kFrameCount>& required_accel,
    const BodySet& estimates, const GainSet& gains, const SpatialForce& f_t4_r,
    const HdrmGeometry& g, bool model_feedforward = true);

struct DCurrentCommand {
  double i_dr = 0.0;
  double di_dr = 0.0;
};

// di_dr = di_dd + lambda_i (i_dd - i_d); the plain field-alignment policy
// leaves i_dd = di_dd = 0.
double required_d_current_rate(double i_d, double lambda_i, double i_dd = 0.0,
                               double di_dd = 0.0);

// Integrates the commanded rate into the d-axis current reference. update()
// returns the reference as it stood entering the tick, then advances it, so
// the emitted pair stays consistent with a rate law evaluated at the tick.
class DCurrentLaw {
 public:
  DCurrentCommand update(double i_d, double lambda_i, double dt,
                         double i_dd = 0.0, double di_dd = 0.0);
  void reset();

 private:
  double i_dr_ = 0.0;
};

// Measured electrical and mechanical signals of one actuator, plus the
// surrogate external-force estimate blended in by alpha.
struct ActuatorSignals {
  double i_d = 0.0;
  double i_q = 0.0;
  double theta_dot_m = 0.0;
  double theta_ddot_m = 0.0;
  double f_ext_sur = 0.0;
};

// Model force output at the measured currents: screw ratio times the
// electromagnetic torque minus reflected inertia and motor friction,
// blended with the surrogate estimate by alpha.
double hybrid_dynamic_force(const ActuatorSignals& s, double alpha,
                            const PmsmParams& p, const DriveTrainParams& d,
                            double eta_f = 0.0);

// Same expression with the required currents in the torque term only; flux
// linkages stay at the measured currents so the difference to
// hybrid_dynamic_force reduces exactly to the beta groupings.
double required_hybrid_force(const ActuatorSignals& s, double i_dr,
                             double i_qr, double alpha, const PmsmParams& p,
                             const DriveTrainParams& d, double eta_f = 0.0);

// Inverts required_hybrid_force for i_qr at a given d-axis reference.
// Throws ConfigError for alpha outside [0, 1) or degenerate drive constants
// and NumericError when the d-axis flux is too small to carry torque.
double required_q_current(double f_hyb_r, const ActuatorSignals& s,
                          double i_dr, double alpha, const PmsmParams& p,
                          const DriveTrainParams& d, double eta_f = 0.0);

// Coefficients of the exact identity
//   F_r - F = beta1 (i_qr - i_q) - beta2 (i_dr - i_d)
// evaluated at the measured currents.
struct BetaPair {
  double beta1 = 0.0;
  double beta2 = 0.0;
};

BetaPair beta_groupings(double i_d, double i_q, double alpha,
                        const PmsmParams& p, const DriveTrainParams& d);

struct LowLevelGains {
  double k_i = 0.0;
  double k_f = 0.0;
  double k_v = 0.0;
};

struct VoltageCommand {
  double v_d = 0.0;
  double v_q = 0.0;
};

// Voltage laws: the d axis holds its current reference, the q axis serves
// the force error and the piston-rate error. The feedforward reproduces the
// electrical model at the measured flux so both current errors see pure
// first-order dynamics; with feedforward false only the error terms remain.
VoltageCommand low_level_voltages(const ActuatorSignals& s,
                                  const DCurrentCommand& d_cmd, double i_qr,
                                  double di_qr, double f_hyb_r, double f_hyb,
                                  double x_dot_r, double x_dot,
                                  const LowLevelGains& g, const PmsmParams& p,
                                  bool feedforward = true);

struct GainConditionReport {
  // Condition 1: beta1 K_f / L_q - beta2 K_i / (2 L_d), must be >= 0.
  std::array<double, 3> force_margin{};
  // Condition 2: K_2 - K_1 beta2 / 2, must be >= 0.
  std::array<double, 3> current_margin{};
  // Condition 3: K_1 beta1 K_v / L_q - 1, an equality within tolerance.
  std::array<double, 3> velocity_deviation{};
  bool pass = true;
  int failed_condition = 0;   // 0 none, else first failing condition 1..3
  int failed_actuator = -1;   // actuator of that first failure
};

// Checks the three decrease conditions condition-by-condition across the
// actuators; margins are reported for all entries regardless of failures.
GainConditionReport gain_condition_check(const GainSet& gains,
                                         const std::array<BetaPair, 3>& beta,
                                         const std::array<double, 3>& l_d,
                                         const std::array<double, 3>& l_q);

// One logged instant of every error the accompanying function weighs.
struct MonitorSample {
  std::array<SpatialVelocity, kFrameCount> velocity_error{};
  std::array<double, kFrameCount> bregman{};
  std::array<double, 3> force_error{};
  std::array<double, 3> d_current_error{};
};

struct LyapunovSeries {
  std::vector<double> nu;
  std::vector<double> nu_velocity;
  std::vector<double> nu_adaptation;
  std::array<std::vector<double>, 3> nu_force;
  std::array<std::vector<double>, 3> nu_current;
  std::vector<double> delta_nu;  // first entry 0
};

// Evaluates the candidate decrease function over a recorded trace:
// sum of (1/2) e^T M e over body frames, gamma times the divergence sum,
// and the per-actuator force / d-current quadratics.
LyapunovSeries lyapunov_monitor(const std::vector<MonitorSample>& trace,
                                const BodySet& bodies, const GainSet& gains);

// Causal first-order-filtered finite difference. The first update only
// primes the history and reports zero.
class FilteredDerivative {
 public:
  explicit FilteredDerivative(double cutoff_hz = 1000.0);
  double update(double x, double dt);
  void reset();

 private:
  double cutoff_hz_;
  double prev_ = 0.0;
  double deriv_ = 0.0;
  bool primed_ = false;
};

class FilteredDerivative6 {
 public:
  explicit FilteredDerivative6(double cutoff_hz = 1000.0);
  Vec6 update(const Vec6& x, double dt);
  void reset();

 private:
  double cutoff_hz_;
  Vec6 prev_ = Vec6::Zero();
  Vec6 deriv_ = Vec6::Zero();
  bool primed_ = false;
};

struct ControllerConfig {
  double dt = 1e-3;
  double alpha = 0.0;      // surrogate blend weight, [0, 1)
  double eta_f = 0.0;      // reflected-mass gear offset
  double accel_cutoff_hz = 1000.0;
  double i_dd = 0.0;
  double di_dd = 0.0;
  bool adaptation_enabled = true;
  bool model_feedforward = true;

  void validate() const;
};

ControllerConfig controller_from_config(const ConfigMap& cfg);

struct TaskReference {
  Vec3 position = Vec3::Zero();
  Rotation3 orientation;
  Vec6 twist = Vec6::Zero();
};

struct EmlaFeedback {
  double i_d = 0.0;
  double i_q = 0.0;
  double theta_dot_m = 0.0;
  double x_dot = 0.0;
  double f_ext_sur = 0.0;
};

struct RequiredState {
  Vec6 theta_dot_r = Vec6::Zero();
  std::array<SpatialVelocity, kFrameCount> velocity{};
  std::array<SpatialAcceleration, kFrameCount> acceleration{};
  BodyForceSet net;
  ActuatorForces f;
  std::array<double, 3> i_dr{};
  std::array<double, 3> di_dr{};
  std::array<double, 3> i_qr{};
  std::array<double, 3> di_qr{};
  std::array<double, 3> x_dot_r{};
};

struct ControllerCommand {
  std::array<VoltageCommand, 3> voltage{};
  std::array<double, 3> wrist_rate{};  // ideal velocity joints 4..6
  RequiredState required;
  ClikResult clik;
  std::array<BetaPair, 3> beta{};
  GainConditionReport conditions;
  std::array<double, 3> f_hyb{};
  std::array<double, 3> nu_actuator{};
  Vec6 task_error = Vec6::Zero();
  int adaptation_refused = 0;
};

// The full cascade for one control tick: task error and closed-loop rate
// inversion, required velocities, the adaptation step, required forces down
// the chain, required currents, and the drive voltages. Actuator order is
// 0 = slew base, 1 = lift, 2 = tilt; wrist joints are ideal rate sources.
class HierarchicalController {
 public:
  HierarchicalController(const HdrmGeometry& geometry, const BodySet& bodies,
                         const std::array<PmsmParams, 3>& motors,
                         const std::array<DriveTrainParams, 3>& drives,
                         const GainSet& gains, const ControllerConfig& config);

  ControllerCommand tick(const JointState& js, const TaskReference& ref,
                         const std::array<EmlaFeedback, 3>& feedback,
                         const SpatialForce& f_t4_r = SpatialForce{});

  const AdaptationSet& adaptation() const { return adaptation_; }
  // Current inertial estimates: the adapted set, or the construction set
  // while adaptation is disabled.
  BodySet estimates() const;
  const GainSet& gains() const { return gains_; }
  const ControllerConfig& config() const { return config_; }
  void reset();

 private:
  HdrmGeometry geometry_;
  BodySet initial_bodies_;
  std::array<PmsmParams, 3> motors_;
  std::array<DriveTrainParams, 3> drives_;
  GainSet gains_;
  ControllerConfig config_;
  AdaptationSet adaptation_;
  std::array<FilteredDerivative6, kFrameCount> accel_filter_;
  std::array<FilteredDerivative, 3> theta_ddot_filter_;
  std::array<FilteredDerivative, 3> di_qr_filter_;
  std::array<DCurrentLaw, 3> d_law_;
};

// CSV introspection of one command; the row layout matches the header.
std::string controller_record_header();
std::string controller_record_row(double t, const ControllerCommand& cmd);

}  // namespace vdcsim
