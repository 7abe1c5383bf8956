#include <vdcsim/controller.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <utility>

#include <Eigen/Dense>

namespace vdcsim {

namespace {

// Orientation error below the representational noise of a unit rotation is
// reported as exactly zero, so a loop closed at its reference is a true
// fixed point of the cascade.
constexpr double kRotationSnapTol = 1e-12;

Mat6 diag6(double a, double b, double c, double d, double e, double f) {
  Mat6 m = Mat6::Zero();
  m.diagonal() << a, b, c, d, e, f;
  return m;
}

Mat6 diag6(const std::vector<double>& v) {
  return diag6(v[0], v[1], v[2], v[3], v[4], v[5]);
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0))
    throw ConfigError(std::string(name) + " must be positive");
}

double screw_ratio(const DriveTrainParams& d) {
  return 2.0 * M_PI * d.n_gear / d.lead;
}

// EMLA force given an electromagnetic torque: screw ratio times the torque
// net of reflected inertia and motor friction, blended with the surrogate
// channel. Shared by the measured and the required evaluation so their
// difference cancels everything except the torque term.
double mechanism_force(double tau_e, const ActuatorSignals& s, double alpha,
                       const PmsmParams& p, const DriveTrainParams& d,
                       double eta_f) {
  const double reflected =
      (p.j_m + d.m_act / (d.n_gear + eta_f)) * s.theta_ddot_m;
  const double drag = motor_friction(s.theta_dot_m, p);
  return (1.0 - alpha) * (screw_ratio(d) * (tau_e - reflected - drag)) +
         alpha * s.f_ext_sur;
}

std::vector<double> fetch_fixed(const ConfigMap& cfg, const std::string& key,
                                size_t n) {
  const std::vector<double> v = cfg.get_vector(key, {});
  if (!v.empty() && v.size() != n)
    throw ConfigError(key + " must have " + std::to_string(n) + " entries");
  return v;
}

}  // namespace

GainSet::GainSet() {
  task_gain = 20.0 * Mat6::Identity();
  joint_lambda.fill(20.0);
  const Mat6 body = diag6(2000.0, 2000.0, 2000.0, 500.0, 500.0, 500.0);
  body_gain.fill(body);
  k_i.fill(0.05);
  k_f.fill(0.05);
  k_v.fill(1000.0);
  lambda_i.fill(100.0);
  // The velocity coupling is an equality; seed it consistently with the
  // nominal flux of the default motor.
  const BetaPair b =
      beta_groupings(0.0, 0.0, 0.0, PmsmParams{}, DriveTrainParams{});
  k1.fill(PmsmParams{}.l_q / (b.beta1 * 1000.0));
  k2.fill(2e-6);
  gamma = 100.0;
}

void GainSet::validate() const {
  for (int j = 0; j < 3; ++j) {
    require_positive(k_i[j], "controller.k_i");
    require_positive(k_f[j], "controller.k_f");
    require_positive(k_v[j], "controller.k_v");
    require_positive(lambda_i[j], "controller.lambda_i");
    require_positive(k1[j], "controller.k1");
    require_positive(k2[j], "controller.k2");
  }
  for (int i = 0; i < 6; ++i) {
    if (joint_lambda[i] < 0.0)
      throw ConfigError("controller.joint_lambda must be non-negative");
  }
  require_positive(gamma, "controller.gamma");
}

GainSet default_gains() { return GainSet{}; }

GainSet gains_from_config(const ConfigMap& cfg) {
  GainSet g;
  const std::vector<double> tg = fetch_fixed(cfg, "controller.task_gain", 6);
  if (!tg.empty()) g.task_gain = diag6(tg);
  const std::vector<double> jl = fetch_fixed(cfg, "controller.joint_lambda", 6);
  if (!jl.empty()) std::copy(jl.begin(), jl.end(), g.joint_lambda.begin());
  const std::vector<double> bg = fetch_fixed(cfg, "controller.body_gain", 6);
  if (!bg.empty()) g.body_gain.fill(diag6(bg));

  const auto triple = [&cfg](const std::string& key,
                             std::array<double, 3>* dst) {
    const std::vector<double> v = fetch_fixed(cfg, key, 3);
    if (!v.empty()) std::copy(v.begin(), v.end(), dst->begin());
  };
  triple("controller.k_i", &g.k_i);
  triple("controller.k_f", &g.k_f);
  triple("controller.k_v", &g.k_v);
  triple("controller.lambda_i", &g.lambda_i);
  triple("controller.k1", &g.k1);
  triple("controller.k2", &g.k2);
  g.gamma = cfg.get_double("controller.gamma", g.gamma);
  g.validate();
  return g;
}

ClikResult clik(const Mat6& jacobian, const Vec6& dpi_d,
                const Vec6& task_error, const Mat6& task_gain) {
  Eigen::JacobiSVD<Mat6> svd(jacobian,
                             Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec6& sigma = svd.singularValues();  // descending
  ClikResult out;
  out.sigma_min = sigma(5);
  out.condition = sigma(5) > 0.0
                      ? sigma(0) / sigma(5)
                      : std::numeric_limits<double>::infinity();
  if (!(out.condition <= kClikConditionCap))
    throw SingularityError("task jacobian condition number " +
                           std::to_string(out.condition) +
                           " exceeds the usable cap");
  out.damped = sigma(5) < kDlsSigmaThreshold;
  double mu2 = 0.0;
  if (out.damped) {
    const double ratio = sigma(5) / kDlsSigmaThreshold;
    mu2 = (1.0 - ratio * ratio) * (kDlsDampingMax * kDlsDampingMax);
  }
  const Vec6 rhs = dpi_d + task_gain * task_error;
  const Vec6 projected = svd.matrixU().transpose() * rhs;
  Vec6 scaled;
  for (int i = 0; i < 6; ++i)
    scaled(i) = sigma(i) / (sigma(i) * sigma(i) + mu2) * projected(i);
  out.theta_dot_r = svd.matrixV() * scaled;
  return out;
}

Vec6 required_joint_velocity(const Vec6& dq_d, const Vec6& q_d, const Vec6& q,
                             const std::array<double, 6>& lambda) {
  Vec6 out;
  for (int i = 0; i < 6; ++i)
    out(i) = dq_d(i) + lambda[i] * (q_d(i) - q(i));
  return out;
}

ChainState required_velocity_chain(const Vec6& theta_dot_r,
                                   const JointState& js,
                                   const HdrmGeometry& g) {
  JointState substituted = js;
  for (int i = 0; i < 6; ++i) substituted.dzeta[i] = theta_dot_r(i);
  return propagate_chain(g, substituted);
}

Vec3 rotation_log(const Mat3& r) {
  const Vec3 vee(0.5 * (r(2, 1) - r(1, 2)), 0.5 * (r(0, 2) - r(2, 0)),
                 0.5 * (r(1, 0) - r(0, 1)));
  const double cos_t = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
  const double sin_t = vee.norm();
  if (sin_t <= kRotationSnapTol && cos_t > 0.0) return Vec3::Zero();
  const double theta = std::atan2(sin_t, cos_t);
  if (sin_t > 1e-9) return (theta / sin_t) * vee;
  if (cos_t > 0.0) return vee;  // theta/sin(theta) = 1 + O(theta^2)
  // Near the half turn the axis comes from the dominant column of
  // (R + I)/2 = axis axis^T + O(pi - theta).
  const Mat3 a = 0.5 * (r + Mat3::Identity());
  Eigen::Index k = 0;
  a.diagonal().maxCoeff(&k);
  Vec3 axis = a.col(k);
  const double scale = axis.norm();
  if (scale <= 0.0) throw NumericError("rotation_log: degenerate half turn");
  axis /= scale;
  if (vee.dot(axis) < 0.0) axis = -axis;
  return theta * axis;
}

AdaptationSet adaptation_from_bodies(const BodySet& bodies, double gamma) {
  AdaptationSet out;
  for (int i = 0; i < kFrameCount; ++i) {
    out.body[i].L_hat = theta_to_pseudo(bodies.params[i].theta());
    out.body[i].gamma = gamma;
  }
  return out;
}

BodySet bodies_from_adaptation(const AdaptationSet& a) {
  BodySet out;
  for (int i = 0; i < kFrameCount; ++i)
    out.params[i] = InertialParameters::from_theta(pseudo_to_theta(a.body[i].L_hat));
  return out;
}

AdaptationUpdate adaptation_update(
    const AdaptationSet& a, const ChainState& actual,
    const ChainState& required,
    const std::array<SpatialAcceleration, kFrameCount>& required_accel,
    const Vec3& gravity_world, double dt) {
  AdaptationUpdate out{a, 0};
  for (FrameId f : kBodyFrames) {
    const int i = frame_index(f);
    const Regressor y = regressor(required_accel[i], required.velocity_of(f),
                                  required.gravity_in(f, gravity_world));
    const Mat4 s = s_matrix(y, required.velocity_of(f), actual.velocity_of(f));
    bool stepped = false;
    for (int substeps : {1, 2, 4, 8, 16}) {
      try {
        out.next.body[i] = nal_step(a.body[i], s, dt, substeps);
        stepped = true;
        break;
      } catch (const AdaptationStepError&) {
        // tighter substeps next; freeze below if none fit
      }
    }
    if (!stepped) {
      out.next.body[i] = a.body[i];
      ++out.refused;
    }
  }
  return out;
}

RequiredForces required_force_chain(
    const ChainState& actual, const ChainState& required,
    const std::array<SpatialAcceleration, kFrameCount>& required_accel,
    const BodySet& estimates, const GainSet& gains, const SpatialForce& f_t4_r,
    const HdrmGeometry& g, bool model_feedforward) {
  RequiredForces out;
  for (FrameId f : kBodyFrames) {
    const int i = frame_index(f);
    const Regressor y = regressor(required_accel[i], required.velocity_of(f),
                                  required.gravity_in(f, g.gravity));
    const Vec10 theta =
        model_feedforward ? estimates.of(f).theta() : Vec10::Zero();
    out.net.net[i] = required_net_force(y, theta, gains.body_gain[i],
                                        required.velocity_of(f),
                                        actual.velocity_of(f));
  }
  out.chain = solve_actuator_forces(out.net, f_t4_r, actual, g);
  return out;
}

double required_d_current_rate(double i_d, double lambda_i, double i_dd,
                               double di_dd) {
  return di_dd + lambda_i * (i_dd - i_d);
}

DCurrentCommand DCurrentLaw::update(double i_d, double lambda_i, double dt,
                                    double i_dd, double di_dd) {
  const double di_dr = required_d_current_rate(i_d, lambda_i, i_dd, di_dd);
  const DCurrentCommand out{i_dr_, di_dr};
  i_dr_ += dt * di_dr;
  return out;
}

void DCurrentLaw::reset() { i_dr_ = 0.0; }

double hybrid_dynamic_force(const ActuatorSignals& s, double alpha,
                            const PmsmParams& p, const DriveTrainParams& d,
                            double eta_f) {
  const double lam_d = p.l_d * s.i_d + p.lambda_m;
  const double lam_q = p.l_q * s.i_q;
  const double tau = 1.5 * p.pole_pairs * (lam_d * s.i_q - lam_q * s.i_d);
  return mechanism_force(tau, s, alpha, p, d, eta_f);
}

double required_hybrid_force(const ActuatorSignals& s, double i_dr,
                             double i_qr, double alpha, const PmsmParams& p,
                             const DriveTrainParams& d, double eta_f) {
  const double lam_d = p.l_d * s.i_d + p.lambda_m;
  const double lam_q = p.l_q * s.i_q;
  const double tau = 1.5 * p.pole_pairs * (lam_d * i_qr - lam_q * i_dr);
  return mechanism_force(tau, s, alpha, p, d, eta_f);
}

double required_q_current(double f_hyb_r, const ActuatorSignals& s,
                          double i_dr, double alpha, const PmsmParams& p,
                          const DriveTrainParams& d, double eta_f) {
  if (!(alpha >= 0.0) || alpha >= 1.0)
    throw ConfigError("surrogate blend alpha must lie in [0, 1)");
  if (!(d.lead > 0.0)) throw ConfigError("screw lead must be positive");
  if (!(d.n_gear + eta_f > 0.0))
    throw ConfigError("gear ratio plus eta_f must be positive");
  const double lam_d = p.l_d * s.i_d + p.lambda_m;
  if (std::abs(lam_d) < 1e-9)
    throw NumericError("d-axis flux too small to deliver torque");
  const double reflected =
      (p.j_m + d.m_act / (d.n_gear + eta_f)) * s.theta_ddot_m;
  const double drag = motor_friction(s.theta_dot_m, p);
  const double tau_needed =
      (f_hyb_r - alpha * s.f_ext_sur) / ((1.0 - alpha) * screw_ratio(d)) +
      reflected + drag;
  const double lam_q = p.l_q * s.i_q;
  return (tau_needed / (1.5 * p.pole_pairs) + lam_q * i_dr) / lam_d;
}

BetaPair beta_groupings(double i_d, double i_q, double alpha,
                        const PmsmParams& p, const DriveTrainParams& d) {
  const double scale =
      (1.0 - alpha) * (2.0 * M_PI * d.n_gear / d.lead) * 1.5 * p.pole_pairs;
  return {scale * (p.l_d * i_d + p.lambda_m), scale * (p.l_q * i_q)};
}

VoltageCommand low_level_voltages(const ActuatorSignals& s,
                                  const DCurrentCommand& d_cmd, double i_qr,
                                  double di_qr, double f_hyb_r, double f_hyb,
                                  double x_dot_r, double x_dot,
                                  const LowLevelGains& g, const PmsmParams& p,
                                  bool feedforward) {
  (void)i_qr;
  VoltageCommand v;
  v.v_d = g.k_i * (d_cmd.i_dr - s.i_d);
  v.v_q = g.k_f * (f_hyb_r - f_hyb) + g.k_v * (x_dot_r - x_dot);
  if (feedforward) {
    const double lam_d = p.l_d * s.i_d + p.lambda_m;
    const double lam_q = p.l_q * s.i_q;
    v.v_d += p.r_s * s.i_d + p.l_d * d_cmd.di_dr -
             p.pole_pairs * s.theta_dot_m * lam_q;
    v.v_q += p.r_s * s.i_q + p.l_q * di_qr +
             p.pole_pairs * s.theta_dot_m * lam_d;
  }
  return v;
}

GainConditionReport gain_condition_check(const GainSet& gains,
                                         const std::array<BetaPair, 3>& beta,
                                         const std::array<double, 3>& l_d,
                                         const std::array<double, 3>& l_q) {
  GainConditionReport rep;
  for (int j = 0; j < 3; ++j) {
    rep.force_margin[j] = beta[j].beta1 * gains.k_f[j] / l_q[j] -
                          beta[j].beta2 * gains.k_i[j] / (2.0 * l_d[j]);
    rep.current_margin[j] = gains.k2[j] - gains.k1[j] * beta[j].beta2 / 2.0;
    rep.velocity_deviation[j] =
        gains.k1[j] * beta[j].beta1 * gains.k_v[j] / l_q[j] - 1.0;
  }
  const auto fail = [&rep](int condition, int actuator) {
    rep.pass = false;
    rep.failed_condition = condition;
    rep.failed_actuator = actuator;
  };
  for (int j = 0; j < 3 && rep.pass; ++j)
    if (rep.force_margin[j] < 0.0) fail(1, j);
  for (int j = 0; j < 3 && rep.pass; ++j)
    if (rep.current_margin[j] < 0.0) fail(2, j);
  for (int j = 0; j < 3 && rep.pass; ++j)
    if (std::abs(rep.velocity_deviation[j]) > kGainEqualityRelTol) fail(3, j);
  return rep;
}

LyapunovSeries lyapunov_monitor(const std::vector<MonitorSample>& trace,
                                const BodySet& bodies, const GainSet& gains) {
  std::array<Mat6, kFrameCount> mass{};
  for (FrameId f : kBodyFrames)
    mass[frame_index(f)] = mass_matrix(bodies.of(f));

  LyapunovSeries ls;
  const size_t n = trace.size();
  ls.nu.reserve(n);
  ls.nu_velocity.reserve(n);
  ls.nu_adaptation.reserve(n);
  for (int j = 0; j < 3; ++j) {
    ls.nu_force[j].reserve(n);
    ls.nu_current[j].reserve(n);
  }
  ls.delta_nu.reserve(n);

  for (const MonitorSample& sample : trace) {
    double velocity = 0.0;
    double divergence = 0.0;
    for (FrameId f : kBodyFrames) {
      const int i = frame_index(f);
      const Vec6 e = sample.velocity_error[i].stacked();
      velocity += 0.5 * e.dot(mass[i] * e);
      divergence += sample.bregman[i];
    }
    const double adaptation = gains.gamma * divergence;
    double total = velocity + adaptation;
    for (int j = 0; j < 3; ++j) {
      const double force = 0.5 * gains.k1[j] * sample.force_error[j] *
                           sample.force_error[j];
      const double current = 0.5 * gains.k2[j] * sample.d_current_error[j] *
                             sample.d_current_error[j];
      ls.nu_force[j].push_back(force);
      ls.nu_current[j].push_back(current);
      total += force + current;
    }
    ls.nu_velocity.push_back(velocity);
    ls.nu_adaptation.push_back(adaptation);
    ls.nu.push_back(total);
    ls.delta_nu.push_back(ls.nu.size() == 1
                              ? 0.0
                              : ls.nu.back() - ls.nu[ls.nu.size() - 2]);
  }
  return ls;
}

FilteredDerivative::FilteredDerivative(double cutoff_hz)
    : cutoff_hz_(cutoff_hz) {}

double FilteredDerivative::update(double x, double dt) {
  if (!primed_) {
    primed_ = true;
    prev_ = x;
    return 0.0;
  }
  const double raw = (x - prev_) / dt;
  prev_ = x;
  const double blend = dt / (dt + 1.0 / (2.0 * M_PI * cutoff_hz_));
  deriv_ += blend * (raw - deriv_);
  return deriv_;
}

void FilteredDerivative::reset() {
  prev_ = 0.0;
  deriv_ = 0.0;
  primed_ = false;
}

FilteredDerivative6::FilteredDerivative6(double cutoff_hz)
    : cutoff_hz_(cutoff_hz) {}

Vec6 FilteredDerivative6::update(const Vec6& x, double dt) {
  if (!primed_) {
    primed_ = true;
    prev_ = x;
    return Vec6::Zero();
  }
  const Vec6 raw = (x - prev_) / dt;
  prev_ = x;
  const double blend = dt / (dt + 1.0 / (2.0 * M_PI * cutoff_hz_));
  deriv_ += blend * (raw - deriv_);
  return deriv_;
}

void FilteredDerivative6::reset() {
  prev_ = Vec6::Zero();
  deriv_ = Vec6::Zero();
  primed_ = false;
}

void ControllerConfig::validate() const {
  require_positive(dt, "controller.dt");
  if (!(alpha >= 0.0) || alpha >= 1.0)
    throw ConfigError("controller.alpha must lie in [0, 1)");
  require_positive(accel_cutoff_hz, "controller.accel_cutoff_hz");
}

ControllerConfig controller_from_config(const ConfigMap& cfg) {
  ControllerConfig c;
  c.dt = cfg.get_double("controller.dt", c.dt);
  c.alpha = cfg.get_double("controller.alpha", c.alpha);
  c.eta_f = cfg.get_double("controller.eta_f", c.eta_f);
  c.accel_cutoff_hz =
      cfg.get_double("controller.accel_cutoff_hz", c.accel_cutoff_hz);
  c.i_dd = cfg.get_double("controller.i_dd", c.i_dd);
  c.di_dd = cfg.get_double("controller.di_dd", c.di_dd);
  c.adaptation_enabled = cfg.get_bool("controller.adaptation", true);
  c.model_feedforward = cfg.get_bool("controller.feedforward", true);
  c.validate();
  return c;
}

HierarchicalController::HierarchicalController(
    const HdrmGeometry& geometry, const BodySet& bodies,
    const std::array<PmsmParams, 3>& motors,
    const std::array<DriveTrainParams, 3>& drives, const GainSet& gains,
    const ControllerConfig& config)
    : geometry_(geometry),
      initial_bodies_(bodies),
      motors_(motors),
      drives_(drives),
      gains_(gains),
      config_(config) {
  gains_.validate();
  config_.validate();
  for (int j = 0; j < 3; ++j) {
    motors_[j].validate();
    drives_[j].validate();
  }
  reset();
}

BodySet HierarchicalController::estimates() const {
  return config_.adaptation_enabled ? bodies_from_adaptation(adaptation_)
                                    : initial_bodies_;
}

void HierarchicalController::reset() {
  adaptation_ = adaptation_from_bodies(initial_bodies_, gains_.gamma);
  accel_filter_.fill(FilteredDerivative6(config_.accel_cutoff_hz));
  theta_ddot_filter_.fill(FilteredDerivative(config_.accel_cutoff_hz));
  di_qr_filter_.fill(FilteredDerivative(config_.accel_cutoff_hz));
  d_law_.fill(DCurrentLaw{});
}

ControllerCommand HierarchicalController::tick(
    const JointState& js, const TaskReference& ref,
    const std::array<EmlaFeedback, 3>& feedback, const SpatialForce& f_t4_r) {
  const ChainState actual = propagate_chain(geometry_, js);
  const FrameTransform& tool = actual.world_of(FrameId::T4);

  ControllerCommand cmd;
  cmd.task_error.head<3>() = ref.position - tool.offset;
  cmd.task_error.tail<3>() = rotation_log(ref.orientation.matrix() *
                                          tool.rotation.matrix().transpose());
  cmd.clik =
      clik(task_jacobian(geometry_, js), ref.twist, cmd.task_error,
           gains_.task_gain);
  cmd.required.theta_dot_r = cmd.clik.theta_dot_r;

  const ChainState required =
      required_velocity_chain(cmd.clik.theta_dot_r, js, geometry_);
  cmd.required.velocity = required.velocity;
  for (int i = 0; i < kFrameCount; ++i) {
    cmd.required.acceleration[i] = SpatialAcceleration::from_stacked(
        accel_filter_[i].update(required.velocity[i].stacked(), config_.dt));
  }

  if (config_.adaptation_enabled) {
    AdaptationUpdate up =
        adaptation_update(adaptation_, actual, required,
                          cmd.required.acceleration, geometry_.gravity,
                          config_.dt);
    adaptation_ = std::move(up.next);
    cmd.adaptation_refused = up.refused;
  }

  const RequiredForces rf = required_force_chain(
      actual, required, cmd.required.acceleration, estimates(), gains_,
      f_t4_r, geometry_, config_.model_feedforward);
  cmd.required.net = rf.net;
  cmd.required.f = rf.chain.f;

  cmd.required.x_dot_r = {geometry_.base_radius * cmd.clik.theta_dot_r(0),
                          required.lift_rates.dx, required.tilt_rates.dx};
  for (int j = 0; j < 3; ++j)
    cmd.wrist_rate[j] = cmd.clik.theta_dot_r(3 + j);

  const std::array<double, 3> f_line{rf.chain.f.f1, rf.chain.f.f2,
                                     rf.chain.f.f3};
  std::array<double, 3> l_d{};
  std::array<double, 3> l_q{};
  for (int j = 0; j < 3; ++j) {
    const PmsmParams& p = motors_[j];
    const DriveTrainParams& dp = drives_[j];
    const ActuatorSignals sig{
        feedback[j].i_d, feedback[j].i_q, feedback[j].theta_dot_m,
        theta_ddot_filter_[j].update(feedback[j].theta_dot_m, config_.dt),
        feedback[j].f_ext_sur};
    const DCurrentCommand dc = d_law_[j].update(
        sig.i_d, gains_.lambda_i[j], config_.dt, config_.i_dd, config_.di_dd);
    cmd.required.i_dr[j] = dc.i_dr;
    cmd.required.di_dr[j] = dc.di_dr;
    cmd.f_hyb[j] = hybrid_dynamic_force(sig, config_.alpha, p, dp,
                                        config_.eta_f);
    cmd.required.i_qr[j] = required_q_current(f_line[j], sig, dc.i_dr,
                                              config_.alpha, p, dp,
                                              config_.eta_f);
    cmd.required.di_qr[j] =
        di_qr_filter_[j].update(cmd.required.i_qr[j], config_.dt);
    cmd.beta[j] = beta_groupings(sig.i_d, sig.i_q, config_.alpha, p, dp);
    cmd.voltage[j] = low_level_voltages(
        sig, dc, cmd.required.i_qr[j], cmd.required.di_qr[j], f_line[j],
        cmd.f_hyb[j], cmd.required.x_dot_r[j], feedback[j].x_dot,
        LowLevelGains{gains_.k_i[j], gains_.k_f[j], gains_.k_v[j]}, p,
        config_.model_feedforward);
    const double f_tilde = f_line[j] - cmd.f_hyb[j];
    const double di_err = dc.i_dr - sig.i_d;
    cmd.nu_actuator[j] = 0.5 * gains_.k1[j] * f_tilde * f_tilde +
                         0.5 * gains_.k2[j] * di_err * di_err;
    l_d[j] = p.l_d;
    l_q[j] = p.l_q;
  }
  cmd.conditions = gain_condition_check(gains_, cmd.beta, l_d, l_q);
  return cmd;
}

namespace {

// Single column list shared by the header and the row so they cannot drift.
void record_columns(double t, const ControllerCommand& cmd,
                    std::vector<std::pair<std::string, double>>* out) {
  out->emplace_back("t", t);
  const char* task_names[6] = {"task_err_px", "task_err_py", "task_err_pz",
                               "task_err_rx", "task_err_ry", "task_err_rz"};
  for (int i = 0; i < 6; ++i)
    out->emplace_back(task_names[i], cmd.task_error(i));
  out->emplace_back("clik_sigma_min", cmd.clik.sigma_min);
  out->emplace_back("clik_condition", cmd.clik.condition);
  out->emplace_back("clik_damped", cmd.clik.damped ? 1.0 : 0.0);
  for (int i = 0; i < 6; ++i)
    out->emplace_back("theta_dot_r_" + std::to_string(i),
                      cmd.required.theta_dot_r(i));
  const char* act[3] = {"base", "lift", "tilt"};
  for (int j = 0; j < 3; ++j) {
    const std::string a = act[j];
    const double f_r = j == 0 ? cmd.required.f.f1
                              : (j == 1 ? cmd.required.f.f2
                                        : cmd.required.f.f3);
    out->emplace_back(a + "_f_r", f_r);
    out->emplace_back(a + "_f_hyb", cmd.f_hyb[j]);
    out->emplace_back(a + "_i_dr", cmd.required.i_dr[j]);
    out->emplace_back(a + "_di_dr", cmd.required.di_dr[j]);
    out->emplace_back(a + "_i_qr", cmd.required.i_qr[j]);
    out->emplace_back(a + "_di_qr", cmd.required.di_qr[j]);
    out->emplace_back(a + "_x_dot_r", cmd.required.x_dot_r[j]);
    out->emplace_back(a + "_v_d", cmd.voltage[j].v_d);
    out->emplace_back(a + "_v_q", cmd.voltage[j].v_q);
    out->emplace_back(a + "_beta1", cmd.beta[j].beta1);
    out->emplace_back(a + "_beta2", cmd.beta[j].beta2);
    out->emplace_back(a + "_nu", cmd.nu_actuator[j]);
  }
  for (int j = 0; j < 3; ++j)
    out->emplace_back("wrist_rate_" + std::to_string(j + 4),
                      cmd.wrist_rate[j]);
  out->emplace_back("cond_pass", cmd.conditions.pass ? 1.0 : 0.0);
  out->emplace_back("cond_failed_condition",
                    static_cast<double>(cmd.conditions.failed_condition));
  out->emplace_back("cond_failed_actuator",
                    static_cast<double>(cmd.conditions.failed_actuator));
  out->emplace_back("adaptation_refused",
                    static_cast<double>(cmd.adaptation_refused));
}

}  // namespace

std::string controller_record_header() {
  std::vector<std::pair<std::string, double>> cols;
  record_columns(0.0, ControllerCommand{}, &cols);
  std::string out;
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i].first;
  }
  return out;
}

std::string controller_record_row(double t, const ControllerCommand& cmd) {
  std::vector<std::pair<std::string, double>> cols;
  record_columns(t, cmd, &cols);
  std::string out;
  char buf[32];
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    std::snprintf(buf, sizeof(buf), "%.17g", cols[i].second);
    out += buf;
  }
  return out;
}

}  // namespace vdcsim
