#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <vdcsim/errors.hpp>

// Small dense feedforward networks with bounded symmetric hidden activations
// and a linear output layer, trained by Levenberg-Marquardt on the normal
// equations or by a momentum gradient fallback. Sized for the actuator
// surrogate (two inputs, two outputs, a few thousand parameters at most);
// everything is deterministic given the seed.

namespace vdcsim {

class ConfigMap;

enum class Activation { kTanh, kLinear };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct MlpLayer {
  Eigen::MatrixXd w;  // rows = neurons, cols = previous width
  Eigen::VectorXd b;
  Activation act = Activation::kTanh;
};

struct MlpModel {
  std::vector<MlpLayer> layers;

  int input_dim() const;
  int output_dim() const;
  int parameter_count() const;

  // Consecutive widths compatible, biases sized, final layer linear.
  // Throws ConfigError.
  void validate() const;
};

// Per-feature affine map onto [-1, 1] and back (the mapminmax convention).
struct FeatureRange {
  double lo = -1.0;
  double hi = 1.0;
};

struct NormalizationSpec {
  std::vector<FeatureRange> inputs;
  std::vector<FeatureRange> targets;

  void validate() const;  // hi > lo everywhere; ConfigError

  Eigen::VectorXd normalize_input(const Eigen::VectorXd& x) const;
  Eigen::VectorXd normalize_target(const Eigen::VectorXd& y) const;
  Eigen::VectorXd denormalize_target(const Eigen::VectorXd& y) const;
};

// Samples are rows: inputs N x in_dim, targets N x out_dim.
struct Dataset {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd targets;

  int size() const { return static_cast<int>(inputs.rows()); }
};

// Ranges taken feature-wise over the whole dataset.
NormalizationSpec fit_normalization(const Dataset& data);

// Plain cascade in normalized coordinates.
Eigen::VectorXd eval_normalized(const MlpModel& m, Eigen::VectorXd x);

// normalize -> cascade -> denormalize, for physical-unit queries.
Eigen::VectorXd predict(const MlpModel& m, const NormalizationSpec& n,
                        const Eigen::VectorXd& x);

// Two-input, two-output convenience used by the actuator surrogate:
// (torque, motor rate) in, (force, rod rate) out.
std::pair<double, double> forward(const MlpModel& m,
                                  const NormalizationSpec& n, double tau_e,
                                  double omega_m);

// Mean of squared differences over every entry. Throws ConfigError on empty
// or mismatched shapes.
double mse(const Eigen::MatrixXd& y, const Eigen::MatrixXd& y_hat);

// Pearson correlation of two equally sized columns.
double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct TrainingConfig {
  std::vector<int> hidden{64, 48, 32, 16, 8};
  int max_epochs = 1000;
  int patience = 30;  // consecutive validation failures before stopping
  double train_ratio = 0.7;
  double val_ratio = 0.2;
  double test_ratio = 0.1;
  enum class Optimizer { kLevenbergMarquardt, kMomentum };
  Optimizer optimizer = Optimizer::kLevenbergMarquardt;
  uint64_t seed = 1;

  // Levenberg-Marquardt damping schedule.
  double mu0 = 1e-3;
  double mu_inc = 10.0;
  double mu_dec = 0.1;
  double mu_max = 1e10;

  // Momentum fallback.
  double learn_rate = 0.02;
  double momentum = 0.9;

  void validate() const;  // ratios sum to 1, patience >= 1; ConfigError
};

struct TrainingReport {
  std::vector<double> train_mse;  // normalized units, one entry per epoch
  std::vector<double> val_mse;
  double test_mse = 0.0;
  int best_epoch = -1;  // epoch whose weights were returned
  bool early_stopped = false;
  bool damping_exhausted = false;  // LM could not find a descent step
};

struct TrainResult {
  MlpModel model;
  NormalizationSpec norm;
  TrainingReport report;
};

// Random-split training with early stopping on validation MSE; returns the
// weights from the best validation epoch. Accepted Levenberg-Marquardt
// iterations never increase the training MSE (enforced, not assumed).
// Throws NumericError if the loss stops being finite and ConfigError for
// empty or degenerate data (every input feature must vary).
TrainResult train(const Dataset& data, const TrainingConfig& cfg);

// Versioned text format with layer dimensions, row-major weights, biases,
// the normalization spec, and an FNV-1a content checksum over the payload.
void save_mlp(const std::string& path, const MlpModel& m,
              const NormalizationSpec& n);
struct LoadedMlp {
  MlpModel model;
  NormalizationSpec norm;
};
LoadedMlp load_mlp(const std::string& path);  // ConfigError on any mismatch

// Config loader, keys surrogate.hidden, surrogate.epochs,
// surrogate.patience, surrogate.ratios, surrogate.optimizer (lm | momentum),
// surrogate.seed, surrogate.learn_rate, surrogate.momentum.
TrainingConfig training_from_config(const ConfigMap& cfg);

}  // namespace vdcsim
