#include <vdcsim/mlp.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <vdcsim/config.hpp>

namespace vdcsim {

namespace {

// Deterministic uniform in [lo, hi) from raw mt19937_64 bits; keeps weight
// initialization independent of library distribution internals.
double uniform_bits(std::mt19937_64& gen, double lo, double hi) {
  const double u =
      static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
  return lo + u * (hi - lo);
}

double apply_act(Activation a, double z) {
  return a == Activation::kTanh ? std::tanh(z) : z;
}

int checked_param_count(const MlpModel& m) {
  int n = 0;
  for (const auto& layer : m.layers)
    n += static_cast<int>(layer.w.size() + layer.b.size());
  return n;
}

Eigen::VectorXd pack_params(const MlpModel& m) {
  Eigen::VectorXd theta(checked_param_count(m));
  int at = 0;
  for (const auto& layer : m.layers) {
    for (int i = 0; i < layer.w.rows(); ++i)
      for (int j = 0; j < layer.w.cols(); ++j) theta(at++) = layer.w(i, j);
    for (int i = 0; i < layer.b.size(); ++i) theta(at++) = layer.b(i);
  }
  return theta;
}

void unpack_params(const Eigen::VectorXd& theta, MlpModel& m) {
  int at = 0;
  for (auto& layer : m.layers) {
    for (int i = 0; i < layer.w.rows(); ++i)
      for (int j = 0; j < layer.w.cols(); ++j) layer.w(i, j) = theta(at++);
    for (int i = 0; i < layer.b.size(); ++i) layer.b(i) = theta(at++);
  }
}

// Forward pass keeping post-activation values for the backward sweeps.
void forward_cached(const MlpModel& m, const Eigen::VectorXd& x,
                    std::vector<Eigen::VectorXd>& acts) {
  acts.resize(m.layers.size() + 1);
  acts[0] = x;
  for (size_t l = 0; l < m.layers.size(); ++l) {
    const auto& layer = m.layers[l];
    Eigen::VectorXd z = layer.w * acts[l] + layer.b;
    if (layer.act == Activation::kTanh) z = z.array().tanh();
    acts[l + 1] = std::move(z);
  }
}

// Gradient of a scalar built from the output layer, seeded by `g_out`,
// written into `row` using the pack_params ordering.
void backward_into(const MlpModel& m, const std::vector<Eigen::VectorXd>& acts,
                   Eigen::VectorXd g_out, double* row) {
  const int layer_count = static_cast<int>(m.layers.size());
  std::vector<Eigen::VectorXd> gz(layer_count);
  for (int l = layer_count - 1; l >= 0; --l) {
    const auto& layer = m.layers[static_cast<size_t>(l)];
    if (layer.act == Activation::kTanh) {
      const auto& a = acts[static_cast<size_t>(l) + 1];
      gz[l] = g_out.array() * (1.0 - a.array().square());
    } else {
      gz[l] = g_out;
    }
    if (l > 0) g_out = layer.w.transpose() * gz[l];
  }
  int at = 0;
  for (int l = 0; l < layer_count; ++l) {
    const auto& layer = m.layers[static_cast<size_t>(l)];
    const auto& a_prev = acts[static_cast<size_t>(l)];
    for (int i = 0; i < layer.w.rows(); ++i)
      for (int j = 0; j < layer.w.cols(); ++j)
        row[at++] = gz[l](i) * a_prev(j);
    for (int i = 0; i < layer.b.size(); ++i) row[at++] = gz[l](i);
  }
}

double sse_on(const MlpModel& m, const Eigen::MatrixXd& x,
              const Eigen::MatrixXd& y) {
  double acc = 0.0;
  std::vector<Eigen::VectorXd> acts;
  for (int i = 0; i < x.rows(); ++i) {
    forward_cached(m, x.row(i).transpose(), acts);
    acc += (acts.back() - y.row(i).transpose()).squaredNorm();
  }
  return acc;
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

uint64_t fnv1a(const std::string& bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string activation_name(Activation a) {
  return a == Activation::kTanh ? "tanh" : "linear";
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "linear") return Activation::kLinear;
  throw ConfigError("unknown activation: " + name);
}

int MlpModel::input_dim() const {
  return layers.empty() ? 0 : static_cast<int>(layers.front().w.cols());
}

int MlpModel::output_dim() const {
  return layers.empty() ? 0 : static_cast<int>(layers.back().w.rows());
}

int MlpModel::parameter_count() const { return checked_param_count(*this); }

void MlpModel::validate() const {
  if (layers.empty()) throw ConfigError("mlp has no layers");
  for (size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    if (layer.w.rows() < 1 || layer.w.cols() < 1)
      throw ConfigError("mlp layer has an empty weight matrix");
    if (layer.b.size() != layer.w.rows())
      throw ConfigError("mlp layer bias size does not match its width");
    if (l > 0 && layer.w.cols() != layers[l - 1].w.rows())
      throw ConfigError("mlp layer widths are not chained");
  }
  if (layers.back().act != Activation::kLinear)
    throw ConfigError("mlp final layer must be linear");
}

void NormalizationSpec::validate() const {
  for (const auto& r : inputs)
    if (!(r.hi > r.lo))
      throw ConfigError("normalization input range must have hi > lo");
  for (const auto& r : targets)
    if (!(r.hi > r.lo))
      throw ConfigError("normalization target range must have hi > lo");
  if (inputs.empty() || targets.empty())
    throw ConfigError("normalization spec is empty");
}

Eigen::VectorXd NormalizationSpec::normalize_input(
    const Eigen::VectorXd& x) const {
  if (static_cast<size_t>(x.size()) != inputs.size())
    throw ConfigError("normalize_input dimension mismatch");
  Eigen::VectorXd out(x.size());
  for (int j = 0; j < x.size(); ++j)
    out(j) =
        2.0 * (x(j) - inputs[j].lo) / (inputs[j].hi - inputs[j].lo) - 1.0;
  return out;
}

Eigen::VectorXd NormalizationSpec::normalize_target(
    const Eigen::VectorXd& y) const {
  if (static_cast<size_t>(y.size()) != targets.size())
    throw ConfigError("normalize_target dimension mismatch");
  Eigen::VectorXd out(y.size());
  for (int j = 0; j < y.size(); ++j)
    out(j) =
        2.0 * (y(j) - targets[j].lo) / (targets[j].hi - targets[j].lo) - 1.0;
  return out;
}

Eigen::VectorXd NormalizationSpec::denormalize_target(
    const Eigen::VectorXd& y) const {
  if (static_cast<size_t>(y.size()) != targets.size())
    throw ConfigError("denormalize_target dimension mismatch");
  Eigen::VectorXd out(y.size());
  for (int j = 0; j < y.size(); ++j)
    out(j) =
        targets[j].lo + (y(j) + 1.0) / 2.0 * (targets[j].hi - targets[j].lo);
  return out;
}

NormalizationSpec fit_normalization(const Dataset& data) {
  if (data.inputs.rows() < 2)
    throw ConfigError("normalization needs at least two samples");
  if (!data.inputs.allFinite() || !data.targets.allFinite())
    throw ConfigError("dataset contains non-finite values");
  NormalizationSpec n;
  for (int j = 0; j < data.inputs.cols(); ++j) {
    FeatureRange r{data.inputs.col(j).minCoeff(),
                   data.inputs.col(j).maxCoeff()};
    if (!(r.hi > r.lo))
      throw ConfigError("input feature " + std::to_string(j) +
                        " is constant; dataset does not cover it");
    n.inputs.push_back(r);
  }
  for (int j = 0; j < data.targets.cols(); ++j) {
    FeatureRange r{data.targets.col(j).minCoeff(),
                   data.targets.col(j).maxCoeff()};
    if (!(r.hi > r.lo))
      throw ConfigError("target feature " + std::to_string(j) +
                        " is constant; nothing to learn from it");
    n.targets.push_back(r);
  }
  return n;
}

Eigen::VectorXd eval_normalized(const MlpModel& m, Eigen::VectorXd x) {
  for (const auto& layer : m.layers) {
    if (x.size() != layer.w.cols())
      throw ConfigError("mlp input dimension mismatch");
    x = layer.w * x + layer.b;
    if (layer.act == Activation::kTanh) x = x.array().tanh();
  }
  return x;
}

Eigen::VectorXd predict(const MlpModel& m, const NormalizationSpec& n,
                        const Eigen::VectorXd& x) {
  m.validate();
  n.validate();
  if (static_cast<int>(n.inputs.size()) != m.input_dim() ||
      static_cast<int>(n.targets.size()) != m.output_dim())
    throw ConfigError("normalization spec does not match the model shape");
  return n.denormalize_target(eval_normalized(m, n.normalize_input(x)));
}

std::pair<double, double> forward(const MlpModel& m,
                                  const NormalizationSpec& n, double tau_e,
                                  double omega_m) {
  if (m.input_dim() != 2 || m.output_dim() != 2)
    throw ConfigError("surrogate forward expects a 2-in 2-out model");
  Eigen::VectorXd x(2);
  x << tau_e, omega_m;
  const Eigen::VectorXd y = predict(m, n, x);
  return {y(0), y(1)};
}

double mse(const Eigen::MatrixXd& y, const Eigen::MatrixXd& y_hat) {
  if (y.rows() != y_hat.rows() || y.cols() != y_hat.cols())
    throw ConfigError("mse shape mismatch");
  if (y.size() == 0) throw ConfigError("mse of an empty sample set");
  return (y - y_hat).squaredNorm() / static_cast<double>(y.size());
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw ConfigError("pearson needs two equally sized columns");
  const double ma = a.mean();
  const double mb = b.mean();
  const Eigen::VectorXd da = a.array() - ma;
  const Eigen::VectorXd db = b.array() - mb;
  const double den = std::sqrt(da.squaredNorm() * db.squaredNorm());
  if (den == 0.0) throw ConfigError("pearson of a constant column");
  return da.dot(db) / den;
}

void TrainingConfig::validate() const {
  for (int h : hidden)
    if (h < 1) throw ConfigError("hidden layer sizes must be positive");
  if (max_epochs < 1) throw ConfigError("max_epochs must be positive");
  if (patience < 1) throw ConfigError("patience must be at least 1");
  if (train_ratio <= 0.0 || val_ratio <= 0.0 || test_ratio <= 0.0)
    throw ConfigError("split ratios must be positive");
  if (std::abs(train_ratio + val_ratio + test_ratio - 1.0) > 1e-9)
    throw ConfigError("split ratios must sum to 1");
  if (mu0 <= 0.0 || mu_inc <= 1.0 || mu_dec <= 0.0 || mu_dec >= 1.0 ||
      mu_max <= mu0)
    throw ConfigError("damping schedule is inconsistent");
  if (learn_rate <= 0.0 || momentum < 0.0 || momentum >= 1.0)
    throw ConfigError("momentum settings are out of range");
}

TrainResult train(const Dataset& data, const TrainingConfig& cfg) {
  cfg.validate();
  const int n = data.size();
  if (n < 3) throw ConfigError("training needs at least three samples");
  if (data.targets.rows() != n)
    throw ConfigError("dataset input/target row mismatch");

  TrainResult result;
  result.norm = fit_normalization(data);

  const int in_dim = static_cast<int>(data.inputs.cols());
  const int out_dim = static_cast<int>(data.targets.cols());

  std::mt19937_64 gen(cfg.seed);

  // Random split: shuffle once, carve contiguous index blocks.
  std::vector<int> idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(gen() % static_cast<uint64_t>(i + 1));
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
  }
  const int n_train = static_cast<int>(std::lround(cfg.train_ratio * n));
  const int n_val = static_cast<int>(std::lround(cfg.val_ratio * n));
  const int n_test = n - n_train - n_val;
  if (n_train < 1 || n_val < 1 || n_test < 1)
    throw ConfigError("dataset too small for a three-way split");

  const auto take = [&](int offset, int count, Eigen::MatrixXd& x,
                        Eigen::MatrixXd& y) {
    x.resize(count, in_dim);
    y.resize(count, out_dim);
    for (int i = 0; i < count; ++i) {
      const int row = idx[static_cast<size_t>(offset + i)];
      x.row(i) = result.norm
                     .normalize_input(data.inputs.row(row).transpose())
                     .transpose();
      y.row(i) = result.norm
                     .normalize_target(data.targets.row(row).transpose())
                     .transpose();
    }
  };
  Eigen::MatrixXd xtr, ytr, xva, yva, xte, yte;
  take(0, n_train, xtr, ytr);
  take(n_train, n_val, xva, yva);
  take(n_train + n_val, n_test, xte, yte);

  // Symmetric uniform init scaled by fan-in and fan-out.
  MlpModel model;
  {
    std::vector<int> dims;
    dims.push_back(in_dim);
    for (int h : cfg.hidden) dims.push_back(h);
    dims.push_back(out_dim);
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
      MlpLayer layer;
      layer.w.resize(dims[l + 1], dims[l]);
      layer.b = Eigen::VectorXd::Zero(dims[l + 1]);
      const double a = std::sqrt(6.0 / (dims[l] + dims[l + 1]));
      for (int i = 0; i < layer.w.rows(); ++i)
        for (int j = 0; j < layer.w.cols(); ++j)
          layer.w(i, j) = uniform_bits(gen, -a, a);
      layer.act = (l + 2 == dims.size()) ? Activation::kLinear
                                         : Activation::kTanh;
      model.layers.push_back(std::move(layer));
    }
    model.validate();
  }

  const int n_params = model.parameter_count();
  const int m_rows = n_train * out_dim;
  const double m_scale = static_cast<double>(m_rows);

  Eigen::VectorXd theta = pack_params(model);
  double mu = cfg.mu0;
  double train_sse = sse_on(model, xtr, ytr);
  if (!std::isfinite(train_sse))
    throw NumericError("training loss is non-finite at initialization");

  Eigen::MatrixXd jac;
  Eigen::VectorXd residual;
  Eigen::VectorXd velocity = Eigen::VectorXd::Zero(n_params);
  std::vector<Eigen::VectorXd> acts;
  Eigen::VectorXd row(n_params);

  double best_val = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_theta = theta;
  int fails = 0;
  TrainingReport& report = result.report;

  const bool use_lm =
      cfg.optimizer == TrainingConfig::Optimizer::kLevenbergMarquardt;
  if (use_lm) {
    jac.resize(m_rows, n_params);
    residual.resize(m_rows);
  }

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    if (use_lm) {
      for (int i = 0; i < n_train; ++i) {
        forward_cached(model, xtr.row(i).transpose(), acts);
        const Eigen::VectorXd e = acts.back() - ytr.row(i).transpose();
        for (int k = 0; k < out_dim; ++k) {
          residual(i * out_dim + k) = e(k);
          backward_into(model, acts, Eigen::VectorXd::Unit(out_dim, k),
                        row.data());
          jac.row(i * out_dim + k) = row;
        }
      }
      const Eigen::MatrixXd hess = jac.transpose() * jac;
      const Eigen::VectorXd grad = jac.transpose() * residual;

      bool accepted = false;
      while (!accepted) {
        Eigen::MatrixXd damped = hess;
        damped.diagonal().array() += mu;
        const Eigen::VectorXd step = damped.ldlt().solve(-grad);
        const Eigen::VectorXd cand = theta + step;
        unpack_params(cand, model);
        const double cand_sse = sse_on(model, xtr, ytr);
        if (std::isfinite(cand_sse) && cand_sse < train_sse) {
          theta = cand;
          train_sse = cand_sse;
          mu = std::max(mu * cfg.mu_dec, 1e-20);
          accepted = true;
        } else {
          mu *= cfg.mu_inc;
          if (mu > cfg.mu_max) break;
        }
      }
      if (!accepted) {
        unpack_params(theta, model);
        report.damping_exhausted = true;
        break;
      }
    } else {
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_params);
      for (int i = 0; i < n_train; ++i) {
        forward_cached(model, xtr.row(i).transpose(), acts);
        const Eigen::VectorXd e = acts.back() - ytr.row(i).transpose();
        backward_into(model, acts, e, row.data());
        grad += row;
      }
      grad *= 2.0 / m_scale;
      velocity = cfg.momentum * velocity - cfg.learn_rate * grad;
      theta += velocity;
      unpack_params(theta, model);
      train_sse = sse_on(model, xtr, ytr);
      if (!std::isfinite(train_sse))
        throw NumericError("training loss became non-finite at epoch " +
                           std::to_string(epoch));
    }

    report.train_mse.push_back(train_sse / m_scale);
    // Accepted damped steps must never raise the training MSE; checked on
    // the recorded sequence itself, every run.
    if (use_lm && report.train_mse.size() >= 2 &&
        report.train_mse[report.train_mse.size() - 2] <
            report.train_mse.back())
      throw NumericError("LM training MSE increased after an accepted step");
    const double val =
        sse_on(model, xva, yva) / static_cast<double>(n_val * out_dim);
    if (!std::isfinite(val))
      throw NumericError("validation loss became non-finite at epoch " +
                         std::to_string(epoch));
    report.val_mse.push_back(val);

    if (val < best_val) {
      best_val = val;
      best_theta = theta;
      report.best_epoch = epoch;
      fails = 0;
    } else {
      ++fails;
      if (fails >= cfg.patience) {
        report.early_stopped = true;
        break;
      }
    }
  }

  unpack_params(best_theta, model);
  result.model = std::move(model);
  result.report.test_mse =
      sse_on(result.model, xte, yte) / static_cast<double>(n_test * out_dim);
  return result;
}

void save_mlp(const std::string& path, const MlpModel& m,
              const NormalizationSpec& n) {
  m.validate();
  n.validate();
  if (static_cast<int>(n.inputs.size()) != m.input_dim() ||
      static_cast<int>(n.targets.size()) != m.output_dim())
    throw ConfigError("normalization spec does not match the model shape");

  std::ostringstream payload;
  payload << "vdcsim-mlp 1\n";
  payload << "layers " << m.layers.size() << "\n";
  payload << "norm_in " << n.inputs.size() << "\n";
  for (const auto& r : n.inputs)
    payload << format_g17(r.lo) << " " << format_g17(r.hi) << "\n";
  payload << "norm_out " << n.targets.size() << "\n";
  for (const auto& r : n.targets)
    payload << format_g17(r.lo) << " " << format_g17(r.hi) << "\n";
  for (const auto& layer : m.layers) {
    payload << "layer " << layer.w.rows() << " " << layer.w.cols() << " "
            << activation_name(layer.act) << "\n";
    for (int i = 0; i < layer.w.rows(); ++i) {
      for (int j = 0; j < layer.w.cols(); ++j) {
        if (j) payload << " ";
        payload << format_g17(layer.w(i, j));
      }
      payload << "\n";
    }
    for (int i = 0; i < layer.b.size(); ++i) {
      if (i) payload << " ";
      payload << format_g17(layer.b(i));
    }
    payload << "\n";
  }

  const std::string body = payload.str();
  char sum[32];
  std::snprintf(sum, sizeof(sum), "checksum %016llx\n",
                static_cast<unsigned long long>(fnv1a(body)));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write model file: " + path);
  out << body << sum;
  if (!out) throw ConfigError("failed writing model file: " + path);
}

LoadedMlp load_mlp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const std::string tag = "checksum ";
  const size_t at = text.rfind(tag);
  if (at == std::string::npos || (at > 0 && text[at - 1] != '\n'))
    throw ConfigError("model file has no checksum: " + path);
  const std::string body = text.substr(0, at);
  uint64_t stored = 0;
  {
    std::istringstream line(text.substr(at + tag.size()));
    line >> std::hex >> stored;
    if (!line) throw ConfigError("model file checksum unreadable: " + path);
  }
  if (stored != fnv1a(body))
    throw ConfigError("model file checksum mismatch: " + path);

  std::istringstream ps(body);
  std::string magic;
  int version = 0;
  ps >> magic >> version;
  if (magic != "vdcsim-mlp" || version != 1)
    throw ConfigError("unrecognized model file format: " + path);

  const auto fail = [&path]() -> ConfigError {
    return ConfigError("model file truncated or malformed: " + path);
  };

  std::string word;
  size_t layer_count = 0;
  ps >> word >> layer_count;
  if (!ps || word != "layers" || layer_count == 0) throw fail();

  LoadedMlp out;
  size_t dim = 0;
  ps >> word >> dim;
  if (!ps || word != "norm_in") throw fail();
  for (size_t j = 0; j < dim; ++j) {
    FeatureRange r;
    ps >> r.lo >> r.hi;
    if (!ps) throw fail();
    out.norm.inputs.push_back(r);
  }
  ps >> word >> dim;
  if (!ps || word != "norm_out") throw fail();
  for (size_t j = 0; j < dim; ++j) {
    FeatureRange r;
    ps >> r.lo >> r.hi;
    if (!ps) throw fail();
    out.norm.targets.push_back(r);
  }

  for (size_t l = 0; l < layer_count; ++l) {
    int rows = 0, cols = 0;
    std::string act;
    ps >> word >> rows >> cols >> act;
    if (!ps || word != "layer" || rows < 1 || cols < 1) throw fail();
    MlpLayer layer;
    layer.act = activation_from_name(act);
    layer.w.resize(rows, cols);
    layer.b.resize(rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        ps >> layer.w(i, j);
        if (!ps) throw fail();
      }
    for (int i = 0; i < rows; ++i) {
      ps >> layer.b(i);
      if (!ps) throw fail();
    }
    out.model.layers.push_back(std::move(layer));
  }

  out.model.validate();
  out.norm.validate();
  if (static_cast<int>(out.norm.inputs.size()) != out.model.input_dim() ||
      static_cast<int>(out.norm.targets.size()) != out.model.output_dim())
    throw ConfigError("model file normalization shape mismatch: " + path);
  return out;
}

TrainingConfig training_from_config(const ConfigMap& cfg) {
  TrainingConfig t;
  const std::vector<double> hidden_default(t.hidden.begin(), t.hidden.end());
  const std::vector<double> hidden =
      cfg.get_vector("surrogate.hidden", hidden_default);
  t.hidden.clear();
  for (double h : hidden) {
    if (h < 1.0 || std::abs(h - std::round(h)) > 1e-9)
      throw ConfigError("surrogate.hidden entries must be positive integers");
    t.hidden.push_back(static_cast<int>(std::lround(h)));
  }
  t.max_epochs = cfg.get_int("surrogate.epochs", t.max_epochs);
  t.patience = cfg.get_int("surrogate.patience", t.patience);
  const std::vector<double> ratios = cfg.get_vector(
      "surrogate.ratios", {t.train_ratio, t.val_ratio, t.test_ratio});
  if (ratios.size() != 3)
    throw ConfigError("surrogate.ratios needs exactly three values");
  t.train_ratio = ratios[0];
  t.val_ratio = ratios[1];
  t.test_ratio = ratios[2];
  const std::string opt = cfg.get_string("surrogate.optimizer", "lm");
  if (opt == "lm") {
    t.optimizer = TrainingConfig::Optimizer::kLevenbergMarquardt;
  } else if (opt == "momentum") {
    t.optimizer = TrainingConfig::Optimizer::kMomentum;
  } else {
    throw ConfigError("surrogate.optimizer must be lm or momentum");
  }
  t.seed = static_cast<uint64_t>(cfg.get_int("surrogate.seed", 1));
  t.learn_rate = cfg.get_double("surrogate.learn_rate", t.learn_rate);
  t.momentum = cfg.get_double("surrogate.momentum", t.momentum);
  t.validate();
  return t;
}

}  // namespace vdcsim
