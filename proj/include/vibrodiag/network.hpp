#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vibrodiag/dataset.hpp"
#include "vibrodiag/error.hpp"
#include "vibrodiag/rng.hpp"
#include "vibrodiag/types.hpp"

namespace vibrodiag {

// Minimal row-major dense matrix; rows are batch entries.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Fully connected feedforward topology: batch normalization on the input and
// after each hidden ReLU, softmax output.
struct ModelArchitecture {
  std::size_t input_dim = 12;
  std::vector<std::size_t> hidden = {256, 128};
  std::size_t output_dim = 3;

  void validate() const {
    if (input_dim == 0 || output_dim == 0) {
      throw ParameterError("architecture: zero layer width");
    }
    for (std::size_t h : hidden) {
      if (h == 0) throw ParameterError("architecture: zero hidden width");
    }
  }

  // Widths normalized by batch-norm layers: input plus every hidden layer.
  std::vector<std::size_t> norm_widths() const {
    std::vector<std::size_t> w = {input_dim};
    w.insert(w.end(), hidden.begin(), hidden.end());
    return w;
  }
};

struct DenseLayer {
  Matrix weights;  // out x in
  std::vector<double> bias;
};

inline constexpr double kDefaultBnEpsilon = 1e-3;
inline constexpr double kDefaultBnMomentum = 0.99;

struct BatchNormLayer {
  std::vector<double> gamma;        // trainable scale
  std::vector<double> beta;         // trainable shift
  std::vector<double> moving_mean;  // running statistics, not trained
  std::vector<double> moving_var;
  double epsilon = kDefaultBnEpsilon;
  double momentum = kDefaultBnMomentum;

  std::size_t width() const { return gamma.size(); }
};

struct Model {
  ModelArchitecture arch;
  std::vector<BatchNormLayer> norms;  // norms[0] on the input, norms[1+i] after hidden i
  std::vector<DenseLayer> dense;      // hidden.size() + 1 layers
};

struct ParamCounts {
  std::size_t total = 0;
  std::size_t trainable = 0;
  std::size_t non_trainable = 0;
};

inline ParamCounts param_counts(const Model& m) {
  ParamCounts c;
  for (const DenseLayer& d : m.dense) {
    c.trainable += d.weights.rows * d.weights.cols + d.bias.size();
  }
  for (const BatchNormLayer& bn : m.norms) {
    c.trainable += 2 * bn.width();      // gamma, beta
    c.non_trainable += 2 * bn.width();  // moving mean, moving var
  }
  c.total = c.trainable + c.non_trainable;
  return c;
}

// Dense weights are drawn uniform in +-sqrt(6/(fan_in+fan_out)), biases are
// zero, batch-norm starts at identity (gamma 1, beta 0, mean 0, var 1).
inline Model build_model(const ModelArchitecture& arch, std::uint64_t seed) {
  arch.validate();

  Model m;
  m.arch = arch;
  Rng rng(seed);

  for (std::size_t w : arch.norm_widths()) {
    BatchNormLayer bn;
    bn.gamma.assign(w, 1.0);
    bn.beta.assign(w, 0.0);
    bn.moving_mean.assign(w, 0.0);
    bn.moving_var.assign(w, 1.0);
    m.norms.push_back(std::move(bn));
  }

  std::vector<std::size_t> dims = {arch.input_dim};
  dims.insert(dims.end(), arch.hidden.begin(), arch.hidden.end());
  dims.push_back(arch.output_dim);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const std::size_t fan_in = dims[l];
    const std::size_t fan_out = dims[l + 1];
    DenseLayer d;
    d.weights = Matrix(fan_out, fan_in);
    d.bias.assign(fan_out, 0.0);
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& w : d.weights.data) w = rng.uniform(-limit, limit);
    m.dense.push_back(std::move(d));
  }
  return m;
}

enum class RunMode { train, infer };

// Intermediate results of one train-mode forward pass, consumed by backward().
struct ForwardCache {
  struct BnCache {
    Matrix input;
    Matrix xhat;                  // normalized pre-scale activations
    std::vector<double> mean;     // batch mean
    std::vector<double> inv_std;  // 1/sqrt(var + eps)
  };
  std::vector<BnCache> bn;
  std::vector<Matrix> dense_input;  // activation entering each dense layer
  std::vector<Matrix> relu_pre;     // pre-activation of each hidden layer
  Matrix probs;
};

namespace detail {

inline void check_batch(const Model& m, const Matrix& batch) {
  if (batch.cols != m.arch.input_dim) {
    throw ShapeError("forward: batch width " + std::to_string(batch.cols) +
                     " does not match input dim " + std::to_string(m.arch.input_dim));
  }
  if (batch.rows == 0) throw ShapeError("forward: empty batch");
  for (double v : batch.data) {
    if (!std::isfinite(v)) throw NumericError("forward: non-finite input");
  }
}

inline Matrix dense_forward(const DenseLayer& layer, const Matrix& in) {
  const std::size_t out_dim = layer.weights.rows;
  Matrix out(in.rows, out_dim);
  for (std::size_t b = 0; b < in.rows; ++b) {
    const double* x = &in.data[b * in.cols];
    for (std::size_t o = 0; o < out_dim; ++o) {
      const double* w = &layer.weights.data[o * in.cols];
      double acc = layer.bias[o];
      for (std::size_t i = 0; i < in.cols; ++i) acc += w[i] * x[i];
      out(b, o) = acc;
    }
  }
  return out;
}

inline void relu_inplace(Matrix& m) {
  for (double& v : m.data) v = std::max(0.0, v);
}

inline void softmax_rows(Matrix& m) {
  for (std::size_t b = 0; b < m.rows; ++b) {
    double* row = &m.data[b * m.cols];
    const double mx = *std::max_element(row, row + m.cols);
    double sum = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) {
      row[c] = std::exp(row[c] - mx);
      sum += row[c];
    }
    for (std::size_t c = 0; c < m.cols; ++c) row[c] /= sum;
  }
}

// Train-mode batch norm: normalize by batch statistics, optionally fold them
// into the moving averages.
inline Matrix bn_forward_train(BatchNormLayer& bn, const Matrix& in,
                               ForwardCache::BnCache* cache, bool update_moving) {
  const std::size_t width = bn.width();
  const auto batch = static_cast<double>(in.rows);

  std::vector<double> mean(width, 0.0);
  std::vector<double> var(width, 0.0);
  for (std::size_t b = 0; b < in.rows; ++b) {
    for (std::size_t f = 0; f < width; ++f) mean[f] += in(b, f);
  }
  for (double& v : mean) v /= batch;
  for (std::size_t b = 0; b < in.rows; ++b) {
    for (std::size_t f = 0; f < width; ++f) {
      const double d = in(b, f) - mean[f];
      var[f] += d * d;
    }
  }
  for (double& v : var) v /= batch;

  std::vector<double> inv_std(width);
  for (std::size_t f = 0; f < width; ++f) inv_std[f] = 1.0 / std::sqrt(var[f] + bn.epsilon);

  Matrix xhat(in.rows, width);
  Matrix out(in.rows, width);
  for (std::size_t b = 0; b < in.rows; ++b) {
    for (std::size_t f = 0; f < width; ++f) {
      const double h = (in(b, f) - mean[f]) * inv_std[f];
      xhat(b, f) = h;
      out(b, f) = bn.gamma[f] * h + bn.beta[f];
    }
  }

  if (update_moving) {
    for (std::size_t f = 0; f < width; ++f) {
      bn.moving_mean[f] = bn.momentum * bn.moving_mean[f] + (1.0 - bn.momentum) * mean[f];
      bn.moving_var[f] = bn.momentum * bn.moving_var[f] + (1.0 - bn.momentum) * var[f];
    }
  }

  if (cache) {
    cache->input = in;
    cache->xhat = xhat;
    cache->mean = std::move(mean);
    cache->inv_std = inv_std;
  }
  return out;
}

inline Matrix bn_forward_infer(const BatchNormLayer& bn, const Matrix& in) {
  const std::size_t width = bn.width();
  Matrix out(in.rows, width);
  for (std::size_t f = 0; f < width; ++f) {
    const double inv_std = 1.0 / std::sqrt(bn.moving_var[f] + bn.epsilon);
    for (std::size_t b = 0; b < in.rows; ++b) {
      out(b, f) = bn.gamma[f] * (in(b, f) - bn.moving_mean[f]) * inv_std + bn.beta[f];
    }
  }
  return out;
}

}  // namespace detail

// Inference pass using the moving batch-norm statistics; mutates nothing.
inline Matrix forward_infer(const Model& m, const Matrix& batch) {
  detail::check_batch(m, batch);
  Matrix h = detail::bn_forward_infer(m.norms[0], batch);
  const std::size_t n_hidden = m.arch.hidden.size();
  for (std::size_t l = 0; l < n_hidden; ++l) {
    h = detail::dense_forward(m.dense[l], h);
    detail::relu_inplace(h);
    h = detail::bn_forward_infer(m.norms[l + 1], h);
  }
  h = detail::dense_forward(m.dense[n_hidden], h);
  detail::softmax_rows(h);
  return h;
}

// Training pass using batch statistics; with update_moving the moving
// averages absorb this batch. The cache feeds backward().
inline Matrix forward_train(Model& m, const Matrix& batch, ForwardCache* cache,
                            bool update_moving = true) {
  detail::check_batch(m, batch);
  if (batch.rows < 2) {
    throw ParameterError("forward: train mode needs a batch of at least 2");
  }

  const std::size_t n_hidden = m.arch.hidden.size();
  if (cache) {
    cache->bn.resize(m.norms.size());
    cache->dense_input.resize(m.dense.size());
    cache->relu_pre.resize(n_hidden);
  }

  Matrix h = detail::bn_forward_train(m.norms[0], batch, cache ? &cache->bn[0] : nullptr,
                                      update_moving);
  for (std::size_t l = 0; l < n_hidden; ++l) {
    if (cache) cache->dense_input[l] = h;
    h = detail::dense_forward(m.dense[l], h);
    if (cache) cache->relu_pre[l] = h;
    detail::relu_inplace(h);
    h = detail::bn_forward_train(m.norms[l + 1], h, cache ? &cache->bn[l + 1] : nullptr,
                                 update_moving);
  }
  if (cache) cache->dense_input[n_hidden] = h;
  h = detail::dense_forward(m.dense[n_hidden], h);
  detail::softmax_rows(h);
  if (cache) cache->probs = h;
  return h;
}

inline Matrix forward(Model& m, const Matrix& batch, RunMode mode) {
  if (mode == RunMode::infer) return forward_infer(m, batch);
  return forward_train(m, batch, nullptr);
}

// Mean categorical cross-entropy in nats; probabilities are clipped into
// [1e-12, 1] so the loss stays finite.
inline double cross_entropy(const Matrix& probs, const Matrix& targets) {
  if (probs.rows != targets.rows || probs.cols != targets.cols) {
    throw ShapeError("cross_entropy: shape mismatch");
  }
  if (probs.rows == 0) throw ShapeError("cross_entropy: empty batch");
  for (std::size_t b = 0; b < probs.rows; ++b) {
    double row_sum = 0.0;
    for (std::size_t c = 0; c < probs.cols; ++c) row_sum += probs(b, c);
    if (std::abs(row_sum - 1.0) > 1e-6) {
      throw ParameterError("cross_entropy: probability rows must sum to 1");
    }
  }

  double loss = 0.0;
  for (std::size_t b = 0; b < probs.rows; ++b) {
    for (std::size_t c = 0; c < probs.cols; ++c) {
      const double p = targets(b, c);
      if (p == 0.0) continue;
      const double q = std::clamp(probs(b, c), 1e-12, 1.0);
      loss -= p * std::log(q);
    }
  }
  return loss / static_cast<double>(probs.rows);
}

// Gradients of the mean cross-entropy for every trainable parameter.
struct Gradients {
  struct BnGrad {
    std::vector<double> gamma;
    std::vector<double> beta;
  };
  struct DenseGrad {
    Matrix weights;
    std::vector<double> bias;
  };
  std::vector<BnGrad> norms;
  std::vector<DenseGrad> dense;
};

namespace detail {

// Backward through train-mode batch norm. Returns dL/d(input); fills the
// gamma/beta gradients.
inline Matrix bn_backward(const BatchNormLayer& bn, const ForwardCache::BnCache& cache,
                          const Matrix& dout, Gradients::BnGrad& grad) {
  const std::size_t width = bn.width();
  const std::size_t rows = dout.rows;
  const auto batch = static_cast<double>(rows);

  grad.gamma.assign(width, 0.0);
  grad.beta.assign(width, 0.0);

  std::vector<double> sum_dxhat(width, 0.0);
  std::vector<double> sum_dxhat_xhat(width, 0.0);
  for (std::size_t b = 0; b < rows; ++b) {
    for (std::size_t f = 0; f < width; ++f) {
      const double d = dout(b, f);
      const double xh = cache.xhat(b, f);
      grad.gamma[f] += d * xh;
      grad.beta[f] += d;
      const double dxhat = d * bn.gamma[f];
      sum_dxhat[f] += dxhat;
      sum_dxhat_xhat[f] += dxhat * xh;
    }
  }

  Matrix dx(rows, width);
  for (std::size_t b = 0; b < rows; ++b) {
    for (std::size_t f = 0; f < width; ++f) {
      const double dxhat = dout(b, f) * bn.gamma[f];
      dx(b, f) = (cache.inv_std[f] / batch) *
                 (batch * dxhat - sum_dxhat[f] - cache.xhat(b, f) * sum_dxhat_xhat[f]);
    }
  }
  return dx;
}

// Backward through a dense layer; fills weight/bias gradients and returns
// dL/d(input).
inline Matrix dense_backward(const DenseLayer& layer, const Matrix& input, const Matrix& delta,
                             Gradients::DenseGrad& grad) {
  const std::size_t out_dim = layer.weights.rows;
  const std::size_t in_dim = layer.weights.cols;

  grad.weights = Matrix(out_dim, in_dim);
  grad.bias.assign(out_dim, 0.0);
  for (std::size_t b = 0; b < delta.rows; ++b) {
    for (std::size_t o = 0; o < out_dim; ++o) {
      const double d = delta(b, o);
      grad.bias[o] += d;
      double* w_row = &grad.weights.data[o * in_dim];
      const double* x = &input.data[b * in_dim];
      for (std::size_t i = 0; i < in_dim; ++i) w_row[i] += d * x[i];
    }
  }

  Matrix dx(delta.rows, in_dim);
  for (std::size_t b = 0; b < delta.rows; ++b) {
    double* dst = &dx.data[b * in_dim];
    for (std::size_t o = 0; o < out_dim; ++o) {
      const double d = delta(b, o);
      const double* w_row = &layer.weights.data[o * in_dim];
      for (std::size_t i = 0; i < in_dim; ++i) dst[i] += d * w_row[i];
    }
  }
  return dx;
}

}  // namespace detail

// Backpropagation from a cached train-mode forward pass. Output-layer delta
// uses the combined softmax/cross-entropy simplification (probs - targets).
inline Gradients backward(const Model& m, const ForwardCache& cache, const Matrix& targets) {
  if (cache.probs.rows != targets.rows || cache.probs.cols != targets.cols) {
    throw ShapeError("backward: target shape mismatch");
  }
  const auto batch = static_cast<double>(targets.rows);
  const std::size_t n_hidden = m.arch.hidden.size();

  Gradients grads;
  grads.norms.resize(m.norms.size());
  grads.dense.resize(m.dense.size());

  Matrix delta(cache.probs.rows, cache.probs.cols);
  for (std::size_t i = 0; i < delta.data.size(); ++i) {
    delta.data[i] = (cache.probs.data[i] - targets.data[i]) / batch;
  }

  delta = detail::dense_backward(m.dense[n_hidden], cache.dense_input[n_hidden], delta,
                                 grads.dense[n_hidden]);

  for (std::size_t l = n_hidden; l-- > 0;) {
    delta = detail::bn_backward(m.norms[l + 1], cache.bn[l + 1], delta, grads.norms[l + 1]);
    // ReLU gate
    for (std::size_t i = 0; i < delta.data.size(); ++i) {
      if (cache.relu_pre[l].data[i] <= 0.0) delta.data[i] = 0.0;
    }
    delta = detail::dense_backward(m.dense[l], cache.dense_input[l], delta, grads.dense[l]);
  }

  detail::bn_backward(m.norms[0], cache.bn[0], delta, grads.norms[0]);
  return grads;
}

// Convenience: forward (train mode, no moving-average update) plus backward.
inline Gradients backward(Model& m, const Matrix& batch, const Matrix& targets) {
  ForwardCache cache;
  forward_train(m, batch, &cache, /*update_moving=*/false);
  return backward(m, cache, targets);
}

// Views over every trainable array, in a fixed order (model and gradient
// orders match): per batch-norm layer gamma then beta, then per dense layer
// weights then bias.
inline std::vector<std::span<double>> trainable_params(Model& m) {
  std::vector<std::span<double>> out;
  for (BatchNormLayer& bn : m.norms) {
    out.emplace_back(bn.gamma);
    out.emplace_back(bn.beta);
  }
  for (DenseLayer& d : m.dense) {
    out.emplace_back(d.weights.data);
    out.emplace_back(d.bias);
  }
  return out;
}

inline std::vector<std::span<const double>> gradient_views(const Gradients& g) {
  std::vector<std::span<const double>> out;
  for (const Gradients::BnGrad& bn : g.norms) {
    out.emplace_back(bn.gamma);
    out.emplace_back(bn.beta);
  }
  for (const Gradients::DenseGrad& d : g.dense) {
    out.emplace_back(d.weights.data);
    out.emplace_back(d.bias);
  }
  return out;
}

struct AdamConfig {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

// Optimizer state: first/second moment estimates per parameter group plus
// the shared step counter.
struct AdamState {
  AdamConfig config;
  std::uint64_t t = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;

  static AdamState for_params(const std::vector<std::span<double>>& params,
                              AdamConfig config = {}) {
    AdamState s;
    s.config = config;
    s.m.reserve(params.size());
    s.v.reserve(params.size());
    for (const auto& p : params) {
      s.m.emplace_back(p.size(), 0.0);
      s.v.emplace_back(p.size(), 0.0);
    }
    return s;
  }
};

// One Adam update with bias-corrected moment estimates.
inline void adam_step(const std::vector<std::span<double>>& params,
                      const std::vector<std::span<const double>>& grads, AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw ShapeError("adam_step: group count mismatch");
  }
  state.t += 1;
  const AdamConfig& c = state.config;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));

  for (std::size_t g = 0; g < params.size(); ++g) {
    auto p = params[g];
    auto gr = grads[g];
    if (p.size() != gr.size() || p.size() != state.m[g].size()) {
      throw ShapeError("adam_step: group size mismatch");
    }
    auto& m = state.m[g];
    auto& v = state.v[g];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * gr[i];
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * gr[i] * gr[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      p[i] -= c.alpha * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

struct TrainConfig {
  std::size_t epochs = 20;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;
  bool shuffle = true;
  AdamConfig adam;

  void validate() const {
    if (epochs < 1) throw ParameterError("train config: epochs must be >= 1");
    if (batch_size < 1) throw ParameterError("train config: batch size must be >= 1");
  }
};

struct EpochRecord {
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

using TrainHistory = std::vector<EpochRecord>;

struct Prediction {
  StateLabel label = StateLabel::nominal;
  std::array<double, 3> probabilities{};
};

inline Matrix features_to_matrix(std::span<const LabeledExample> examples) {
  Matrix m(examples.size(), FeatureVector::size());
  for (std::size_t b = 0; b < examples.size(); ++b) {
    for (std::size_t i = 0; i < FeatureVector::size(); ++i) m(b, i) = examples[b].features[i];
  }
  return m;
}

inline Matrix labels_to_targets(std::span<const LabeledExample> examples) {
  Matrix t(examples.size(), 3);
  for (std::size_t b = 0; b < examples.size(); ++b) {
    t(b, static_cast<std::size_t>(examples[b].label)) = 1.0;
  }
  return t;
}

// Argmax with ties resolved to the lowest index.
inline std::size_t argmax_row(const Matrix& m, std::size_t row) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < m.cols; ++c) {
    if (m(row, c) > m(row, best)) best = c;
  }
  return best;
}

// Infer-mode loss and accuracy over a labeled set.
inline std::pair<double, double> evaluate_loss_accuracy(const Model& m,
                                                        std::span<const LabeledExample> examples) {
  if (examples.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  const Matrix probs = forward_infer(m, features_to_matrix(examples));
  const double loss = cross_entropy(probs, labels_to_targets(examples));
  std::size_t correct = 0;
  for (std::size_t b = 0; b < examples.size(); ++b) {
    if (argmax_row(probs, b) == static_cast<std::size_t>(examples[b].label)) ++correct;
  }
  return {loss, static_cast<double>(correct) / static_cast<double>(examples.size())};
}

// Mini-batch training loop: deterministic seeded shuffle per epoch, Adam
// updates per batch, epoch-end metrics in infer mode. A final batch of one
// is folded into the previous batch (train-mode batch norm needs B >= 2).
inline TrainHistory train(Model& model, const DataSplit& split, const TrainConfig& config) {
  config.validate();
  if (split.train.empty()) throw DataError("train: empty training set");
  if (split.train.size() == 1) {
    throw DataError("train: need at least 2 training examples");
  }
  if (model.arch.input_dim != FeatureVector::size()) {
    throw ShapeError("train: model input dim must match the feature width");
  }

  auto params = trainable_params(model);
  AdamState adam = AdamState::for_params(params, config.adam);
  Rng rng(config.seed);

  std::vector<std::size_t> order(split.train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainHistory history;
  history.reserve(config.epochs);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) rng.shuffle(order);

    // Batch boundaries; a trailing singleton joins the previous batch.
    std::size_t start = 0;
    while (start < order.size()) {
      std::size_t end = std::min(start + config.batch_size, order.size());
      if (order.size() - end == 1) end = order.size();

      const std::size_t rows = end - start;
      Matrix batch(rows, FeatureVector::size());
      Matrix targets(rows, 3);
      for (std::size_t b = 0; b < rows; ++b) {
        const LabeledExample& ex = split.train[order[start + b]];
        for (std::size_t i = 0; i < FeatureVector::size(); ++i) batch(b, i) = ex.features[i];
        targets(b, static_cast<std::size_t>(ex.label)) = 1.0;
      }

      ForwardCache cache;
      forward_train(model, batch, &cache, /*update_moving=*/true);
      const double batch_loss = cross_entropy(cache.probs, targets);
      if (!std::isfinite(batch_loss)) {
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch + 1));
      }
      const Gradients grads = backward(model, cache, targets);
      adam_step(params, gradient_views(grads), adam);

      start = end;
    }

    EpochRecord rec;
    std::tie(rec.train_loss, rec.train_accuracy) = evaluate_loss_accuracy(model, split.train);
    std::tie(rec.val_loss, rec.val_accuracy) = evaluate_loss_accuracy(model, split.validation);
    if (!std::isfinite(rec.train_loss)) {
      throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch + 1));
    }
    history.push_back(rec);
  }
  return history;
}

inline Prediction predict(const Model& m, const FeatureVector& features) {
  if (m.arch.input_dim != FeatureVector::size()) {
    throw ShapeError("predict: model input dim must match the feature width");
  }
  Matrix batch(1, FeatureVector::size());
  for (std::size_t i = 0; i < FeatureVector::size(); ++i) batch(0, i) = features[i];
  const Matrix probs = forward_infer(m, batch);

  Prediction p;
  for (std::size_t c = 0; c < 3; ++c) p.probabilities[c] = probs(0, c);
  p.label = state_from_index(static_cast<int>(argmax_row(probs, 0)));
  return p;
}

}  // namespace vibrodiag
