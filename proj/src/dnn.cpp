#include "semg/dnn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "semg/errors.hpp"
#include "semg/rng.hpp"

namespace semg {

namespace {

constexpr double kClampLo = 1e-12;
constexpr double kClampHi = 1.0 - 1e-12;

double clamp_output(double h) { return std::clamp(h, kClampLo, kClampHi); }

// z = theta * [a; 1], sigmoid applied by the caller when needed.
void affine(const std::vector<double>& theta, int rows, int in_dim,
            const double* a, double* out) {
  const int cols = in_dim + 1;
  for (int i = 0; i < rows; ++i) {
    const double* w = theta.data() + static_cast<std::size_t>(i) * cols;
    double z = w[in_dim];  // bias
    for (int j = 0; j < in_dim; ++j) z += w[j] * a[j];
    out[i] = z;
  }
}

int argmax_lowest(std::span<const double> v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)]) best = i;
  }
  return best;
}

// Shared by cost/accuracy/train: one pass producing outputs per row.
void forward_outputs(const Network& net, const LabeledMatrix& data,
                     std::vector<std::vector<double>>& scratch,
                     std::vector<double>& outputs /* rows x K */) {
  const int transitions = net.transitions();
  scratch.resize(static_cast<std::size_t>(transitions) + 1);
  for (int z = 0; z <= transitions; ++z) {
    scratch[static_cast<std::size_t>(z)].resize(
        static_cast<std::size_t>(net.layer_sizes[static_cast<std::size_t>(z)]));
  }
  const int K = net.output_dim();
  outputs.resize(data.rows * static_cast<std::size_t>(K));
  for (std::size_t r = 0; r < data.rows; ++r) {
    const auto in = data.input_row(r);
    std::copy(in.begin(), in.end(), scratch[0].begin());
    for (int z = 0; z < transitions; ++z) {
      const int rows = net.layer_sizes[static_cast<std::size_t>(z) + 1];
      const int in_dim = net.layer_sizes[static_cast<std::size_t>(z)];
      affine(net.weights[static_cast<std::size_t>(z)], rows, in_dim,
             scratch[static_cast<std::size_t>(z)].data(),
             scratch[static_cast<std::size_t>(z) + 1].data());
      for (double& v : scratch[static_cast<std::size_t>(z) + 1]) v = sigmoid(v);
    }
    std::copy(scratch.back().begin(), scratch.back().end(),
              outputs.begin() + static_cast<std::ptrdiff_t>(r * static_cast<std::size_t>(K)));
  }
}

double cost_from_outputs(const LabeledMatrix& data, const std::vector<double>& outputs,
                         const Network& net, double l2_lambda) {
  const int K = data.output_dim;
  double j = 0.0;
  for (std::size_t r = 0; r < data.rows; ++r) {
    const auto y = data.target_row(r);
    const double* h = outputs.data() + r * static_cast<std::size_t>(K);
    for (int k = 0; k < K; ++k) {
      const double hk = clamp_output(h[k]);
      const double yk = y[static_cast<std::size_t>(k)];
      j -= yk * std::log(hk) + (1.0 - yk) * std::log(1.0 - hk);
    }
  }
  j /= static_cast<double>(data.rows);
  if (l2_lambda > 0.0) {
    double ss = 0.0;
    for (int z = 0; z < net.transitions(); ++z) {
      const int rows = net.layer_sizes[static_cast<std::size_t>(z) + 1];
      const int cols = net.layer_sizes[static_cast<std::size_t>(z)] + 1;
      const auto& w = net.weights[static_cast<std::size_t>(z)];
      for (int i = 0; i < rows; ++i) {
        for (int c = 0; c < cols - 1; ++c) {  // skip bias column
          const double v = w[static_cast<std::size_t>(i) * cols + static_cast<std::size_t>(c)];
          ss += v * v;
        }
      }
    }
    j += 0.5 * l2_lambda * ss;
  }
  return j;
}

double accuracy_from_outputs(const LabeledMatrix& data, const std::vector<double>& outputs) {
  const int K = data.output_dim;
  std::size_t correct = 0;
  for (std::size_t r = 0; r < data.rows; ++r) {
    const std::span<const double> h(outputs.data() + r * static_cast<std::size_t>(K),
                                    static_cast<std::size_t>(K));
    const auto y = data.target_row(r);
    if (argmax_lowest(h) == argmax_lowest(y)) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(data.rows);
}

void check_input(const Network& net, std::span<const double> input, const char* op) {
  if (static_cast<int>(input.size()) != net.input_dim()) {
    throw ArgumentError(std::string(op) + ": input length " +
                        std::to_string(input.size()) + " != network input dim " +
                        std::to_string(net.input_dim()));
  }
}

}  // namespace

std::vector<int> standard_topology(int input_dim, int output_dim) {
  const int h = static_cast<int>(std::lround(kHiddenWidthFactor * input_dim));
  std::vector<int> sizes;
  sizes.push_back(input_dim);
  for (int i = 0; i < kHiddenLayerCount; ++i) sizes.push_back(h);
  sizes.push_back(output_dim);
  return sizes;
}

void TrainConfig::validate() const {
  if (iterations < 1) throw ArgumentError("TrainConfig: iterations must be >= 1");
  if (!(learning_rate > 0.0)) throw ArgumentError("TrainConfig: learning_rate must be > 0");
  if (l2_lambda < 0.0) throw ArgumentError("TrainConfig: l2_lambda must be >= 0");
  if (stop_tolerance < 0.0) throw ArgumentError("TrainConfig: stop_tolerance must be >= 0");
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

ForwardPass forward(const Network& net, std::span<const double> input) {
  check_input(net, input, "forward");
  ForwardPass pass;
  pass.activations.resize(net.layer_sizes.size());
  pass.activations[0].assign(input.begin(), input.end());
  for (int z = 0; z < net.transitions(); ++z) {
    const int rows = net.layer_sizes[static_cast<std::size_t>(z) + 1];
    const int in_dim = net.layer_sizes[static_cast<std::size_t>(z)];
    auto& next = pass.activations[static_cast<std::size_t>(z) + 1];
    next.resize(static_cast<std::size_t>(rows));
    affine(net.weights[static_cast<std::size_t>(z)], rows, in_dim,
           pass.activations[static_cast<std::size_t>(z)].data(), next.data());
    for (double& v : next) v = sigmoid(v);
  }
  return pass;
}

double cost(const Network& net, const LabeledMatrix& data, double l2_lambda) {
  if (data.rows == 0) throw ArgumentError("cost: empty data");
  std::vector<std::vector<double>> scratch;
  std::vector<double> outputs;
  forward_outputs(net, data, scratch, outputs);
  return cost_from_outputs(data, outputs, net, l2_lambda);
}

std::vector<double> output_delta(std::span<const double> a_out, std::span<const double> y) {
  if (a_out.size() != y.size()) throw ArgumentError("output_delta: length mismatch");
  std::vector<double> d(a_out.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a_out[i] - y[i];
  return d;
}

std::vector<double> hidden_delta(std::span<const double> delta_next,
                                 std::span<const double> theta, int rows, int cols,
                                 std::span<const double> a) {
  if (static_cast<int>(delta_next.size()) != rows ||
      static_cast<int>(a.size()) != cols - 1 ||
      static_cast<int>(theta.size()) != rows * cols) {
    throw ArgumentError("hidden_delta: dimension mismatch");
  }
  std::vector<double> d(a.size(), 0.0);
  for (int i = 0; i < rows; ++i) {
    const double* w = theta.data() + static_cast<std::size_t>(i) * cols;
    const double dn = delta_next[static_cast<std::size_t>(i)];
    for (int j = 0; j < cols - 1; ++j) d[static_cast<std::size_t>(j)] += w[j] * dn;
  }
  for (std::size_t j = 0; j < d.size(); ++j) d[j] *= a[j] * (1.0 - a[j]);
  return d;
}

std::vector<std::vector<double>> accumulate_gradients(const Network& net,
                                                      const LabeledMatrix& data,
                                                      double l2_lambda) {
  if (data.rows == 0) throw ArgumentError("accumulate_gradients: empty data");
  const int transitions = net.transitions();
  std::vector<std::vector<double>> grads(static_cast<std::size_t>(transitions));
  for (int z = 0; z < transitions; ++z) {
    grads[static_cast<std::size_t>(z)].assign(net.weights[static_cast<std::size_t>(z)].size(), 0.0);
  }

  std::vector<std::vector<double>> acts(net.layer_sizes.size());
  std::vector<std::vector<double>> deltas(net.layer_sizes.size());
  for (std::size_t z = 0; z < net.layer_sizes.size(); ++z) {
    acts[z].resize(static_cast<std::size_t>(net.layer_sizes[z]));
    deltas[z].resize(static_cast<std::size_t>(net.layer_sizes[z]));
  }

  for (std::size_t r = 0; r < data.rows; ++r) {
    const auto in = data.input_row(r);
    std::copy(in.begin(), in.end(), acts[0].begin());
    for (int z = 0; z < transitions; ++z) {
      const int rows = net.layer_sizes[static_cast<std::size_t>(z) + 1];
      const int in_dim = net.layer_sizes[static_cast<std::size_t>(z)];
      affine(net.weights[static_cast<std::size_t>(z)], rows, in_dim,
             acts[static_cast<std::size_t>(z)].data(),
             acts[static_cast<std::size_t>(z) + 1].data());
      for (double& v : acts[static_cast<std::size_t>(z) + 1]) v = sigmoid(v);
    }

    // Output error, then chain back through the hidden layers.
    const auto y = data.target_row(r);
    auto& out_delta = deltas.back();
    for (std::size_t k = 0; k < out_delta.size(); ++k) {
      out_delta[k] = acts.back()[k] - y[k];
    }
    for (int z = transitions - 1; z >= 1; --z) {
      const int rows = net.layer_sizes[static_cast<std::size_t>(z) + 1];
      const int cols = net.layer_sizes[static_cast<std::size_t>(z)] + 1;
      const auto& w = net.weights[static_cast<std::size_t>(z)];
      auto& d = deltas[static_cast<std::size_t>(z)];
      std::fill(d.begin(), d.end(), 0.0);
      for (int i = 0; i < rows; ++i) {
        const double dn = deltas[static_cast<std::size_t>(z) + 1][static_cast<std::size_t>(i)];
        const double* wr = w.data() + static_cast<std::size_t>(i) * cols;
        for (int j = 0; j < cols - 1; ++j) d[static_cast<std::size_t>(j)] += wr[j] * dn;
      }
      const auto& a = acts[static_cast<std::size_t>(z)];
      for (std::size_t j = 0; j < d.size(); ++j) d[j] *= a[j] * (1.0 - a[j]);
    }

    // Delta accumulation: outer products delta^(z+1) [a^(z); 1]^T.
    for (int z = 0; z < transitions; ++z) {
      const int rows = net.layer_sizes[static_cast<std::size_t>(z) + 1];
      const int in_dim = net.layer_sizes[static_cast<std::size_t>(z)];
      const int cols = in_dim + 1;
      auto& g = grads[static_cast<std::size_t>(z)];
      const auto& a = acts[static_cast<std::size_t>(z)];
      const auto& d = deltas[static_cast<std::size_t>(z) + 1];
      for (int i = 0; i < rows; ++i) {
        double* gr = g.data() + static_cast<std::size_t>(i) * cols;
        const double di = d[static_cast<std::size_t>(i)];
        for (int j = 0; j < in_dim; ++j) gr[j] += di * a[static_cast<std::size_t>(j)];
        gr[in_dim] += di;
      }
    }
  }

  const double inv_m = 1.0 / static_cast<double>(data.rows);
  for (int z = 0; z < transitions; ++z) {
    const int rows = net.layer_sizes[static_cast<std::size_t>(z) + 1];
    const int cols = net.layer_sizes[static_cast<std::size_t>(z)] + 1;
    auto& g = grads[static_cast<std::size_t>(z)];
    const auto& w = net.weights[static_cast<std::size_t>(z)];
    for (int i = 0; i < rows; ++i) {
      for (int c = 0; c < cols; ++c) {
        const std::size_t idx = static_cast<std::size_t>(i) * cols + static_cast<std::size_t>(c);
        g[idx] *= inv_m;
        if (l2_lambda > 0.0 && c != cols - 1) g[idx] += l2_lambda * w[idx];
      }
    }
  }
  return grads;
}

TrainingReport train(Network& net, const LabeledMatrix& data, const TrainConfig& config,
                     const LabeledMatrix* monitor) {
  config.validate();
  if (data.rows == 0) throw ArgumentError("train: empty data");
  if (data.input_dim != net.input_dim() || data.output_dim != net.output_dim()) {
    throw ArgumentError("train: data dimensions do not match network");
  }

  const auto start = std::chrono::steady_clock::now();
  TrainingReport report;
  report.records.reserve(static_cast<std::size_t>(config.iterations));

  std::vector<std::vector<double>> scratch;
  std::vector<double> outputs;
  double previous_cost = 0.0;
  for (int it = 1; it <= config.iterations; ++it) {
    const auto grads = accumulate_gradients(net, data, config.l2_lambda);
    for (std::size_t z = 0; z < net.weights.size(); ++z) {
      auto& w = net.weights[z];
      const auto& g = grads[z];
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= config.learning_rate * g[i];
    }

    forward_outputs(net, data, scratch, outputs);
    IterationRecord rec;
    rec.iteration = it;
    rec.cost = cost_from_outputs(data, outputs, net, config.l2_lambda);
    rec.train_ca = accuracy_from_outputs(data, outputs);
    if (monitor != nullptr && monitor->rows > 0) {
      std::vector<double> mon_outputs;
      forward_outputs(net, *monitor, scratch, mon_outputs);
      rec.test_ca = accuracy_from_outputs(*monitor, mon_outputs);
      rec.has_test = true;
    }
    if (!std::isfinite(rec.cost)) {
      throw DivergenceError("train: non-finite cost at iteration " + std::to_string(it), it);
    }
    report.records.push_back(rec);

    if (config.stop_tolerance > 0.0 && it > 1 &&
        std::fabs(previous_cost - rec.cost) < config.stop_tolerance) {
      break;
    }
    previous_cost = rec.cost;
  }

  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Prediction predict(const Network& net, std::span<const double> input) {
  check_input(net, input, "predict");
  auto pass = forward(net, input);
  Prediction p;
  p.output = pass.output();
  p.class_index = argmax_lowest(p.output);
  return p;
}

double accuracy(const Network& net, const LabeledMatrix& data) {
  if (data.rows == 0) throw ArgumentError("accuracy: empty data");
  std::vector<std::vector<double>> scratch;
  std::vector<double> outputs;
  forward_outputs(net, data, scratch, outputs);
  return accuracy_from_outputs(data, outputs);
}

Network init_weights(const std::vector<int>& layer_sizes, std::uint64_t seed) {
  if (layer_sizes.size() < 2) throw ArgumentError("init_weights: need at least 2 layers");
  for (int s : layer_sizes) {
    if (s < 1) throw ArgumentError("init_weights: layer sizes must be >= 1");
  }
  Network net;
  net.layer_sizes = layer_sizes;
  net.init_seed = seed;
  net.weights.resize(layer_sizes.size() - 1);
  rng::Stream stream(rng::derive(seed, {0x6e65}));
  for (std::size_t z = 0; z + 1 < layer_sizes.size(); ++z) {
    const int fan_in = layer_sizes[z];
    const int fan_out = layer_sizes[z + 1];
    const double eps = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    auto& w = net.weights[z];
    w.resize(static_cast<std::size_t>(fan_out) * (static_cast<std::size_t>(fan_in) + 1));
    for (double& v : w) v = stream.uniform(-eps, eps);
  }
  return net;
}

}  // namespace semg
