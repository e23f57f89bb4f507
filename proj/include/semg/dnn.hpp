#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace semg {

inline constexpr int kHiddenLayerCount = 4;
inline constexpr double kHiddenWidthFactor = 1.5;
inline constexpr int kDefaultIterations = 150;
inline constexpr double kDefaultLearningRate = 0.3;

// Layered dense network. weights[z] maps layer z to layer z+1 and has shape
// layer_sizes[z+1] x (layer_sizes[z] + 1), row-major, bias in the last
// column.
struct Network {
  std::vector<int> layer_sizes;
  std::vector<std::vector<double>> weights;
  std::uint64_t init_seed = 0;

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  int transitions() const { return static_cast<int>(layer_sizes.size()) - 1; }
};

// [d, h, h, h, h, K] with h = round(1.5 * d).
std::vector<int> standard_topology(int input_dim, int output_dim);

struct TrainConfig {
  int iterations = kDefaultIterations;
  double learning_rate = kDefaultLearningRate;
  double l2_lambda = 0.0;
  std::uint64_t seed = 0;
  // Optional early stop on |delta J| < stop_tolerance; 0 disables it and
  // the full iteration budget runs.
  double stop_tolerance = 0.0;

  void validate() const;
};

// Row-major m x d inputs with m x K one-hot targets.
struct LabeledMatrix {
  std::size_t rows = 0;
  int input_dim = 0;
  int output_dim = 0;
  std::vector<double> inputs;
  std::vector<double> targets;

  std::span<const double> input_row(std::size_t i) const {
    return {inputs.data() + i * static_cast<std::size_t>(input_dim),
            static_cast<std::size_t>(input_dim)};
  }
  std::span<const double> target_row(std::size_t i) const {
    return {targets.data() + i * static_cast<std::size_t>(output_dim),
            static_cast<std::size_t>(output_dim)};
  }
};

double sigmoid(double x);

// All layer activations; activations.front() is the input, back() the
// K sigmoid outputs.
struct ForwardPass {
  std::vector<std::vector<double>> activations;

  const std::vector<double>& output() const { return activations.back(); }
};

ForwardPass forward(const Network& net, std::span<const double> input);

// One-vs-all cross-entropy, mean over rows, outputs clamped into
// [1e-12, 1-1e-12] before the logs; plus (lambda/2) * sum of squared
// non-bias weights, so the gradient's regularization term is exactly
// lambda * theta.
double cost(const Network& net, const LabeledMatrix& data, double l2_lambda);

// a - y at the output layer.
std::vector<double> output_delta(std::span<const double> a_out, std::span<const double> y);

// Back-propagated error for a hidden layer: (theta without bias column)^T
// delta_next, elementwise times a(1-a). theta is row-major rows x cols with
// the bias in the last column.
std::vector<double> hidden_delta(std::span<const double> delta_next,
                                 std::span<const double> theta, int rows, int cols,
                                 std::span<const double> a);

// Mean outer-product gradient accumulation; equals the analytic gradient of
// cost. The lambda term touches non-bias entries only.
std::vector<std::vector<double>> accumulate_gradients(const Network& net,
                                                      const LabeledMatrix& data,
                                                      double l2_lambda);

struct IterationRecord {
  int iteration = 0;  // 1-based
  double cost = 0.0;
  double train_ca = 0.0;  // percent
  double test_ca = 0.0;   // percent, meaningful when has_test
  bool has_test = false;
};

struct TrainingReport {
  std::string network_name;
  std::vector<IterationRecord> records;
  double duration_seconds = 0.0;

  double final_cost() const { return records.back().cost; }
  double final_train_ca() const { return records.back().train_ca; }
};

// Full-batch gradient descent for exactly config.iterations steps (unless
// the optional tolerance stop fires). Each record holds the post-update
// cost and accuracies. Throws DivergenceError when the cost goes
// non-finite.
TrainingReport train(Network& net, const LabeledMatrix& data, const TrainConfig& config,
                     const LabeledMatrix* monitor = nullptr);

struct Prediction {
  int class_index = 0;
  std::vector<double> output;
};

// Argmax over the K outputs; ties break toward the lowest index.
Prediction predict(const Network& net, std::span<const double> input);

// Percent of rows whose argmax matches the one-hot target.
double accuracy(const Network& net, const LabeledMatrix& data);

// Uniform [-eps, eps] with eps = sqrt(6 / (fan_in + fan_out)) per
// transition; deterministic per seed.
Network init_weights(const std::vector<int>& layer_sizes, std::uint64_t seed);

}  // namespace semg
