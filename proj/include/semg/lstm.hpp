#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace semg {

inline constexpr double kLstmInitScale = 0.08;

// Gated storage cell with an output projection back to the level alphabet.
// Input and logits both have dimension input_dim (= L_q); the hidden and
// cell state have dimension hidden_dim.
struct LstmCell {
  int input_dim = 0;
  int hidden_dim = 0;

  // Row-major hidden_dim x input_dim
  std::vector<double> w_input_gate, w_forget_gate, w_output_gate, w_candidate;
  // Row-major hidden_dim x hidden_dim
  std::vector<double> u_input_gate, u_forget_gate, u_output_gate, u_candidate;
  // hidden_dim
  std::vector<double> b_input_gate, b_forget_gate, b_output_gate, b_candidate;
  // Output projection: input_dim x hidden_dim, plus input_dim bias.
  std::vector<double> w_project;
  std::vector<double> b_project;

  // State; zero immediately after a reset.
  std::vector<double> h;
  std::vector<double> c;

  void reset_state();

  // Parameter views for generic iteration (gradient checks, updates, io).
  std::vector<std::vector<double>*> parameter_blocks();
  std::vector<const std::vector<double>*> parameter_blocks() const;
};

// Uniform [-kLstmInitScale, kLstmInitScale] parameters, zero state.
LstmCell make_lstm_cell(int input_dim, int hidden_dim, std::uint64_t seed);

// One gated update; mutates h and c in place and returns the logits.
// input must be an input_dim vector (one-hot in the pipeline, any values
// accepted).
std::vector<double> lstm_step(LstmCell& cell, std::span<const double> input);

// Parameter gradients, same block order as parameter_blocks().
struct LstmGradients {
  std::vector<std::vector<double>> blocks;
};

// Mean cross-entropy of next-level prediction over a level sequence,
// starting from reset state, with full backpropagation through time.
// levels must have length >= 2; step t consumes one_hot(levels[t]) and is
// scored against levels[t+1]. Gradients are optional.
double sequence_loss(const LstmCell& cell, const std::vector<int>& levels,
                     LstmGradients* gradients);

std::vector<double> softmax(std::span<const double> logits);

}  // namespace semg
