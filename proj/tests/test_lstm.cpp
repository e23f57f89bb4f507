#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "semg/augment.hpp"
#include "semg/errors.hpp"
#include "semg/lstm.hpp"
#include "semg/quantizer.hpp"
#include "semg/rng.hpp"

#include "oracles.hpp"

using semg::GeneratorTrainConfig;
using semg::LstmCell;
using semg::QuantizedSeries;

namespace {

void zero_parameters(LstmCell& cell) {
  for (auto* block : cell.parameter_blocks()) std::fill(block->begin(), block->end(), 0.0);
}

QuantizedSeries series_of(int feature, std::vector<int> levels) {
  QuantizedSeries qs;
  qs.feature_index = feature;
  qs.subject_id = 1;
  qs.gesture_id = semg::GestureId::One;
  qs.levels = std::move(levels);
  return qs;
}

}  // namespace

TEST_CASE("zero-parameter cell is a fixed point at zero state") {
  LstmCell cell = semg::make_lstm_cell(6, 4, 1);
  zero_parameters(cell);
  const auto logits = semg::lstm_step(cell, semg::one_hot(2, 6));
  for (double h : cell.h) CHECK(h == 0.0);  // o * tanh(0) = 0
  for (double c : cell.c) CHECK(c == 0.0);  // 0.5 * 0 + 0.5 * tanh(0)
  for (double v : logits) CHECK(v == 0.0);
}

TEST_CASE("saturated forget gate preserves the cell state") {
  LstmCell cell = semg::make_lstm_cell(5, 3, 2);
  zero_parameters(cell);
  std::fill(cell.b_forget_gate.begin(), cell.b_forget_gate.end(), 60.0);   // f -> 1
  std::fill(cell.b_input_gate.begin(), cell.b_input_gate.end(), -60.0);    // i -> 0
  cell.c = {0.7, -0.4, 1.2};
  const auto c_before = cell.c;
  semg::lstm_step(cell, semg::one_hot(0, 5));
  for (std::size_t i = 0; i < c_before.size(); ++i) {
    CHECK(cell.c[i] == doctest::Approx(c_before[i]).epsilon(1e-12));
  }
}

TEST_CASE("gates stay strictly inside their ranges") {
  semg::rng::Stream stream(8);
  LstmCell cell = semg::make_lstm_cell(7, 5, 77);
  for (int t = 0; t < 30; ++t) {
    semg::lstm_step(cell, semg::one_hot(stream.below(7), 7));
    for (double h : cell.h) CHECK(std::fabs(h) < 1.0);  // |o * tanh(c)| < 1
  }
}

TEST_CASE("reset_state zeroes the state, keeps parameters, kills history") {
  LstmCell cell = semg::make_lstm_cell(5, 4, 9);
  const auto w_before = cell.w_candidate;
  semg::lstm_step(cell, semg::one_hot(1, 5));
  semg::lstm_step(cell, semg::one_hot(3, 5));
  cell.reset_state();
  for (double h : cell.h) CHECK(h == 0.0);
  for (double c : cell.c) CHECK(c == 0.0);
  CHECK(cell.w_candidate == w_before);

  // Idempotent.
  cell.reset_state();
  for (double h : cell.h) CHECK(h == 0.0);

  // Post-reset behavior is independent of pre-reset history.
  LstmCell twin = semg::make_lstm_cell(5, 4, 9);
  const auto a = semg::lstm_step(cell, semg::one_hot(2, 5));
  const auto b = semg::lstm_step(twin, semg::one_hot(2, 5));
  CHECK(a == b);
  CHECK(cell.h == twin.h);
  CHECK(cell.c == twin.c);
}

TEST_CASE("lstm_step validates input length") {
  LstmCell cell = semg::make_lstm_cell(5, 3, 4);
  CHECK_THROWS_AS(semg::lstm_step(cell, semg::one_hot(1, 4)), semg::ArgumentError);
}

TEST_CASE("BPTT gradients match central finite differences") {
  // 2-step toy: 3 levels, hidden dim 3, tolerance 1e-5.
  LstmCell cell = semg::make_lstm_cell(3, 3, 31415);
  const std::vector<int> levels = {1, 2, 0};  // two prediction steps
  semg::LstmGradients grads;
  semg::sequence_loss(cell, levels, &grads);

  const double step = 1e-4;
  auto blocks = cell.parameter_blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i = 0; i < blocks[b]->size(); ++i) {
      const double saved = (*blocks[b])[i];
      (*blocks[b])[i] = saved + step;
      const double plus = semg::sequence_loss(cell, levels, nullptr);
      (*blocks[b])[i] = saved - step;
      const double minus = semg::sequence_loss(cell, levels, nullptr);
      (*blocks[b])[i] = saved;
      const double numeric = (plus - minus) / (2.0 * step);
      const double analytic = grads.blocks[b][i];
      const double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
      CHECK(std::fabs(analytic - numeric) / denom < 1e-5);
    }
  }
}

TEST_CASE("sequence_loss rejects short series and foreign levels") {
  LstmCell cell = semg::make_lstm_cell(4, 3, 5);
  CHECK_THROWS_AS(semg::sequence_loss(cell, {2}, nullptr), semg::DataError);
  CHECK_THROWS_AS(semg::sequence_loss(cell, {1, 9}, nullptr), semg::ArgumentError);
}

TEST_CASE("training on a constant series concentrates the softmax") {
  GeneratorTrainConfig config;  // spec defaults: H=32, 200 epochs, lr 0.05
  config.seed = 3;
  const std::vector<QuantizedSeries> data = {series_of(0, std::vector<int>(20, 5))};
  const auto model = semg::train_generator(data, 20, 1, config);

  LstmCell cell = model.cells[0];
  cell.reset_state();
  const auto logits = semg::lstm_step(cell, semg::one_hot(5, 20));
  const auto probs = semg::softmax(logits);
  CHECK(probs[5] > 0.9);
}

TEST_CASE("training on a deterministic alternation learns the transition") {
  GeneratorTrainConfig config;
  config.hidden_dim = 8;
  config.epochs = 200;
  config.learning_rate = 0.05;
  config.seed = 4;
  std::vector<int> alternating;
  for (int i = 0; i < 20; ++i) alternating.push_back(i % 2 == 0 ? 1 : 2);
  const std::vector<QuantizedSeries> data = {series_of(0, alternating)};
  const auto model = semg::train_generator(data, 20, 1, config);

  LstmCell cell = model.cells[0];
  cell.reset_state();
  const auto logits = semg::lstm_step(cell, semg::one_hot(1, 20));
  const auto probs = semg::softmax(logits);
  CHECK(std::distance(probs.begin(), std::max_element(probs.begin(), probs.end())) == 2);
}

TEST_CASE("generator training is deterministic bit for bit") {
  GeneratorTrainConfig config;
  config.hidden_dim = 4;
  config.epochs = 15;
  config.seed = 21;
  const std::vector<QuantizedSeries> data = {series_of(0, {1, 3, 2, 0, 1, 3}),
                                             series_of(1, {0, 0, 2, 2, 1, 1})};
  const auto m1 = semg::train_generator(data, 4, 2, config);
  const auto m2 = semg::train_generator(data, 4, 2, config);
  for (std::size_t f = 0; f < m1.cells.size(); ++f) {
    auto b1 = m1.cells[f].parameter_blocks();
    auto b2 = m2.cells[f].parameter_blocks();
    for (std::size_t b = 0; b < b1.size(); ++b) REQUIRE(*b1[b] == *b2[b]);
  }
  CHECK(m1.final_losses == m2.final_losses);
}

TEST_CASE("training loss is non-increasing on a constant series") {
  GeneratorTrainConfig config;
  config.hidden_dim = 6;
  config.epochs = 120;
  config.learning_rate = 0.1;
  config.seed = 6;
  const std::vector<QuantizedSeries> data = {series_of(0, std::vector<int>(12, 3))};
  std::vector<std::vector<double>> traces;
  semg::train_generator(data, 8, 1, config, &traces);
  REQUIRE(traces.size() == 1);
  REQUIRE(traces[0].size() == 120);
  for (std::size_t e = 1; e < traces[0].size(); ++e) {
    CHECK(traces[0][e] <= traces[0][e - 1] + 1e-9);
  }
}

TEST_CASE("train_generator rejects short series") {
  GeneratorTrainConfig config;
  const std::vector<QuantizedSeries> data = {series_of(0, {4})};
  CHECK_THROWS_AS(semg::train_generator(data, 8, 1, config), semg::DataError);
}
