#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "semg/lstm.hpp"
#include "semg/quantizer.hpp"

namespace semg {

struct GeneratorTrainConfig {
  int hidden_dim = 32;
  int epochs = 200;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

// One next-level predictor per feature column, all sharing the quantizer's
// level alphabet.
struct GeneratorModel {
  int levels = kDefaultQuantizerLevels;
  int hidden_dim = 32;
  GeneratorTrainConfig config;
  std::vector<LstmCell> cells;          // indexed by feature
  std::vector<double> final_losses;     // mean training loss per feature

  int feature_count() const { return static_cast<int>(cells.size()); }
};

// Trains each feature's predictor on its quantized series: input is the
// one-hot of level_t, target is level_{t+1}, per-sequence gradient descent,
// state reset between sequences. Feature f uses the random stream seeded
// with config.seed + f, so parallel and sequential training give identical
// parameters. epoch_losses, when given, receives the per-feature trace of
// mean training loss per epoch.
GeneratorModel train_generator(const std::vector<QuantizedSeries>& series, int levels,
                               int feature_count, const GeneratorTrainConfig& config,
                               std::vector<std::vector<double>>* epoch_losses = nullptr);

// Samples one synthetic subject: per (gesture, feature) the cell starts
// from reset state, is primed with the first level of a seeded random real
// series for that key, then `length` levels are drawn from softmax(logits)
// (argmax when argmax_mode) and dequantized into per-repetition rows.
std::vector<FeatureVector> generate_subject(const GeneratorModel& model,
                                            const QuantizerModel& quantizer,
                                            const std::vector<FeatureVector>& real_features,
                                            int new_subject_id, int length,
                                            std::uint64_t seed, bool argmax_mode = false);

void save_generator(const GeneratorModel& model, const std::filesystem::path& path);
GeneratorModel load_generator(const std::filesystem::path& path);

}  // namespace semg
