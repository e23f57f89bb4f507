#include "semg/augment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "semg/errors.hpp"
#include "semg/rng.hpp"

namespace semg {

namespace {

const char* const kCellFieldNames[] = {
    "w_input_gate", "w_forget_gate", "w_output_gate", "w_candidate",
    "u_input_gate", "u_forget_gate", "u_output_gate", "u_candidate",
    "b_input_gate", "b_forget_gate", "b_output_gate", "b_candidate",
    "w_project",    "b_project"};

// Trains one feature's cell over all its sequences.
double train_feature(LstmCell& cell, const std::vector<const QuantizedSeries*>& sequences,
                     const GeneratorTrainConfig& config, std::vector<double>* loss_trace) {
  LstmGradients grads;
  double epoch_loss = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    epoch_loss = 0.0;
    for (const QuantizedSeries* qs : sequences) {
      const double loss = sequence_loss(cell, qs->levels, &grads);
      epoch_loss += loss;
      auto params = cell.parameter_blocks();
      for (std::size_t b = 0; b < params.size(); ++b) {
        auto& p = *params[b];
        const auto& g = grads.blocks[b];
        for (std::size_t i = 0; i < p.size(); ++i) {
          p[i] -= config.learning_rate * g[i];
        }
      }
    }
    epoch_loss /= static_cast<double>(sequences.size());
    if (loss_trace != nullptr) loss_trace->push_back(epoch_loss);
  }
  cell.reset_state();
  return epoch_loss;
}

int sample_level(const std::vector<double>& probs, rng::Stream& stream, bool argmax_mode) {
  if (argmax_mode) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(probs.size()); ++i) {
      if (probs[static_cast<std::size_t>(i)] > probs[static_cast<std::size_t>(best)]) {
        best = i;
      }
    }
    return best;
  }
  const double u = stream.uniform();
  double cum = 0.0;
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    cum += probs[static_cast<std::size_t>(i)];
    if (u < cum) return i;
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

void GeneratorTrainConfig::validate() const {
  if (hidden_dim < 1) throw ArgumentError("GeneratorTrainConfig: hidden_dim must be >= 1");
  if (epochs < 1) throw ArgumentError("GeneratorTrainConfig: epochs must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw ArgumentError("GeneratorTrainConfig: learning_rate must be > 0");
  }
}

GeneratorModel train_generator(const std::vector<QuantizedSeries>& series, int levels,
                               int feature_count, const GeneratorTrainConfig& config,
                               std::vector<std::vector<double>>* epoch_losses) {
  config.validate();
  if (series.empty()) throw ArgumentError("train_generator: no series");
  if (levels < 2 || feature_count < 1) {
    throw ArgumentError("train_generator: invalid levels or feature count");
  }

  std::vector<std::vector<const QuantizedSeries*>> by_feature(
      static_cast<std::size_t>(feature_count));
  for (const auto& qs : series) {
    if (qs.feature_index < 0 || qs.feature_index >= feature_count) {
      throw ArgumentError("train_generator: feature_index out of range");
    }
    if (qs.levels.size() < 2) {
      throw DataError("train_generator: series for feature " +
                      std::to_string(qs.feature_index) + " is shorter than 2");
    }
    for (int lv : qs.levels) {
      if (lv < 0 || lv >= levels) {
        throw DataError("train_generator: level outside the quantizer alphabet");
      }
    }
    by_feature[static_cast<std::size_t>(qs.feature_index)].push_back(&qs);
  }
  for (int f = 0; f < feature_count; ++f) {
    if (by_feature[static_cast<std::size_t>(f)].empty()) {
      throw DataError("train_generator: no series for feature " + std::to_string(f));
    }
  }

  GeneratorModel model;
  model.levels = levels;
  model.hidden_dim = config.hidden_dim;
  model.config = config;
  model.cells.resize(static_cast<std::size_t>(feature_count));
  model.final_losses.assign(static_cast<std::size_t>(feature_count), 0.0);
  if (epoch_losses != nullptr) {
    epoch_losses->assign(static_cast<std::size_t>(feature_count), {});
  }

  // Feature trainings are independent; results match sequential execution.
  const unsigned n_threads =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(feature_count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int f = next.fetch_add(1); f < feature_count; f = next.fetch_add(1)) {
      const auto fi = static_cast<std::size_t>(f);
      model.cells[fi] = make_lstm_cell(levels, config.hidden_dim,
                                       config.seed + static_cast<std::uint64_t>(f));
      model.final_losses[fi] =
          train_feature(model.cells[fi], by_feature[fi], config,
                        epoch_losses != nullptr ? &(*epoch_losses)[fi] : nullptr);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return model;
}

std::vector<FeatureVector> generate_subject(const GeneratorModel& model,
                                            const QuantizerModel& quantizer,
                                            const std::vector<FeatureVector>& real_features,
                                            int new_subject_id, int length,
                                            std::uint64_t seed, bool argmax_mode) {
  if (length < 1) throw ArgumentError("generate_subject: length must be >= 1");
  if (model.feature_count() != quantizer.dimension()) {
    throw ArgumentError("generate_subject: generator and quantizer dimensions differ");
  }
  if (model.levels != quantizer.levels) {
    throw ArgumentError("generate_subject: generator and quantizer level counts differ");
  }
  if (real_features.empty()) {
    throw ArgumentError("generate_subject: empty template feature table");
  }

  const auto series = to_series(real_features, quantizer);
  // (gesture, feature) -> primer candidates in subject order.
  std::map<std::pair<int, int>, std::vector<const QuantizedSeries*>> by_key;
  for (const auto& qs : series) {
    by_key[{static_cast<int>(qs.gesture_id), qs.feature_index}].push_back(&qs);
  }
  std::vector<int> gestures;
  for (const auto& fv : real_features) {
    const int g = static_cast<int>(fv.label.gesture_id);
    if (std::find(gestures.begin(), gestures.end(), g) == gestures.end()) {
      gestures.push_back(g);
    }
  }
  std::sort(gestures.begin(), gestures.end());

  const int d = model.feature_count();
  // levels_out[g][f] holds the sampled level sequence.
  std::vector<std::vector<std::vector<int>>> levels_out(
      gestures.size(), std::vector<std::vector<int>>(static_cast<std::size_t>(d)));

  LstmCell scratch;
  for (std::size_t gi = 0; gi < gestures.size(); ++gi) {
    const int g = gestures[gi];
    for (int f = 0; f < d; ++f) {
      const auto it = by_key.find({g, f});
      if (it == by_key.end() || it->second.empty()) {
        throw ArgumentError("generate_subject: no real series for gesture " +
                            gesture_name(static_cast<GestureId>(g)) + ", feature " +
                            std::to_string(f));
      }
      rng::Stream stream(rng::derive(
          seed, {static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(f)}));
      const auto& candidates = it->second;
      const QuantizedSeries* primer =
          candidates[static_cast<std::size_t>(stream.below(static_cast<int>(candidates.size())))];

      scratch = model.cells[static_cast<std::size_t>(f)];
      scratch.reset_state();
      int current = primer->levels.front();
      auto& out = levels_out[gi][static_cast<std::size_t>(f)];
      out.reserve(static_cast<std::size_t>(length));
      for (int t = 0; t < length; ++t) {
        const auto logits = lstm_step(scratch, one_hot(current, model.levels));
        const auto probs = softmax(logits);
        current = sample_level(probs, stream, argmax_mode);
        out.push_back(current);
      }
    }
  }

  std::vector<FeatureVector> rows;
  rows.reserve(gestures.size() * static_cast<std::size_t>(length));
  for (std::size_t gi = 0; gi < gestures.size(); ++gi) {
    const auto label = GestureLabel::of(static_cast<GestureId>(gestures[gi]));
    for (int r = 0; r < length; ++r) {
      FeatureVector fv;
      fv.label = label;
      fv.subject_id = new_subject_id;
      fv.repetition_index = r;
      fv.synthetic = true;
      fv.values.resize(static_cast<std::size_t>(d));
      for (int f = 0; f < d; ++f) {
        fv.values[static_cast<std::size_t>(f)] = quantizer.dequantize(
            levels_out[gi][static_cast<std::size_t>(f)][static_cast<std::size_t>(r)], f);
      }
      rows.push_back(std::move(fv));
    }
  }
  return rows;
}

void save_generator(const GeneratorModel& model, const std::filesystem::path& path) {
  nlohmann::json j;
  j["levels"] = model.levels;
  j["hidden_dim"] = model.hidden_dim;
  j["config"] = {{"hidden_dim", model.config.hidden_dim},
                 {"epochs", model.config.epochs},
                 {"learning_rate", model.config.learning_rate},
                 {"seed", model.config.seed},
                 {"init_scale", kLstmInitScale}};
  j["final_losses"] = model.final_losses;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : model.cells) {
    nlohmann::json cj;
    cj["input_dim"] = cell.input_dim;
    cj["hidden_dim"] = cell.hidden_dim;
    auto blocks = cell.parameter_blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b) cj[kCellFieldNames[b]] = *blocks[b];
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write generator model: " + path.string());
  out << j.dump() << "\n";
}

GeneratorModel load_generator(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read generator model: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("generator model " + path.string() + ": " + e.what());
  }
  GeneratorModel model;
  model.levels = j.at("levels").get<int>();
  model.hidden_dim = j.at("hidden_dim").get<int>();
  const auto& cfg = j.at("config");
  model.config.hidden_dim = cfg.at("hidden_dim").get<int>();
  model.config.epochs = cfg.at("epochs").get<int>();
  model.config.learning_rate = cfg.at("learning_rate").get<double>();
  model.config.seed = cfg.at("seed").get<std::uint64_t>();
  model.final_losses = j.at("final_losses").get<std::vector<double>>();
  for (const auto& cj : j.at("cells")) {
    LstmCell cell = make_lstm_cell(cj.at("input_dim").get<int>(),
                                   cj.at("hidden_dim").get<int>(), 0);
    auto blocks = cell.parameter_blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      auto values = cj.at(kCellFieldNames[b]).get<std::vector<double>>();
      if (values.size() != blocks[b]->size()) {
        throw FormatError("generator model " + path.string() + ": bad block shape for " +
                          kCellFieldNames[b]);
      }
      *blocks[b] = std::move(values);
    }
    cell.reset_state();
    model.cells.push_back(std::move(cell));
  }
  return model;
}

}  // namespace semg
