#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semg/dnn.hpp"
#include "semg/features.hpp"

namespace semg {

// Per-column standardization fitted on a training set. Sigmoid layers need
// inputs on a common scale; raw feature columns span several orders of
// magnitude (IAV grows with the window, AR coefficients do not).
struct FeatureScaler {
  std::vector<double> mean;
  std::vector<double> stddev;  // zero-variance columns fall back to 1

  static FeatureScaler fit(const std::vector<FeatureVector>& rows);
  std::vector<double> apply(std::span<const double> values) const;
};

enum class Arch { MasterSlave, Conventional };

const std::string& arch_name(Arch arch);
Arch arch_from_name(const std::string& name);

// Binary static/dynamic master routing to one of two 5-class slaves. All
// three networks share the input dimension and the scaler.
struct MasterSlaveModel {
  FeatureScaler scaler;
  Network master;         // K = 2, Static / Dynamic
  Network slave_static;   // K = 5 over One..Five
  Network slave_dynamic;  // K = 5 over Sorry..Win
};

struct ConventionalModel {
  FeatureScaler scaler;
  Network net;  // K = 10
};

struct MasterSlaveReports {
  TrainingReport master;
  TrainingReport slave_static;
  TrainingReport slave_dynamic;
};

// Class index maps (bijective onto the gesture sets).
int master_class_of(const FeatureVector& fv);
int slave_class_of(const FeatureVector& fv);         // within its type, 0..4
GestureId slave_gesture(GestureType type, int index);
int conventional_class_of(const FeatureVector& fv);  // 0..9

// Builds the scaled m x d / m x K matrices for one network.
template <typename ClassOf>
LabeledMatrix build_matrix(const std::vector<FeatureVector>& rows,
                           const FeatureScaler& scaler, int output_dim,
                           ClassOf&& class_of) {
  LabeledMatrix m;
  m.rows = rows.size();
  m.input_dim = rows.empty() ? 0 : static_cast<int>(rows.front().values.size());
  m.output_dim = output_dim;
  m.inputs.reserve(m.rows * static_cast<std::size_t>(m.input_dim));
  m.targets.assign(m.rows * static_cast<std::size_t>(output_dim), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto scaled = scaler.apply(rows[i].values);
    m.inputs.insert(m.inputs.end(), scaled.begin(), scaled.end());
    m.targets[i * static_cast<std::size_t>(output_dim) +
              static_cast<std::size_t>(class_of(rows[i]))] = 1.0;
  }
  return m;
}

// Master on all rows with binary type targets; each slave only on its
// type's rows. Requires every gesture type in the training set and every
// gesture of a type for that type's slave. monitor rows, when given, feed
// the per-iteration test accuracy column.
std::pair<MasterSlaveModel, MasterSlaveReports> train_master_slave(
    const std::vector<FeatureVector>& train, const TrainConfig& config,
    const std::vector<FeatureVector>* monitor = nullptr);

// Single flat 10-class network with the same topology rules.
std::pair<ConventionalModel, TrainingReport> train_conventional(
    const std::vector<FeatureVector>& train, const TrainConfig& config,
    const std::vector<FeatureVector>* monitor = nullptr);

struct SequentialPrediction {
  GestureId gesture{};
  GestureType master_type{};
  std::vector<double> master_output;
  std::vector<double> slave_output;
};

// Master picks the type; only that type's slave is evaluated.
SequentialPrediction predict_sequential(const MasterSlaveModel& model,
                                        std::span<const double> input);

GestureId predict_conventional(const ConventionalModel& model,
                               std::span<const double> input);

struct EvaluationRow {
  int subject_id = 0;
  Arch arch = Arch::MasterSlave;
  bool with_synthetic = false;
  std::optional<double> master_ca;  // percent
  std::optional<double> slave_ca;   // true-type slave, isolating slave quality
  double end_to_end_ca = 0.0;       // percent
};

// Accuracy fields only; identity fields are the caller's. Verifies the
// routing identity (end-to-end correct == master correct AND true-type
// slave correct) on every row.
EvaluationRow evaluate(const MasterSlaveModel& model,
                       const std::vector<FeatureVector>& test);
EvaluationRow evaluate(const ConventionalModel& model,
                       const std::vector<FeatureVector>& test);

}  // namespace semg
