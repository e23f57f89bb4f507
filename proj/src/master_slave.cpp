#include "semg/master_slave.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "semg/errors.hpp"
#include "semg/rng.hpp"

namespace semg {

namespace {

// Tags for deriving per-network init seeds from one cell seed; the same
// seed therefore yields matched initializations across synthetic states.
constexpr std::uint64_t kMasterTag = 0;
constexpr std::uint64_t kSlaveStaticTag = 1;
constexpr std::uint64_t kSlaveDynamicTag = 2;
constexpr std::uint64_t kConventionalTag = 3;

const std::array<std::string, 2> kArchNames = {"master_slave", "conventional"};

std::vector<FeatureVector> rows_of_type(const std::vector<FeatureVector>& rows,
                                        GestureType type) {
  std::vector<FeatureVector> out;
  for (const auto& fv : rows) {
    if (fv.label.gesture_type == type) out.push_back(fv);
  }
  return out;
}

void require_type_coverage(const std::vector<FeatureVector>& rows) {
  for (GestureType type : {GestureType::Static, GestureType::Dynamic}) {
    const bool found = std::any_of(rows.begin(), rows.end(), [&](const FeatureVector& fv) {
      return fv.label.gesture_type == type;
    });
    if (!found) {
      throw DataError("training set has no " + gesture_type_name(type) + " examples");
    }
  }
}

void require_gesture_coverage(const std::vector<FeatureVector>& rows, GestureType type) {
  const int base = type == GestureType::Static ? 0 : kGesturesPerType;
  for (int g = base; g < base + kGesturesPerType; ++g) {
    const auto id = static_cast<GestureId>(g);
    const bool found = std::any_of(rows.begin(), rows.end(), [&](const FeatureVector& fv) {
      return fv.label.gesture_id == id;
    });
    if (!found) {
      throw DataError("training set has no examples of gesture " + gesture_name(id));
    }
  }
}

void require_all_gestures(const std::vector<FeatureVector>& rows) {
  require_gesture_coverage(rows, GestureType::Static);
  require_gesture_coverage(rows, GestureType::Dynamic);
}

}  // namespace

FeatureScaler FeatureScaler::fit(const std::vector<FeatureVector>& rows) {
  if (rows.empty()) throw ArgumentError("FeatureScaler: empty training set");
  const std::size_t d = rows.front().values.size();
  FeatureScaler scaler;
  scaler.mean.assign(d, 0.0);
  scaler.stddev.assign(d, 0.0);
  for (const auto& fv : rows) {
    if (fv.values.size() != d) throw DataError("FeatureScaler: inconsistent dimensions");
    for (std::size_t j = 0; j < d; ++j) scaler.mean[j] += fv.values[j];
  }
  for (double& m : scaler.mean) m /= static_cast<double>(rows.size());
  if (rows.size() > 1) {
    for (const auto& fv : rows) {
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = fv.values[j] - scaler.mean[j];
        scaler.stddev[j] += diff * diff;
      }
    }
    for (double& s : scaler.stddev) {
      s = std::sqrt(s / static_cast<double>(rows.size() - 1));
    }
  }
  for (double& s : scaler.stddev) {
    if (s == 0.0) s = 1.0;
  }
  return scaler;
}

std::vector<double> FeatureScaler::apply(std::span<const double> values) const {
  if (values.size() != mean.size()) {
    throw ArgumentError("FeatureScaler: input length " + std::to_string(values.size()) +
                        " != fitted dimension " + std::to_string(mean.size()));
  }
  std::vector<double> out(values.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = (values[j] - mean[j]) / stddev[j];
  }
  return out;
}

const std::string& arch_name(Arch arch) {
  return kArchNames[static_cast<std::size_t>(arch)];
}

Arch arch_from_name(const std::string& name) {
  if (name == kArchNames[0]) return Arch::MasterSlave;
  if (name == kArchNames[1]) return Arch::Conventional;
  throw FormatError("unknown architecture name: '" + name + "'");
}

int master_class_of(const FeatureVector& fv) {
  return static_cast<int>(fv.label.gesture_type);
}

int slave_class_of(const FeatureVector& fv) {
  const int g = static_cast<int>(fv.label.gesture_id);
  return fv.label.gesture_type == GestureType::Static ? g : g - kGesturesPerType;
}

GestureId slave_gesture(GestureType type, int index) {
  if (index < 0 || index >= kGesturesPerType) {
    throw ArgumentError("slave_gesture: index outside [0, 4]");
  }
  const int base = type == GestureType::Static ? 0 : kGesturesPerType;
  return static_cast<GestureId>(base + index);
}

int conventional_class_of(const FeatureVector& fv) {
  return static_cast<int>(fv.label.gesture_id);
}

std::pair<MasterSlaveModel, MasterSlaveReports> train_master_slave(
    const std::vector<FeatureVector>& train, const TrainConfig& config,
    const std::vector<FeatureVector>* monitor) {
  config.validate();
  if (train.empty()) throw ArgumentError("train_master_slave: empty training set");
  require_type_coverage(train);
  require_all_gestures(train);

  MasterSlaveModel model;
  model.scaler = FeatureScaler::fit(train);
  const int d = static_cast<int>(train.front().values.size());

  const auto static_rows = rows_of_type(train, GestureType::Static);
  const auto dynamic_rows = rows_of_type(train, GestureType::Dynamic);

  MasterSlaveReports reports;
  auto train_one = [&](Network& net, TrainingReport& report, const char* name,
                       std::uint64_t tag, const std::vector<FeatureVector>& rows,
                       int output_dim, auto&& class_of,
                       const std::vector<FeatureVector>& monitor_rows) {
    net = init_weights(standard_topology(d, output_dim), rng::derive(config.seed, {tag}));
    const auto data = build_matrix(rows, model.scaler, output_dim, class_of);
    LabeledMatrix mon;
    if (!monitor_rows.empty()) {
      mon = build_matrix(monitor_rows, model.scaler, output_dim, class_of);
    }
    report = semg::train(net, data, config, monitor_rows.empty() ? nullptr : &mon);
    report.network_name = name;
  };

  const std::vector<FeatureVector> no_monitor;
  const auto& mon_all = monitor != nullptr ? *monitor : no_monitor;
  const auto mon_static = rows_of_type(mon_all, GestureType::Static);
  const auto mon_dynamic = rows_of_type(mon_all, GestureType::Dynamic);

  train_one(model.master, reports.master, "master", kMasterTag, train, 2,
            master_class_of, mon_all);
  train_one(model.slave_static, reports.slave_static, "slave_static", kSlaveStaticTag,
            static_rows, kGesturesPerType, slave_class_of, mon_static);
  train_one(model.slave_dynamic, reports.slave_dynamic, "slave_dynamic", kSlaveDynamicTag,
            dynamic_rows, kGesturesPerType, slave_class_of, mon_dynamic);
  return {std::move(model), std::move(reports)};
}

std::pair<ConventionalModel, TrainingReport> train_conventional(
    const std::vector<FeatureVector>& train, const TrainConfig& config,
    const std::vector<FeatureVector>* monitor) {
  config.validate();
  if (train.empty()) throw ArgumentError("train_conventional: empty training set");
  require_all_gestures(train);

  ConventionalModel model;
  model.scaler = FeatureScaler::fit(train);
  const int d = static_cast<int>(train.front().values.size());
  model.net = init_weights(standard_topology(d, kGestureCount),
                           rng::derive(config.seed, {kConventionalTag}));
  const auto data = build_matrix(train, model.scaler, kGestureCount, conventional_class_of);
  LabeledMatrix mon;
  const bool has_monitor = monitor != nullptr && !monitor->empty();
  if (has_monitor) {
    mon = build_matrix(*monitor, model.scaler, kGestureCount, conventional_class_of);
  }
  auto report = semg::train(model.net, data, config, has_monitor ? &mon : nullptr);
  report.network_name = "conventional";
  return {std::move(model), std::move(report)};
}

SequentialPrediction predict_sequential(const MasterSlaveModel& model,
                                        std::span<const double> input) {
  const auto scaled = model.scaler.apply(input);
  SequentialPrediction pred;
  auto master = predict(model.master, scaled);
  pred.master_type = static_cast<GestureType>(master.class_index);
  pred.master_output = std::move(master.output);
  const Network& slave = pred.master_type == GestureType::Static ? model.slave_static
                                                                 : model.slave_dynamic;
  auto routed = predict(slave, scaled);
  pred.gesture = slave_gesture(pred.master_type, routed.class_index);
  pred.slave_output = std::move(routed.output);
  return pred;
}

GestureId predict_conventional(const ConventionalModel& model,
                               std::span<const double> input) {
  const auto scaled = model.scaler.apply(input);
  return static_cast<GestureId>(predict(model.net, scaled).class_index);
}

EvaluationRow evaluate(const MasterSlaveModel& model,
                       const std::vector<FeatureVector>& test) {
  if (test.empty()) throw ArgumentError("evaluate: empty test set");
  std::size_t master_correct = 0, slave_correct = 0, e2e_correct = 0;
  for (const auto& fv : test) {
    const auto scaled = model.scaler.apply(fv.values);
    const auto master = predict(model.master, scaled);
    const bool master_ok =
        static_cast<GestureType>(master.class_index) == fv.label.gesture_type;

    const Network& true_slave = fv.label.gesture_type == GestureType::Static
                                    ? model.slave_static
                                    : model.slave_dynamic;
    const auto slave = predict(true_slave, scaled);
    const bool slave_ok =
        slave_gesture(fv.label.gesture_type, slave.class_index) == fv.label.gesture_id;

    const auto seq = predict_sequential(model, fv.values);
    const bool e2e_ok = seq.gesture == fv.label.gesture_id;

    // Routing identity, checked exhaustively.
    if (e2e_ok != (master_ok && slave_ok)) {
      throw std::logic_error("evaluate: routing identity violated");
    }
    master_correct += master_ok ? 1 : 0;
    slave_correct += slave_ok ? 1 : 0;
    e2e_correct += e2e_ok ? 1 : 0;
  }
  const double denom = static_cast<double>(test.size());
  EvaluationRow row;
  row.master_ca = 100.0 * static_cast<double>(master_correct) / denom;
  row.slave_ca = 100.0 * static_cast<double>(slave_correct) / denom;
  row.end_to_end_ca = 100.0 * static_cast<double>(e2e_correct) / denom;
  return row;
}

EvaluationRow evaluate(const ConventionalModel& model,
                       const std::vector<FeatureVector>& test) {
  if (test.empty()) throw ArgumentError("evaluate: empty test set");
  std::size_t correct = 0;
  for (const auto& fv : test) {
    if (predict_conventional(model, fv.values) == fv.label.gesture_id) ++correct;
  }
  EvaluationRow row;
  row.arch = Arch::Conventional;
  row.end_to_end_ca = 100.0 * static_cast<double>(correct) / static_cast<double>(test.size());
  return row;
}

}  // namespace semg
