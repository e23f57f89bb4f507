#include "semg/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

#include <json.hpp>

#include "semg/errors.hpp"

namespace semg {

double QuantizerModel::bin_width(int feature_index) const {
  const auto j = static_cast<std::size_t>(feature_index);
  const double range = max[j] - min[j];
  return range > 0.0 ? range / static_cast<double>(levels) : 1.0;
}

int QuantizerModel::quantize(double value, int feature_index) const {
  if (feature_index < 0 || feature_index >= dimension()) {
    throw ArgumentError("quantize: feature_index out of range");
  }
  const auto j = static_cast<std::size_t>(feature_index);
  const double w = bin_width(feature_index);
  const int level = static_cast<int>(std::floor((value - min[j]) / w));
  return std::clamp(level, 0, levels - 1);
}

double QuantizerModel::dequantize(int level, int feature_index) const {
  if (feature_index < 0 || feature_index >= dimension()) {
    throw ArgumentError("dequantize: feature_index out of range");
  }
  if (level < 0 || level >= levels) {
    throw ArgumentError("dequantize: level " + std::to_string(level) +
                        " outside [0, " + std::to_string(levels - 1) + "]");
  }
  const auto j = static_cast<std::size_t>(feature_index);
  return min[j] + (static_cast<double>(level) + 0.5) * bin_width(feature_index);
}

QuantizerModel fit_quantizer(const std::vector<FeatureVector>& features, int levels) {
  if (features.empty()) throw ArgumentError("fit_quantizer: empty feature list");
  if (levels < 2) throw ArgumentError("fit_quantizer: levels must be >= 2");

  const std::size_t d = features.front().values.size();
  QuantizerModel model;
  model.levels = levels;
  model.min.assign(d, 0.0);
  model.max.assign(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    model.min[j] = model.max[j] = features.front().values[j];
  }
  for (const auto& fv : features) {
    if (fv.values.size() != d) {
      throw DataError("fit_quantizer: inconsistent feature dimensions");
    }
    for (std::size_t j = 0; j < d; ++j) {
      model.min[j] = std::min(model.min[j], fv.values[j]);
      model.max[j] = std::max(model.max[j], fv.values[j]);
    }
  }
  return model;
}

std::vector<double> one_hot(int level, int levels) {
  if (level < 0 || level >= levels) {
    throw ArgumentError("one_hot: level " + std::to_string(level) +
                        " outside [0, " + std::to_string(levels - 1) + "]");
  }
  std::vector<double> v(static_cast<std::size_t>(levels), 0.0);
  v[static_cast<std::size_t>(level)] = 1.0;
  return v;
}

std::vector<QuantizedSeries> to_series(const std::vector<FeatureVector>& features,
                                       const QuantizerModel& model) {
  if (features.empty()) throw ArgumentError("to_series: empty feature list");

  // (subject, gesture) -> repetition -> row
  std::map<std::pair<int, int>, std::map<int, const FeatureVector*>> groups;
  for (const auto& fv : features) {
    auto key = std::make_pair(fv.subject_id, static_cast<int>(fv.label.gesture_id));
    auto [it, inserted] = groups[key].emplace(fv.repetition_index, &fv);
    if (!inserted) {
      throw DataError("to_series: duplicate (subject " + std::to_string(fv.subject_id) +
                      ", gesture " + gesture_name(fv.label.gesture_id) + ", repetition " +
                      std::to_string(fv.repetition_index) + ")");
    }
  }

  const int d = model.dimension();
  std::vector<QuantizedSeries> series;
  series.reserve(groups.size() * static_cast<std::size_t>(d));
  for (const auto& [key, reps] : groups) {
    for (int j = 0; j < d; ++j) {
      QuantizedSeries qs;
      qs.feature_index = j;
      qs.subject_id = key.first;
      qs.gesture_id = static_cast<GestureId>(key.second);
      qs.levels.reserve(reps.size());
      for (const auto& [rep, fv] : reps) {
        qs.levels.push_back(model.quantize(fv->values[static_cast<std::size_t>(j)], j));
      }
      series.push_back(std::move(qs));
    }
  }
  return series;
}

void save_quantizer(const QuantizerModel& model, const std::filesystem::path& path) {
  nlohmann::json j;
  j["levels"] = model.levels;
  j["min"] = model.min;
  j["max"] = model.max;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write quantizer model: " + path.string());
  out << j.dump(2) << "\n";
}

QuantizerModel load_quantizer(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read quantizer model: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("quantizer model " + path.string() + ": " + e.what());
  }
  QuantizerModel model;
  model.levels = j.at("levels").get<int>();
  model.min = j.at("min").get<std::vector<double>>();
  model.max = j.at("max").get<std::vector<double>>();
  if (model.levels < 2 || model.min.size() != model.max.size()) {
    throw FormatError("quantizer model " + path.string() + ": invalid contents");
  }
  return model;
}

}  // namespace semg
