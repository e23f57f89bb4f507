#pragma once

#include <filesystem>
#include <vector>

#include "semg/features.hpp"

namespace semg {

inline constexpr int kDefaultQuantizerLevels = 20;

// Uniform per-feature grid over the fitted min-max range.
struct QuantizerModel {
  int levels = kDefaultQuantizerLevels;  // L_q
  std::vector<double> min;               // per feature column
  std::vector<double> max;

  int dimension() const { return static_cast<int>(min.size()); }

  // Degenerate zero-width ranges use bin width 1, mapping everything to
  // level 0.
  double bin_width(int feature_index) const;

  // floor((value - min) / w), clamped into [0, levels-1]. Out-of-range
  // inputs clamp; they arise when quantizing held-out subjects.
  int quantize(double value, int feature_index) const;

  // Bin center: min + (level + 0.5) * w.
  double dequantize(int level, int feature_index) const;
};

// Column-wise extrema over the supplied feature vectors.
QuantizerModel fit_quantizer(const std::vector<FeatureVector>& features, int levels);

// Zeros with a single 1 at `level`.
std::vector<double> one_hot(int level, int levels);

// Integer-level time series for one (subject, gesture, feature) key; levels
// follow ascending repetition index.
struct QuantizedSeries {
  int feature_index = 0;
  int subject_id = 0;
  GestureId gesture_id{};
  std::vector<int> levels;
};

// One series per (subject, gesture, feature_index) triple, ordered by
// (subject, gesture, feature_index). Duplicate (subject, gesture,
// repetition) rows are a data error.
std::vector<QuantizedSeries> to_series(const std::vector<FeatureVector>& features,
                                       const QuantizerModel& model);

void save_quantizer(const QuantizerModel& model, const std::filesystem::path& path);
QuantizerModel load_quantizer(const std::filesystem::path& path);

}  // namespace semg
