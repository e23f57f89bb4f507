#pragma once

#include <span>
#include <string>
#include <vector>

#include "semg/signal_model.hpp"

namespace semg {

struct FeatureConfig {
  int ar_order = 4;  // p

  int per_channel_dimension() const { return 8 + ar_order; }
  int dimension() const { return kChannelCount * per_channel_dimension(); }
};

// Per-segment feature row: the canonical per-channel ordering is
// [IAV, MAV, SD, RMS, WL, AR_1..AR_p, Skew, Mobility, Kurtosis],
// concatenated channel 1, channel 2, channel 3.
struct FeatureVector {
  std::vector<double> values;
  GestureLabel label{};
  int subject_id = 0;
  int repetition_index = 0;
  bool synthetic = false;
};

// Sum of absolute sample values.
double iav(std::span<const double> x);

// Mean of absolute sample values; mav(x) * n == iav(x) exactly.
double mav(std::span<const double> x);

// Square root of the n-1 variance.
double std_dev(std::span<const double> x);

double rms(std::span<const double> x);

// Sum of absolute first differences.
double waveform_length(std::span<const double> x);

// Mean-removed biased autocorrelation r_0..r_max_lag (1/n normalization).
std::vector<double> autocorrelation(std::span<const double> x, int max_lag);

struct ArFit {
  std::vector<double> coefficients;  // a_1..a_p, prediction convention
  double prediction_error_variance = 0.0;
};

// Levinson-Durbin on autocorrelations r_0..r_p. Coefficients satisfy the
// prediction form x_hat[n] = sum_k a_k x[n-k]; order 1 gives a_1 = r_1/r_0.
ArFit levinson_durbin(std::span<const double> autocorr, int p);

// Yule-Walker AR(p) estimate on the centered, biased autocorrelation of x.
std::vector<double> ar_coefficients(std::span<const double> x, int p);

// mean((x-mu)^3) / sigma^3 with sigma from std_dev; the expectation is the
// 1/n sample mean.
double skewness(std::span<const double> x);

// var(diff(x)) / var(x), both with the n-1 denominator. No square root.
double mobility(std::span<const double> x);

// mean((x-mu)^4) / sigma^4.
double kurtosis(std::span<const double> x);

// Computes the full feature row for a segment. Degenerate-input failures
// carry the channel and feature name.
FeatureVector extract(const Segment& segment, const FeatureConfig& config);

// Column names f1..fd for the feature-table CSV.
std::vector<std::string> feature_column_names(const FeatureConfig& config);

}  // namespace semg
