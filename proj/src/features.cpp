#include "semg/features.hpp"

#include <algorithm>
#include <cmath>

#include "semg/errors.hpp"

namespace semg {

namespace {

void require_length(std::span<const double> x, std::size_t min_n, const char* op) {
  if (x.size() < min_n) {
    throw DegenerateInputError(std::string(op) + ": input length " +
                               std::to_string(x.size()) + " < " + std::to_string(min_n));
  }
}

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// n-1 denominator throughout.
double variance_of(std::span<const double> x) {
  const double mu = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - mu) * (v - mu);
  return ss / static_cast<double>(x.size() - 1);
}

bool is_constant(std::span<const double> x) {
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *lo == *hi;
}

}  // namespace

double iav(std::span<const double> x) {
  require_length(x, 1, "iav");
  double s = 0.0;
  for (double v : x) s += std::fabs(v);
  return s;
}

double mav(std::span<const double> x) {
  require_length(x, 1, "mav");
  return iav(x) / static_cast<double>(x.size());
}

double std_dev(std::span<const double> x) {
  require_length(x, 2, "std_dev");
  return std::sqrt(variance_of(x));
}

double rms(std::span<const double> x) {
  require_length(x, 1, "rms");
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

double waveform_length(std::span<const double> x) {
  require_length(x, 2, "waveform_length");
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) s += std::fabs(x[k + 1] - x[k]);
  return s;
}

std::vector<double> autocorrelation(std::span<const double> x, int max_lag) {
  require_length(x, static_cast<std::size_t>(max_lag) + 1, "autocorrelation");
  const std::size_t n = x.size();
  const double mu = mean_of(x);
  std::vector<double> r(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (int k = 0; k <= max_lag; ++k) {
    double s = 0.0;
    for (std::size_t i = static_cast<std::size_t>(k); i < n; ++i) {
      s += (x[i] - mu) * (x[i - static_cast<std::size_t>(k)] - mu);
    }
    r[static_cast<std::size_t>(k)] = s / static_cast<double>(n);
  }
  return r;
}

ArFit levinson_durbin(std::span<const double> autocorr, int p) {
  if (p < 1) throw ArgumentError("levinson_durbin: order must be >= 1");
  if (autocorr.size() < static_cast<std::size_t>(p) + 1) {
    throw ArgumentError("levinson_durbin: need autocorrelations r_0..r_p");
  }
  if (!(autocorr[0] > 0.0)) {
    throw DegenerateInputError("levinson_durbin: r_0 must be positive");
  }

  std::vector<double> a(static_cast<std::size_t>(p) + 1, 0.0);
  std::vector<double> prev(a);
  double err = autocorr[0];
  for (int m = 1; m <= p; ++m) {
    double acc = autocorr[static_cast<std::size_t>(m)];
    for (int j = 1; j < m; ++j) {
      acc -= a[static_cast<std::size_t>(j)] * autocorr[static_cast<std::size_t>(m - j)];
    }
    const double k = acc / err;
    prev = a;
    for (int j = 1; j < m; ++j) {
      a[static_cast<std::size_t>(j)] =
          prev[static_cast<std::size_t>(j)] - k * prev[static_cast<std::size_t>(m - j)];
    }
    a[static_cast<std::size_t>(m)] = k;
    err *= (1.0 - k * k);
  }

  ArFit fit;
  fit.coefficients.assign(a.begin() + 1, a.end());
  fit.prediction_error_variance = err;
  return fit;
}

std::vector<double> ar_coefficients(std::span<const double> x, int p) {
  if (p < 1) throw ArgumentError("ar_coefficients: order must be >= 1");
  if (x.size() < static_cast<std::size_t>(p) + 1) {
    throw ArgumentError("ar_coefficients: order " + std::to_string(p) +
                        " requires at least " + std::to_string(p + 1) + " samples");
  }
  if (is_constant(x)) {
    throw DegenerateInputError("ar_coefficients: constant input (r_0 = 0)");
  }
  const auto r = autocorrelation(x, p);
  return levinson_durbin(r, p).coefficients;
}

double skewness(std::span<const double> x) {
  require_length(x, 2, "skewness");
  const double sigma = std_dev(x);
  if (sigma == 0.0 || is_constant(x)) {
    throw DegenerateInputError("skewness: zero standard deviation");
  }
  const double mu = mean_of(x);
  double m3 = 0.0;
  for (double v : x) {
    const double d = v - mu;
    m3 += d * d * d;
  }
  m3 /= static_cast<double>(x.size());
  return m3 / (sigma * sigma * sigma);
}

double mobility(std::span<const double> x) {
  require_length(x, 3, "mobility");
  if (is_constant(x)) throw DegenerateInputError("mobility: zero variance");
  std::vector<double> d(x.size() - 1);
  for (std::size_t k = 0; k + 1 < x.size(); ++k) d[k] = x[k + 1] - x[k];
  return variance_of(d) / variance_of(x);
}

double kurtosis(std::span<const double> x) {
  require_length(x, 2, "kurtosis");
  const double sigma = std_dev(x);
  if (sigma == 0.0 || is_constant(x)) {
    throw DegenerateInputError("kurtosis: zero standard deviation");
  }
  const double mu = mean_of(x);
  double m4 = 0.0;
  for (double v : x) {
    const double d = v - mu;
    m4 += d * d * d * d;
  }
  m4 /= static_cast<double>(x.size());
  return m4 / (sigma * sigma * sigma * sigma);
}

FeatureVector extract(const Segment& segment, const FeatureConfig& config) {
  FeatureVector fv;
  fv.label = segment.label;
  fv.subject_id = segment.subject_id;
  fv.repetition_index = segment.repetition_index;
  fv.synthetic = false;
  fv.values.reserve(static_cast<std::size_t>(config.dimension()));

  for (int c = 0; c < kChannelCount; ++c) {
    const auto& w = segment.channel_windows[static_cast<std::size_t>(c)];
    const std::span<const double> x(w);
    auto guarded = [&](const char* feature, auto&& fn) {
      try {
        return fn();
      } catch (const DegenerateInputError& e) {
        throw DegenerateInputError("channel " + std::to_string(c + 1) + " " +
                                   feature + ": " + e.what());
      }
    };
    fv.values.push_back(guarded("iav", [&] { return iav(x); }));
    fv.values.push_back(guarded("mav", [&] { return mav(x); }));
    fv.values.push_back(guarded("std_dev", [&] { return std_dev(x); }));
    fv.values.push_back(guarded("rms", [&] { return rms(x); }));
    fv.values.push_back(guarded("waveform_length", [&] { return waveform_length(x); }));
    const auto ar = guarded("ar_coefficients",
                            [&] { return ar_coefficients(x, config.ar_order); });
    fv.values.insert(fv.values.end(), ar.begin(), ar.end());
    fv.values.push_back(guarded("skewness", [&] { return skewness(x); }));
    fv.values.push_back(guarded("mobility", [&] { return mobility(x); }));
    fv.values.push_back(guarded("kurtosis", [&] { return kurtosis(x); }));
  }
  return fv;
}

std::vector<std::string> feature_column_names(const FeatureConfig& config) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(config.dimension()));
  for (int j = 1; j <= config.dimension(); ++j) names.push_back("f" + std::to_string(j));
  return names;
}

}  // namespace semg
