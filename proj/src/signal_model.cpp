#include "semg/signal_model.hpp"

#include <cmath>
#include <string>

#include "semg/errors.hpp"
#include "semg/rng.hpp"

namespace semg {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr int kBurnIn = 200;
}  // namespace

void Recording::validate() const {
  const std::size_t n = samples[0].size();
  if (n < 2) throw FormatError("recording has fewer than 2 samples");
  for (const auto& ch : samples) {
    if (ch.size() != n) throw FormatError("recording channels have unequal sample counts");
  }
  if (!(sample_rate_hz > 0.0)) throw FormatError("sample_rate_hz must be positive");
}

SegmentStats segment_statistics(const Segment& segment) {
  const std::size_t n = segment.window_length();
  if (n < 2) {
    throw DegenerateInputError("segment_statistics: window length " +
                               std::to_string(n) + " < 2");
  }
  SegmentStats stats;
  stats.n = n;
  for (int c = 0; c < kChannelCount; ++c) {
    const auto& x = segment.channel_windows[static_cast<std::size_t>(c)];
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mu = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mu) * (v - mu);
    stats.mean[static_cast<std::size_t>(c)] = mu;
    stats.variance[static_cast<std::size_t>(c)] = ss / static_cast<double>(n - 1);
  }
  return stats;
}

std::vector<Segment> generate_synthetic_recordings(int n_subjects,
                                                   int reps_per_gesture,
                                                   std::uint64_t seed) {
  if (n_subjects < 1) throw ArgumentError("generate_synthetic_recordings: n_subjects must be >= 1");
  if (reps_per_gesture < 1) throw ArgumentError("generate_synthetic_recordings: reps_per_gesture must be >= 1");

  const int n = static_cast<int>(std::lround(kWindowSeconds * kDefaultSampleRateHz));
  std::vector<Segment> segments;
  segments.reserve(static_cast<std::size_t>(n_subjects) * kGestureCount *
                   static_cast<std::size_t>(reps_per_gesture));

  for (int s = 1; s <= n_subjects; ++s) {
    rng::Stream subject_rng(rng::derive(seed, {0, static_cast<std::uint64_t>(s)}));
    const double subject_gain = subject_rng.uniform(0.8, 1.2);
    const double angle_jitter = subject_rng.uniform(-0.03, 0.03);

    for (int g = 0; g < kGestureCount; ++g) {
      const auto label = GestureLabel::of(static_cast<GestureId>(g));
      for (int r = 0; r < reps_per_gesture; ++r) {
        Segment seg;
        seg.label = label;
        seg.subject_id = s;
        seg.repetition_index = r;
        for (int c = 0; c < kChannelCount; ++c) {
          rng::Stream stream(rng::derive(
              seed, {1, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(g),
                     static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(c)}));

          // Envelope parameters drawn first so the noise stream is stable.
          const double ripple_phase = stream.uniform(0.0, kTwoPi);
          const double burst_center = stream.uniform(0.3, 0.7) * n;
          const double burst_width = stream.uniform(0.35, 0.5) * n;

          // Gesture/channel-specific spectral coloring: complex AR(2) pole
          // pair at radius rho, angle theta.
          const double theta =
              0.25 + 2.2 * static_cast<double>(g) / 9.0 + 0.12 * c + angle_jitter;
          const double rho = 0.62 + 0.03 * static_cast<double>(g);
          const double a1 = 2.0 * rho * std::cos(theta);
          const double a2 = -rho * rho;
          const double amp = (0.9 + 0.06 * (g % kGesturesPerType)) *
                             (1.0 + 0.12 * c) * subject_gain;

          std::vector<double> window(static_cast<std::size_t>(n));
          double y1 = 0.0, y2 = 0.0;
          for (int i = -kBurnIn; i < n; ++i) {
            const double y = a1 * y1 + a2 * y2 + stream.normal();
            y2 = y1;
            y1 = y;
            if (i < 0) continue;
            double env;
            if (label.gesture_type == GestureType::Static) {
              env = 1.0 + 0.05 * std::sin(kTwoPi * 2.0 * i / n + ripple_phase);
            } else {
              const double lo = burst_center - 0.5 * burst_width;
              double burst = 0.0;
              if (i >= lo && i <= lo + burst_width) {
                const double u = std::sin(3.14159265358979323846 * (i - lo) / burst_width);
                burst = u * u;
              }
              env = std::max(0.05, burst);
            }
            window[static_cast<std::size_t>(i)] = amp * env * y;
          }
          seg.channel_windows[static_cast<std::size_t>(c)] = std::move(window);
        }
        segments.push_back(std::move(seg));
      }
    }
  }
  return segments;
}

}  // namespace semg
