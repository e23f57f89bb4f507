#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "semg/gesture.hpp"

namespace semg {

inline constexpr int kChannelCount = 3;
inline constexpr double kDefaultSampleRateHz = 1100.0;
inline constexpr int kDefaultBitDepth = 16;
inline constexpr double kWindowSeconds = 3.0;
inline constexpr int kMinIngestedWindow = 8;

// Raw content of one recording file plus its metadata.
struct Recording {
  int subject_id = 0;
  GestureId gesture_id{};
  std::array<std::vector<double>, kChannelCount> samples;
  double sample_rate_hz = kDefaultSampleRateHz;
  int bit_depth = kDefaultBitDepth;  // metadata only

  // Throws on unequal channel lengths, fewer than 2 samples, or a
  // non-positive sample rate.
  void validate() const;
};

// One observation: a single repetition of a single gesture.
struct Segment {
  GestureLabel label{};
  int subject_id = 0;
  int repetition_index = 0;
  std::array<std::vector<double>, kChannelCount> channel_windows;

  std::size_t window_length() const { return channel_windows[0].size(); }
};

struct SegmentStats {
  std::size_t n = 0;
  std::array<double, kChannelCount> mean{};
  std::array<double, kChannelCount> variance{};  // n-1 denominator
};

// Per-channel mean and variance of a segment's windows. Throws
// DegenerateInputError when the window is shorter than 2 samples.
SegmentStats segment_statistics(const Segment& segment);

// Seeded synthetic corpus mimicking the recording protocol's shape: 3
// channels, 3 s windows at 1.1 kHz, 10 gestures per subject. Each
// gesture/channel pair gets its own AR(2) spectral coloring and amplitude;
// static gestures use a sustained envelope with a small ripple, dynamic
// gestures a Hann-shaped burst over a low-activity floor. Identical
// arguments give bit-identical output.
std::vector<Segment> generate_synthetic_recordings(int n_subjects,
                                                   int reps_per_gesture,
                                                   std::uint64_t seed);

}  // namespace semg
