#include <doctest.h>

#include <set>
#include <tuple>

#include "semg/errors.hpp"
#include "semg/signal_model.hpp"

using semg::GestureId;
using semg::GestureType;
using semg::Segment;

TEST_CASE("gesture names and types") {
  CHECK(semg::gesture_name(GestureId::One) == "One");
  CHECK(semg::gesture_name(GestureId::Confident) == "Confident");
  CHECK(semg::gesture_from_name("Win") == GestureId::Win);
  CHECK_THROWS_AS(semg::gesture_from_name("win"), semg::FormatError);

  int n_static = 0, n_dynamic = 0;
  for (int g = 0; g < semg::kGestureCount; ++g) {
    const auto type = semg::gesture_type(static_cast<GestureId>(g));
    (type == GestureType::Static ? n_static : n_dynamic)++;
  }
  CHECK(n_static == 5);
  CHECK(n_dynamic == 5);
  CHECK(semg::gesture_type(GestureId::Five) == GestureType::Static);
  CHECK(semg::gesture_type(GestureId::Sorry) == GestureType::Dynamic);
}

TEST_CASE("segment_statistics") {
  Segment seg;
  seg.label = semg::GestureLabel::of(GestureId::Two);

  SUBCASE("simple window") {
    for (auto& w : seg.channel_windows) w = {1, 2, 3};
    const auto stats = semg::segment_statistics(seg);
    CHECK(stats.n == 3);
    for (int c = 0; c < 3; ++c) {
      CHECK(stats.mean[static_cast<std::size_t>(c)] == doctest::Approx(2.0));
      CHECK(stats.variance[static_cast<std::size_t>(c)] == doctest::Approx(1.0));
    }
  }
  SUBCASE("constant window") {
    for (auto& w : seg.channel_windows) w = {5, 5, 5, 5};
    const auto stats = semg::segment_statistics(seg);
    CHECK(stats.mean[0] == 5.0);
    CHECK(stats.variance[0] == 0.0);
  }
  SUBCASE("zero window") {
    for (auto& w : seg.channel_windows) w = {0, 0};
    const auto stats = semg::segment_statistics(seg);
    CHECK(stats.mean[0] == 0.0);
    CHECK(stats.variance[0] == 0.0);
  }
  SUBCASE("too short") {
    for (auto& w : seg.channel_windows) w = {1};
    CHECK_THROWS_AS(semg::segment_statistics(seg), semg::DegenerateInputError);
  }
}

TEST_CASE("generator counting and window shape") {
  const auto small = semg::generate_synthetic_recordings(1, 1, 42);
  CHECK(small.size() == 10);
  const std::size_t expected_window = 3300;  // round(3.0 s * 1100 Hz)
  for (const auto& seg : small) {
    for (const auto& w : seg.channel_windows) CHECK(w.size() == expected_window);
  }

  const auto big = semg::generate_synthetic_recordings(4, 20, 7);
  CHECK(big.size() == 800);
  std::set<std::tuple<int, int, int>> keys;
  for (const auto& seg : big) {
    keys.insert({seg.subject_id, static_cast<int>(seg.label.gesture_id),
                 seg.repetition_index});
  }
  CHECK(keys.size() == 800);
}

TEST_CASE("generator is a pure function of its arguments") {
  const auto a = semg::generate_synthetic_recordings(2, 3, 99);
  const auto b = semg::generate_synthetic_recordings(2, 3, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const auto& wa = a[i].channel_windows[static_cast<std::size_t>(c)];
      const auto& wb = b[i].channel_windows[static_cast<std::size_t>(c)];
      REQUIRE(wa == wb);  // bit-identical
    }
  }
  const auto other = semg::generate_synthetic_recordings(2, 3, 100);
  CHECK(other[0].channel_windows[0] != a[0].channel_windows[0]);
}

TEST_CASE("generator argument validation") {
  CHECK_THROWS_AS(semg::generate_synthetic_recordings(0, 5, 1), semg::ArgumentError);
  CHECK_THROWS_AS(semg::generate_synthetic_recordings(2, 0, 1), semg::ArgumentError);
}

TEST_CASE("static windows are sustained, dynamic windows are bursty") {
  // The dynamic envelope concentrates energy; its peak-to-mean ratio of
  // squared amplitude should clearly exceed the static one.
  const auto segs = semg::generate_synthetic_recordings(1, 2, 11);
  auto peak_to_mean = [](const std::vector<double>& w) {
    double peak = 0.0, mean = 0.0;
    for (double v : w) {
      peak = std::max(peak, v * v);
      mean += v * v;
    }
    mean /= static_cast<double>(w.size());
    return peak / mean;
  };
  double static_max = 0.0, dynamic_min = 1e300;
  for (const auto& seg : segs) {
    const double ratio = peak_to_mean(seg.channel_windows[0]);
    if (seg.label.gesture_type == GestureType::Static) {
      static_max = std::max(static_max, ratio);
    } else {
      dynamic_min = std::min(dynamic_min, ratio);
    }
  }
  CHECK(dynamic_min > static_max);
}
