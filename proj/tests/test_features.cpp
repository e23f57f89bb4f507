#include <doctest.h>

#include <cmath>
#include <vector>

#include "semg/errors.hpp"
#include "semg/features.hpp"
#include "semg/rng.hpp"
#include "semg/signal_model.hpp"

#include "oracles.hpp"

using semg::FeatureConfig;
using semg::Segment;

namespace {

std::vector<double> random_sequence(semg::rng::Stream& stream, std::size_t n) {
  std::vector<double> x(n);
  for (double& v : x) v = stream.normal() * stream.uniform(0.5, 3.0);
  return x;
}

Segment make_segment(const std::vector<double>& channel) {
  Segment seg;
  seg.label = semg::GestureLabel::of(semg::GestureId::One);
  for (auto& w : seg.channel_windows) w = channel;
  return seg;
}

}  // namespace

TEST_CASE("iav") {
  CHECK(semg::iav(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK(semg::iav(std::vector<double>{1, -2, 3}) == 6.0);
  CHECK(semg::iav(std::vector<double>{-5}) == 5.0);
  CHECK_THROWS_AS(semg::iav(std::vector<double>{}), semg::DegenerateInputError);
}

TEST_CASE("mav") {
  CHECK(semg::mav(std::vector<double>{1, -2, 3}) == 2.0);
  CHECK(semg::mav(std::vector<double>{-4, -4, -4, -4}) == 4.0);
  CHECK(semg::mav(std::vector<double>{0}) == 0.0);
  CHECK_THROWS_AS(semg::mav(std::vector<double>{}), semg::DegenerateInputError);
}

TEST_CASE("std_dev") {
  CHECK(semg::std_dev(std::vector<double>{1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(semg::std_dev(std::vector<double>{7, 7, 7, 7}) == 0.0);
  // two-point closed form |a-b|/sqrt(2)
  CHECK(semg::std_dev(std::vector<double>{2.5, -1.5}) ==
        doctest::Approx(4.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(semg::std_dev(std::vector<double>{1}), semg::DegenerateInputError);
}

TEST_CASE("rms") {
  CHECK(semg::rms(std::vector<double>{3, 4}) ==
        doctest::Approx(std::sqrt(12.5)).epsilon(1e-14));
  CHECK(semg::rms(std::vector<double>{0, 0, 0, 0}) == 0.0);
  CHECK(semg::rms(std::vector<double>{-2.5}) == 2.5);
}

TEST_CASE("waveform_length") {
  CHECK(semg::waveform_length(std::vector<double>{1, 3, 2}) == 3.0);
  CHECK(semg::waveform_length(std::vector<double>{5, 5, 5}) == 0.0);
  CHECK(semg::waveform_length(std::vector<double>{0, 1, 2, 3}) == 3.0);
  CHECK_THROWS_AS(semg::waveform_length(std::vector<double>{1}), semg::DegenerateInputError);
}

TEST_CASE("levinson_durbin order-1 closed form") {
  const auto fit = semg::levinson_durbin(std::vector<double>{1.0, 0.5}, 1);
  CHECK(fit.coefficients.size() == 1);
  CHECK(fit.coefficients[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(fit.prediction_error_variance == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("ar_coefficients recovers an AR(1) process") {
  semg::rng::Stream stream(991);
  std::vector<double> x(10000);
  double prev = 0.0;
  for (double& v : x) {
    v = 0.5 * prev + stream.normal();
    prev = v;
  }
  const auto a = semg::ar_coefficients(x, 1);
  CHECK(std::fabs(a[0] - 0.5) < 0.05);
}

TEST_CASE("ar_coefficients on white noise stays near zero") {
  semg::rng::Stream stream(417);
  std::vector<double> x(10000);
  for (double& v : x) v = stream.normal();
  const auto a = semg::ar_coefficients(x, 4);
  for (double ak : a) CHECK(std::fabs(ak) < 0.05);
}

TEST_CASE("ar_coefficients error paths") {
  CHECK_THROWS_AS(semg::ar_coefficients(std::vector<double>{3, 3, 3, 3}, 2),
                  semg::DegenerateInputError);
  CHECK_THROWS_AS(semg::ar_coefficients(std::vector<double>{1, 2}, 4), semg::ArgumentError);
}

TEST_CASE("exact AR recovery from a consistent Yule-Walker system") {
  // Autocorrelations constructed to satisfy the AR(3) relations exactly for
  // known coefficients, solved here by hand with r_0 = 1:
  //   r_1 = a_1 r_0 + a_2 r_1 + a_3 r_2
  //   r_2 = a_1 r_1 + a_2 r_0 + a_3 r_1
  //   r_3 = a_1 r_2 + a_2 r_1 + a_3 r_0
  const double a1 = 0.9, a2 = -0.5, a3 = 0.2;
  const double r1 = (a1 + a2 * a3) / (1.0 - a2 - a3 * (a1 + a3));
  const double r2 = a2 + (a1 + a3) * r1;
  const double r3 = a1 * r2 + a2 * r1 + a3;
  const std::vector<double> r = {1.0, r1, r2, r3};

  const auto fit = semg::levinson_durbin(r, 3);
  CHECK(std::fabs(fit.coefficients[0] - a1) < 1e-6);
  CHECK(std::fabs(fit.coefficients[1] - a2) < 1e-6);
  CHECK(std::fabs(fit.coefficients[2] - a3) < 1e-6);
}

TEST_CASE("skewness") {
  CHECK(semg::skewness(std::vector<double>{-1, 0, 1}) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(semg::skewness(std::vector<double>{0, 0, 0, 1}) > 0.0);
  const std::vector<double> x = {0.3, -1.2, 2.2, 0.7, -0.4};
  std::vector<double> neg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  CHECK(semg::skewness(neg) == doctest::Approx(-semg::skewness(x)).epsilon(1e-12));
  CHECK_THROWS_AS(semg::skewness(std::vector<double>{2, 2, 2}), semg::DegenerateInputError);
}

TEST_CASE("mobility") {
  CHECK(semg::mobility(std::vector<double>{0, 1, 2, 3}) == 0.0);
  const std::vector<double> alt = {1, -1, 1, -1, 1};
  CHECK(semg::mobility(alt) == doctest::Approx(oracle::mobility(alt)).epsilon(1e-12));
  const std::vector<double> x = {0.1, 0.9, -0.4, 1.7, 0.2, -0.8};
  std::vector<double> scaled(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = -3.7 * x[i];
  CHECK(semg::mobility(scaled) == doctest::Approx(semg::mobility(x)).epsilon(1e-12));
  CHECK_THROWS_AS(semg::mobility(std::vector<double>{4, 4, 4, 4}),
                  semg::DegenerateInputError);
}

TEST_CASE("kurtosis") {
  const std::vector<double> alt = {-1, 1, -1, 1};
  CHECK(semg::kurtosis(alt) == doctest::Approx(oracle::kurtosis(alt)).epsilon(1e-12));
  const std::vector<double> x = {0.4, 1.9, -2.2, 0.3, 1.1};
  std::vector<double> shifted(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] + 123.0;
  CHECK(semg::kurtosis(shifted) == doctest::Approx(semg::kurtosis(x)).epsilon(1e-9));
  semg::rng::Stream stream(5);
  for (int rep = 0; rep < 20; ++rep) {
    const auto r = random_sequence(stream, 64);
    CHECK(semg::kurtosis(r) >= 0.0);
  }
  CHECK_THROWS_AS(semg::kurtosis(std::vector<double>{1, 1}), semg::DegenerateInputError);
}

TEST_CASE("amplitude features scale linearly, shape features are scale invariant") {
  semg::rng::Stream stream(77);
  for (int rep = 0; rep < 25; ++rep) {
    const auto x = random_sequence(stream, 128);
    const double c = stream.uniform(0.1, 8.0) * (rep % 2 == 0 ? 1.0 : -1.0);
    std::vector<double> cx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) cx[i] = c * x[i];
    const double ac = std::fabs(c);
    CHECK(oracle::relative_error(semg::iav(cx), ac * semg::iav(x)) < 1e-12);
    CHECK(oracle::relative_error(semg::mav(cx), ac * semg::mav(x)) < 1e-12);
    CHECK(oracle::relative_error(semg::std_dev(cx), ac * semg::std_dev(x)) < 1e-12);
    CHECK(oracle::relative_error(semg::rms(cx), ac * semg::rms(x)) < 1e-12);
    CHECK(oracle::relative_error(semg::waveform_length(cx),
                                 ac * semg::waveform_length(x)) < 1e-12);
    if (c > 0.0) {
      CHECK(oracle::relative_error(semg::skewness(cx), semg::skewness(x)) < 1e-9);
    }
    CHECK(oracle::relative_error(semg::mobility(cx), semg::mobility(x)) < 1e-9);
    CHECK(oracle::relative_error(semg::kurtosis(cx), semg::kurtosis(x)) < 1e-9);
  }
}

TEST_CASE("mav times n equals iav exactly and rms squared matches the sum") {
  semg::rng::Stream stream(31);
  for (int rep = 0; rep < 50; ++rep) {
    const auto x = random_sequence(stream, 8 + static_cast<std::size_t>(stream.below(500)));
    const double n = static_cast<double>(x.size());
    CHECK(semg::mav(x) * n == semg::iav(x));
    double ss = 0.0;
    for (double v : x) ss += v * v;
    CHECK(oracle::relative_error(semg::rms(x) * semg::rms(x) * n, ss) < 1e-12);
  }
}

TEST_CASE("every feature matches the naive oracle on random sequences") {
  semg::rng::Stream stream(2024);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 8 + static_cast<std::size_t>(stream.below(1017));
    const auto x = random_sequence(stream, n);
    CHECK(oracle::relative_error(semg::iav(x), oracle::iav(x)) < 1e-10);
    CHECK(oracle::relative_error(semg::mav(x), oracle::mav(x)) < 1e-10);
    CHECK(oracle::relative_error(semg::std_dev(x), oracle::std_dev(x)) < 1e-10);
    CHECK(oracle::relative_error(semg::rms(x), oracle::rms(x)) < 1e-10);
    CHECK(oracle::relative_error(semg::waveform_length(x), oracle::waveform_length(x)) <
          1e-10);
    CHECK(oracle::relative_error(semg::skewness(x), oracle::skewness(x)) < 1e-10);
    CHECK(oracle::relative_error(semg::mobility(x), oracle::mobility(x)) < 1e-10);
    CHECK(oracle::relative_error(semg::kurtosis(x), oracle::kurtosis(x)) < 1e-10);
    const auto a = semg::ar_coefficients(x, 4);
    const auto a_ref = oracle::ar_coefficients(x, 4);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(oracle::relative_error(a[k], a_ref[k]) < 1e-10);
    }
  }
}

TEST_CASE("extract dimensions and metadata") {
  semg::rng::Stream stream(88);
  const auto window = random_sequence(stream, 64);
  auto seg = make_segment(window);
  seg.subject_id = 3;
  seg.repetition_index = 7;

  FeatureConfig p4;
  const auto fv = semg::extract(seg, p4);
  CHECK(fv.values.size() == 36);
  CHECK(fv.subject_id == 3);
  CHECK(fv.repetition_index == 7);
  CHECK_FALSE(fv.synthetic);
  for (double v : fv.values) CHECK(std::isfinite(v));

  FeatureConfig p1;
  p1.ar_order = 1;
  CHECK(semg::extract(seg, p1).values.size() == 27);
}

TEST_CASE("extract names the failing channel and feature") {
  semg::rng::Stream stream(12);
  auto seg = make_segment(random_sequence(stream, 32));
  seg.channel_windows[1].assign(32, 0.0);  // constant channel
  FeatureConfig config;
  try {
    semg::extract(seg, config);
    FAIL("expected DegenerateInputError");
  } catch (const semg::DegenerateInputError& e) {
    const std::string what = e.what();
    CHECK(what.find("channel 2") != std::string::npos);
  }
}

TEST_CASE("extract keeps channel blocks in canonical order") {
  semg::rng::Stream stream(55);
  Segment seg;
  seg.label = semg::GestureLabel::of(semg::GestureId::Win);
  for (auto& w : seg.channel_windows) w = random_sequence(stream, 96);
  FeatureConfig config;
  const auto fv = semg::extract(seg, config);
  const int per = config.per_channel_dimension();
  for (int c = 0; c < 3; ++c) {
    const auto& w = seg.channel_windows[static_cast<std::size_t>(c)];
    const std::size_t base = static_cast<std::size_t>(c * per);
    CHECK(fv.values[base] == semg::iav(w));
    CHECK(fv.values[base + 1] == semg::mav(w));
    CHECK(fv.values[base + 2] == semg::std_dev(w));
    CHECK(fv.values[base + 3] == semg::rms(w));
    CHECK(fv.values[base + 4] == semg::waveform_length(w));
    CHECK(fv.values[base + static_cast<std::size_t>(per) - 3] == semg::skewness(w));
    CHECK(fv.values[base + static_cast<std::size_t>(per) - 2] == semg::mobility(w));
    CHECK(fv.values[base + static_cast<std::size_t>(per) - 1] == semg::kurtosis(w));
  }
}
