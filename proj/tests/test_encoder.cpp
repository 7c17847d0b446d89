#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>
#include <random>

#include "memsnn/encoder.hpp"

using namespace memsnn;

TEST_CASE("waveform is a triangle with unit-area closed form") {
  SpikeTrain tr;
  tr.onsets = {2e-6, SpikeTrain::kNoSpike};
  CHECK(tr.waveform_at(0, 0.0) == 0.0);
  CHECK(tr.waveform_at(0, 2e-6) == 0.0);
  CHECK(tr.waveform_at(0, 3e-6) == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(tr.waveform_at(0, 2.5e-6) == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(tr.waveform_at(0, 3.5e-6) == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(tr.waveform_at(0, 4e-6) == 0.0);
  CHECK(tr.waveform_at(0, 5e-6) == 0.0);
  CHECK(tr.waveform_at(1, 3e-6) == 0.0);  // silent row

  // Numeric integral vs (rise + fall)/2 * amplitude.
  double area = 0.0;
  const double dt = 1e-9;
  for (double t = 0.0; t < 6e-6; t += dt) area += tr.waveform_at(0, t) * dt;
  CHECK(area == doctest::Approx(1.1e-6).epsilon(1e-3));
}

TEST_CASE("threshold crossing times") {
  SpikeTrain tr;
  tr.onsets = {2e-6, SpikeTrain::kNoSpike};
  CHECK(tr.threshold_time(0, 1.1) == doctest::Approx(3e-6).epsilon(1e-12));
  CHECK(tr.threshold_time(0, 0.55) == doctest::Approx(2.5e-6).epsilon(1e-12));
  CHECK(std::isinf(tr.threshold_time(0, 1.2)));
  CHECK(std::isinf(tr.threshold_time(1, 0.5)));
  CHECK(tr.last_support_end() == doctest::Approx(4e-6).epsilon(1e-12));
}

TEST_CASE("min-max scaling endpoints, interior, clamping") {
  const std::vector<double> mins = {0.0, 10.0};
  const std::vector<double> maxs = {4.0, 20.0};
  const double T = 1e-3;
  auto s = minmax_scale({0.0, 10.0}, mins, maxs, T);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == 0.0);
  s = minmax_scale({4.0, 20.0}, mins, maxs, T);
  CHECK(s[0] == doctest::Approx(T).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(T).epsilon(1e-12));
  s = minmax_scale({1.0, 15.0}, mins, maxs, T);
  CHECK(s[0] == doctest::Approx(0.25 * T).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(0.5 * T).epsilon(1e-12));
  s = minmax_scale({-5.0, 100.0}, mins, maxs, T);  // outside fitted range
  CHECK(s[0] == 0.0);
  CHECK(s[1] == doctest::Approx(T).epsilon(1e-12));
}

TEST_CASE("degenerate feature column maps to mid window") {
  const auto s = minmax_scale({3.0}, {3.0}, {3.0}, 1e-3);
  CHECK(s[0] == doctest::Approx(0.5e-3).epsilon(1e-12));
}

TEST_CASE("receptive field responses match the closed form") {
  GrfConfig g;  // n2 = 3, beta = 1.5
  const double T = 1e-3;
  auto r = grf_expand({0.0}, g, T);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(0.00032465246735834976).epsilon(1e-12));
  CHECK(r[2] == doctest::Approx(1.1108996538242306e-05).epsilon(1e-12));
  r = grf_expand({0.2 * T}, g, T);
  CHECK(r[0] == doctest::Approx(0.000835270211411272).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(0.0006669768108584744).epsilon(1e-12));
  CHECK(r[2] == doctest::Approx(5.6134762834133726e-05).epsilon(1e-12));
  r = grf_expand({0.5 * T}, g, T);
  CHECK(r[0] == doctest::Approx(0.00032465246735834976).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(r[2] == doctest::Approx(0.00032465246735834976).epsilon(1e-12));
  GrfConfig bad;
  bad.n2 = 1;
  CHECK_THROWS_AS(grf_expand({0.0}, bad, T), std::invalid_argument);
}

TEST_CASE("stronger response spikes earlier") {
  SpikeShape shape;
  const double T = 1e-3;
  const SpikeTrain tr = encode_temporal({0.0, T, 0.25 * T}, shape, T);
  CHECK(tr.onsets[0] == doctest::Approx(T).epsilon(1e-12));
  CHECK(tr.onsets[1] == 0.0);
  CHECK(tr.onsets[2] == doctest::Approx(0.75 * T).epsilon(1e-12));
}

TEST_CASE("pattern encoding: black leads white by the configured delay") {
  SpikeShape shape;
  const double T = 1e-3, lead = 5e-4;
  const SpikeTrain tr = encode_pattern({1, 0, 1}, lead, 0.0, shape, T);
  CHECK(tr.onsets[0] == 0.0);
  CHECK(tr.onsets[1] == doctest::Approx(lead).epsilon(1e-12));
  CHECK(tr.onsets[2] == 0.0);
  CHECK_THROWS_AS(encode_pattern({1}, 1.1e-3, 0.0, shape, T),
                  std::invalid_argument);
}

TEST_CASE("pixel flips: exact count, distinct positions, deterministic") {
  std::vector<uint8_t> bits(15, 0);
  for (size_t i = 0; i < bits.size(); i += 2) bits[i] = 1;
  std::mt19937_64 rng(123);
  const auto noisy = flip_noise(bits, 2.0 / 15, rng);
  size_t diff = 0;
  for (size_t i = 0; i < bits.size(); ++i) diff += bits[i] != noisy[i];
  CHECK(diff == 2);

  std::mt19937_64 a(5), b(5);
  CHECK(flip_noise(bits, 0.2, a) == flip_noise(bits, 0.2, b));

  std::mt19937_64 c(9);
  CHECK(flip_noise(bits, 0.0, c) == bits);
  const auto all = flip_noise(bits, 1.0, c);
  for (size_t i = 0; i < bits.size(); ++i) CHECK(all[i] == (1 - bits[i]));

  CHECK_THROWS_AS(flip_noise(bits, -0.1, c), std::invalid_argument);
  CHECK_THROWS_AS(flip_noise(bits, 1.5, c), std::invalid_argument);
}
