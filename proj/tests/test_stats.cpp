#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "vibrodiag/rng.hpp"
#include "vibrodiag/stats.hpp"
#include "vibrodiag/synth.hpp"

using namespace vibrodiag;
using Catch::Approx;

TEST_CASE("describe: tiny symmetric input") {
  const std::vector<double> x = {1.0, 2.0, 3.0};
  const auto s = describe(x);
  CHECK(s.count == 3);
  CHECK(s.mean == Approx(2.0));
  CHECK(s.q50 == Approx(2.0));
  CHECK(s.min == 1.0);
  CHECK(s.max == 3.0);
  CHECK(s.std == Approx(1.0));
}

TEST_CASE("describe: interpolated quartiles") {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  const auto s = describe(x);
  CHECK(s.q25 == Approx(1.75));
  CHECK(s.q75 == Approx(3.25));
  CHECK(s.q50 == Approx(2.5));
}

TEST_CASE("describe: rejects fewer than 2 samples") {
  CHECK_THROWS_AS(describe(std::vector<double>{1.0}), InsufficientDataError);
  CHECK_THROWS_AS(describe(std::vector<double>{}), InsufficientDataError);
}

TEST_CASE("describe: recovers the generator std on a large sample") {
  // 10^6 draws at the vibration-channel std of the mid-life state.
  ChannelStats stats;
  stats.mean = -0.0015;
  stats.std = 0.2209;
  stats.min = -1.0;
  stats.q25 = -0.15;
  stats.q50 = 0.0;
  stats.q75 = 0.15;
  stats.max = 1.0;
  Rng rng(11);
  const auto frame =
      synth_frame(stats, Channel::vibration, 1u << 20, kDefaultSampleRate, std::nullopt, rng);
  const auto s = describe(frame.samples);
  CHECK(std::abs(s.std - 0.2209) / 0.2209 < 0.01);
}

TEST_CASE("acf: lag zero is exactly one") {
  Rng rng(3);
  std::vector<double> x(257);
  for (auto& v : x) v = rng.normal();
  const auto series = acf(x, 40);
  CHECK(series.values[0] == 1.0);
}

TEST_CASE("acf: alternating signal at lag one") {
  std::vector<double> x(8);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i % 2 == 0) ? 1.0 : -1.0;
  const auto series = acf(x, 1);
  CHECK(series.values[1] == Approx(-0.875).margin(1e-15));
}

TEST_CASE("acf: matches the double-loop oracle at every lag") {
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(128);
    for (auto& v : x) v = rng.normal(0.3, 1.7);
    const std::size_t max_lag = x.size() - 2;
    const auto mine = acf(x, max_lag);
    const auto ref = oracles::naive_acf(x, max_lag);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
      REQUIRE(std::abs(mine.values[lag] - ref[lag]) <= 1e-12);
    }
  }
}

TEST_CASE("acf: bounded by one in magnitude") {
  Rng rng(23);
  std::vector<double> x(300);
  for (auto& v : x) v = rng.uniform(-2.0, 2.0);
  const auto series = acf(x, x.size() - 2);
  for (double v : series.values) CHECK(std::abs(v) <= 1.0 + 1e-9);
}

TEST_CASE("acf: error paths") {
  const std::vector<double> constant(32, 1.25);
  CHECK_THROWS_AS(acf(constant, 4), DegenerateSignalError);
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS(acf(x, 3), ParameterError);  // max_lag > n-2
  CHECK_NOTHROW(acf(x, 2));
}

TEST_CASE("histogram: counts and edges") {
  const std::vector<double> x = {0.0, 0.5, 1.0, 1.5, 2.0};
  const auto bins = histogram(x, 2);
  REQUIRE(bins.size() == 2);
  CHECK(bins[0].left == 0.0);
  CHECK(bins[1].right == 2.0);
  CHECK(bins[0].count + bins[1].count == x.size());
  CHECK(bins[0].count == 2);  // 0.0, 0.5
  CHECK(bins[1].count == 3);  // 1.0, 1.5, 2.0 (max lands in the last bin)
}
