#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "pedsynth/rng.hpp"
#include "pedsynth/truncated_normal.hpp"

using namespace pedsynth;
using Catch::Matchers::WithinAbs;

namespace {

struct Moments {
  double mean;
  double stddev;
};

Moments empirical_moments(double mu, double var, int draws, std::uint64_t seed) {
  Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = sample_truncated_normal(mu, var, rng);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / draws;
  return {mean, std::sqrt(sum_sq / draws - mean * mean)};
}

}  // namespace

TEST_CASE("zero variance collapses to the mean") {
  Rng rng(1);
  CHECK(sample_truncated_normal(1.0, 0.0, rng) == 1.0);
  CHECK(sample_truncated_normal(0.0, 0.0, rng) == 0.0);
  CHECK_THROWS_AS(sample_truncated_normal(-0.5, 0.0, rng), DomainError);
  CHECK_THROWS_AS(sample_truncated_normal(1.0, -1.0, rng), DomainError);
}

TEST_CASE("draws are never negative") {
  Rng rng(2);
  for (int i = 0; i < 10000; ++i)
    REQUIRE(sample_truncated_normal(-0.5, 1.0, rng) >= 0.0);
}

TEST_CASE("half-normal moments match the closed form") {
  // mu = 0 truncated at 0 is the half normal: mean sqrt(2/pi),
  // sd sqrt(1 - 2/pi).
  const auto m = empirical_moments(0.0, 1.0, 1'000'000, 42);
  CHECK_THAT(m.mean, WithinAbs(std::sqrt(2.0 / std::numbers::pi), 0.01));
  CHECK_THAT(m.stddev, WithinAbs(std::sqrt(1.0 - 2.0 / std::numbers::pi), 0.01));
}

TEST_CASE("negligible truncation keeps the untruncated moments") {
  const auto m = empirical_moments(5.0, 0.01, 1'000'000, 43);
  CHECK_THAT(m.mean, WithinAbs(5.0, 0.001));
  CHECK_THAT(m.stddev, WithinAbs(0.1, 0.001));
}

TEST_CASE("heavily truncated draws match the hazard-function moments") {
  const double mu = -1.0, sigma = 0.8;
  const auto want = oracle::truncated_normal_moments(mu, sigma);
  const auto got = empirical_moments(mu, sigma * sigma, 400'000, 44);
  CHECK_THAT(got.mean, WithinAbs(want.mean, 0.005));
  CHECK_THAT(got.stddev, WithinAbs(std::sqrt(want.var), 0.005));
}

TEST_CASE("a numerically empty tail raises after the rejection cap") {
  Rng rng(3);
  CHECK_THROWS_AS(sample_truncated_normal(-10.0, 1.0, rng), NumericError);
}
