#pragma once

/// Left-truncated normal sampling: draws from N(mean, var) conditioned on
/// the value being >= 0.

#include <cmath>
#include <cstdint>
#include <string>

#include "pedsynth/rng.hpp"
#include "pedsynth/types.hpp"

namespace pedsynth {

/// Rejection attempts before the tail is declared degenerate. At
/// mean = -4 sigma acceptance is ~3e-5, still comfortably inside the cap;
/// around -6 sigma the cap triggers.
inline constexpr int kTruncatedNormalMaxRejects = 1'000'000;

/**
 * Draws from N(mean, var) conditioned on the result being >= 0, by
 * rejection. var == 0 collapses to the point mass at `mean` and consumes
 * no engine output.
 *
 * Throws DomainError for var < 0 or for the empty support case
 * (var == 0 with mean < 0), and NumericError when rejection exceeds the
 * iteration cap, which signals a numerically degenerate left tail.
 */
inline double sample_truncated_normal(double mean, double var, Rng& rng) {
  if (!(var >= 0.0)) throw DomainError("truncated normal: variance must be >= 0");
  if (var == 0.0) {
    if (mean < 0.0)
      throw DomainError("truncated normal: zero variance with negative mean has empty support");
    return mean;
  }
  const double stddev = std::sqrt(var);
  for (int i = 0; i < kTruncatedNormalMaxRejects; ++i) {
    const double draw = rng.normal(mean, stddev);
    if (draw >= 0.0) return draw;
  }
  throw NumericError(
      "truncated normal: no acceptance after " +
      std::to_string(kTruncatedNormalMaxRejects) +
      " rejections; the mass above zero is numerically degenerate (mean " +
      std::to_string(mean) + ", stddev " + std::to_string(stddev) + ")");
}

}  // namespace pedsynth
