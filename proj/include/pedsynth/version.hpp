#pragma once

#include <string_view>

namespace pedsynth {

inline constexpr std::string_view kToolName = "pedsynth";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Bumped whenever the serialized text formats (dataset, prediction,
// manifest, stats report) change incompatibly.
inline constexpr int kFormatVersion = 1;

}  // namespace pedsynth
