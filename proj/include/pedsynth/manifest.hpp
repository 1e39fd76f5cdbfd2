#pragma once

/**
 * @file manifest.hpp
 * @brief Run manifests: a small key=value text file written next to each
 *        produced output, recording the tool version, the fully resolved
 *        configuration, the seed and digests of all inputs and outputs.
 *        Re-running the tool with the recorded configuration reproduces
 *        the outputs bit for bit.
 */

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pedsynth/types.hpp"
#include "pedsynth/version.hpp"

namespace pedsynth {

/// FNV-1a 64-bit digest. Not cryptographic; serves to detect that a file
/// changed between runs.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

inline std::uint64_t file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for digest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return fnv1a64(buf.str());
}

struct RunManifest {
  std::string subcommand;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::vector<std::pair<std::string, std::string>> config;  ///< resolved flags
  std::vector<std::pair<std::string, std::uint64_t>> inputs;
  std::vector<std::pair<std::string, std::uint64_t>> outputs;

  void add_config(std::string key, std::string value) {
    config.emplace_back(std::move(key), std::move(value));
  }

  void add_input(const std::string& path) { inputs.emplace_back(path, file_digest(path)); }

  void add_output(const std::string& path) { outputs.emplace_back(path, file_digest(path)); }

  std::string to_string() const {
    std::ostringstream out;
    out << "manifest_version=" << kFormatVersion << '\n';
    out << "tool=" << kToolName << ' ' << kToolVersion << '\n';
    out << "subcommand=" << subcommand << '\n';
    if (has_seed) out << "seed=" << seed << '\n';
    for (const auto& [key, value] : config) out << "config." << key << '=' << value << '\n';
    for (const auto& [path, digest] : inputs)
      out << "input." << path << "=fnv1a64:" << digest << '\n';
    for (const auto& [path, digest] : outputs)
      out << "output." << path << "=fnv1a64:" << digest << '\n';
    return out.str();
  }
};

/// Writes the manifest next to `output_path` as "<output_path>.manifest".
inline std::string write_manifest(const RunManifest& manifest,
                                  const std::string& output_path) {
  const std::string path = output_path + ".manifest";
  std::ofstream out(path);
  if (!out) throw IoError("cannot open manifest file: " + path);
  out << manifest.to_string();
  if (!out) throw IoError("manifest write failed: " + path);
  return path;
}

}  // namespace pedsynth
