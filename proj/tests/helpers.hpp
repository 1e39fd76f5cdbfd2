#pragma once

// Shared fixtures for the test suite: temp files, subprocess capture and
// small dataset builders.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "pedsynth/types.hpp"

namespace testutil {

inline std::filesystem::path temp_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("pedsynth_tests_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

inline std::string temp_path(const std::string& name) {
  return (temp_dir() / name).string();
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

/// Runs a shell command, capturing combined output.
inline RunResult run_command(const std::string& command) {
  RunResult result;
  FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = ::fread(buf.data(), 1, buf.size(), pipe)) > 0)
    result.output.append(buf.data(), n);
  const int status = ::pclose(pipe);
  result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return result;
}

/// Path of the CLI binary under test, provided by ctest via environment.
inline std::string cli_path() {
  if (const char* env = std::getenv("PEDSYNTH_BIN")) return env;
  return "./tools/pedsynth";
}

/// A two-pedestrian toy scene with hand-computable statistics:
/// ped 1 over frames 0..20, ped 2 over frames 10..40, stride 10.
/// Speeds: ped 1 {1.0, 1.25} (mean 1.125), ped 2 {1.0, 1.25, 1.25}
/// (mean 7/6); pooled variance 7/288; frame counts [1,2,2,1,1].
inline std::string toy_scene_text() {
  return "0\t1\t0\t0\n"
         "10\t1\t0.4\t0\n"
         "20\t1\t0.8\t0.3\n"
         "10\t2\t2\t2\n"
         "20\t2\t2\t2.4\n"
         "30\t2\t2.3\t2.8\n"
         "40\t2\t2.3\t3.3\n";
}

/// A long straight track: `steps+1` positions advancing `speed*dt` along x
/// per step. Useful wherever exact constant-velocity walks are needed.
inline pedsynth::SceneDataset straight_dataset(int steps, double speed = 1.0,
                                               double dt = 0.4,
                                               std::int64_t stride = 10) {
  pedsynth::SceneDataset data;
  data.dt = dt;
  data.frame_stride = stride;
  for (int i = 0; i <= steps; ++i) {
    pedsynth::AnnotationRecord rec;
    rec.frame_id = stride * i;
    rec.ped_id = 1;
    rec.position = {speed * dt * i, 0.0};
    data.records.push_back(rec);
  }
  return data;
}

}  // namespace testutil
