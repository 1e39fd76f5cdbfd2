#pragma once

/**
 * @file dataset_io.hpp
 * @brief Text formats for annotation and prediction files.
 *
 * Dataset file: UTF-8 text, one record per line, tab-separated fields
 *     frame_id  ped_id  x  y
 * The parser additionally accepts runs of spaces/tabs between fields and a
 * trailing carriage return. frame_id and ped_id may be written with a
 * decimal point (as the public benchmark files do) but must hold integral
 * values. Positions are meters in a world frame, top-down view.
 *
 * Prediction file: same conventions with fields
 *     frame_id  ped_id  sample_id  x  y
 * where for every (frame_id, ped_id) the sample ids are exactly 0..J-1 for
 * one global J.
 *
 * Writers emit integers in decimal and doubles in the shortest decimal
 * form that parses back to the identical bit pattern (std::to_chars), so
 * write -> parse is an exact round trip and golden files are stable.
 */

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pedsynth/types.hpp"

namespace pedsynth {

namespace detail {

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double value) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

inline bool parse_double(std::string_view token, double& out) {
  const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  return res.ec == std::errc{} && res.ptr == token.data() + token.size();
}

/// Splits a line on runs of spaces/tabs, dropping a trailing '\r'.
inline std::vector<std::string_view> split_fields(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

inline std::int64_t parse_id_field(std::string_view token, const char* name,
                                   std::size_t line_no) {
  double value = 0.0;
  if (!parse_double(token, value) || !std::isfinite(value))
    throw ParseError("line " + std::to_string(line_no) + ": non-numeric " + name +
                     " '" + std::string(token) + "'");
  if (value != std::floor(value) || std::abs(value) > 0x1p53)
    throw ParseError("line " + std::to_string(line_no) + ": " + name +
                     " must be an integral value, got '" + std::string(token) + "'");
  if (value < 0.0)
    throw ParseError("line " + std::to_string(line_no) + ": " + name +
                     " must be >= 0, got '" + std::string(token) + "'");
  return static_cast<std::int64_t>(value);
}

inline double parse_coordinate(std::string_view token, const char* name,
                               std::size_t line_no) {
  double value = 0.0;
  if (!parse_double(token, value))
    throw ParseError("line " + std::to_string(line_no) + ": non-numeric " + name +
                     " '" + std::string(token) + "'");
  if (!std::isfinite(value))
    throw ParseError("line " + std::to_string(line_no) + ": " + name +
                     " must be finite, got '" + std::string(token) + "'");
  return value;
}

}  // namespace detail

/// Output of parse_dataset: the dataset plus parse-time warnings.
struct ParsedDataset {
  SceneDataset dataset;
  std::size_t short_tracks_dropped = 0;  ///< tracks with < 2 records, excluded
};

/**
 * Parses an annotation stream. Records are canonically sorted by
 * (frame_id, ped_id), so parsing is insensitive to input line order.
 * frame_stride is inferred as the GCD of all within-pedestrian frame gaps
 * and every gap must then equal it (a larger gap means a hole in that
 * pedestrian's track). Tracks with fewer than 2 records are dropped and
 * counted. An empty stream yields an empty dataset with the default
 * stride.
 */
inline ParsedDataset parse_dataset(std::istream& in, double dt = 0.4) {
  if (dt <= 0.0) throw DomainError("parse_dataset: dt must be > 0");
  ParsedDataset result;
  result.dataset.dt = dt;

  std::vector<AnnotationRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 4)
      throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields, got " +
                       std::to_string(fields.size()));
    AnnotationRecord rec;
    rec.frame_id = detail::parse_id_field(fields[0], "frame_id", line_no);
    rec.ped_id = detail::parse_id_field(fields[1], "ped_id", line_no);
    rec.position.x = detail::parse_coordinate(fields[2], "x", line_no);
    rec.position.y = detail::parse_coordinate(fields[3], "y", line_no);
    records.push_back(rec);
  }

  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.frame_id, a.ped_id) < std::tie(b.frame_id, b.ped_id);
  });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].frame_id == records[i - 1].frame_id &&
        records[i].ped_id == records[i - 1].ped_id)
      throw StructureError("duplicate record for frame " +
                           std::to_string(records[i].frame_id) + ", pedestrian " +
                           std::to_string(records[i].ped_id));
  }

  // Per-pedestrian frame lists (already ascending thanks to the sort).
  std::map<std::int64_t, std::vector<std::int64_t>> frames_by_ped;
  for (const AnnotationRecord& rec : records)
    frames_by_ped[rec.ped_id].push_back(rec.frame_id);

  std::int64_t stride_gcd = 0;
  for (const auto& [ped, frames] : frames_by_ped) {
    if (frames.size() < 2) {
      ++result.short_tracks_dropped;
      continue;
    }
    for (std::size_t i = 1; i < frames.size(); ++i)
      stride_gcd = std::gcd(stride_gcd, frames[i] - frames[i - 1]);
  }
  if (stride_gcd > 0) {
    for (const auto& [ped, frames] : frames_by_ped) {
      if (frames.size() < 2) continue;
      for (std::size_t i = 1; i < frames.size(); ++i) {
        const std::int64_t gap = frames[i] - frames[i - 1];
        if (gap != stride_gcd)
          throw StructureError("pedestrian " + std::to_string(ped) +
                               " has a frame gap of " + std::to_string(gap) +
                               ", inconsistent with the inferred stride " +
                               std::to_string(stride_gcd));
      }
    }
    result.dataset.frame_stride = stride_gcd;
  }

  result.dataset.records.reserve(records.size());
  for (AnnotationRecord& rec : records)
    if (frames_by_ped[rec.ped_id].size() >= 2)
      result.dataset.records.push_back(rec);
  return result;
}

/// Serializes a dataset, one record per line sorted by (frame_id, ped_id).
/// parse_dataset(write_dataset(d)) reproduces d field-exactly.
inline void write_dataset(const SceneDataset& data, std::ostream& out) {
  for (const AnnotationRecord& rec : data.records) {
    out << rec.frame_id << '\t' << rec.ped_id << '\t'
        << detail::format_double(rec.position.x) << '\t'
        << detail::format_double(rec.position.y) << '\n';
  }
  if (!out) throw IoError("write_dataset: stream write failed");
}

/**
 * Parses a prediction stream into a PredictionSet (without ground truth).
 * Enforces one global J: for every (frame_id, ped_id) the sample ids must
 * be exactly 0..J-1. Tracks are ordered by ped_id, frames ascending;
 * horizon is set to the longest track.
 */
inline PredictionSet parse_predictions(std::istream& in) {
  struct Cell {
    std::map<std::int64_t, Vec2> by_sample;
  };
  std::map<std::int64_t, std::map<std::int64_t, Cell>> by_ped_frame;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = detail::split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != 5)
      throw ParseError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                       std::to_string(fields.size()));
    const std::int64_t frame = detail::parse_id_field(fields[0], "frame_id", line_no);
    const std::int64_t ped = detail::parse_id_field(fields[1], "ped_id", line_no);
    const std::int64_t sample = detail::parse_id_field(fields[2], "sample_id", line_no);
    Vec2 pos;
    pos.x = detail::parse_coordinate(fields[3], "x", line_no);
    pos.y = detail::parse_coordinate(fields[4], "y", line_no);
    auto [it, inserted] = by_ped_frame[ped][frame].by_sample.emplace(sample, pos);
    if (!inserted)
      throw StructureError("duplicate sample " + std::to_string(sample) + " for frame " +
                           std::to_string(frame) + ", pedestrian " + std::to_string(ped));
  }

  PredictionSet set;
  std::int64_t expected_j = -1;
  for (const auto& [ped, frames] : by_ped_frame) {
    PredictionSet::Track track;
    track.ped_id = ped;
    for (const auto& [frame, cell] : frames) {
      const std::int64_t j = static_cast<std::int64_t>(cell.by_sample.size());
      // Sample ids are unique map keys, so ids being exactly 0..J-1 is
      // equivalent to min == 0 and max == J-1.
      if (cell.by_sample.begin()->first != 0 || cell.by_sample.rbegin()->first != j - 1)
        throw StructureError("frame " + std::to_string(frame) + ", pedestrian " +
                             std::to_string(ped) + ": sample ids are not contiguous from 0");
      if (expected_j < 0) expected_j = j;
      if (j != expected_j)
        throw StructureError("frame " + std::to_string(frame) + ", pedestrian " +
                             std::to_string(ped) + ": has " + std::to_string(j) +
                             " samples, expected " + std::to_string(expected_j));
      track.frames.push_back(frame);
      std::vector<Vec2> samples;
      samples.reserve(cell.by_sample.size());
      for (const auto& [sid, pos] : cell.by_sample) samples.push_back(pos);
      track.samples.push_back(std::move(samples));
    }
    set.tracks.push_back(std::move(track));
  }
  set.samples_per_point = expected_j < 0 ? 0 : static_cast<int>(expected_j);
  for (const auto& track : set.tracks)
    set.horizon = std::max(set.horizon, static_cast<int>(track.frames.size()));
  return set;
}

/// Serializes predictions, lines sorted by (frame_id, ped_id, sample_id).
inline void write_predictions(const PredictionSet& set, std::ostream& out) {
  struct Line {
    std::int64_t frame, ped, sample;
    Vec2 pos;
  };
  std::vector<Line> lines;
  for (const auto& track : set.tracks)
    for (std::size_t t = 0; t < track.frames.size(); ++t)
      for (std::size_t j = 0; j < track.samples[t].size(); ++j)
        lines.push_back({track.frames[t], track.ped_id,
                         static_cast<std::int64_t>(j), track.samples[t][j]});
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    return std::tie(a.frame, a.ped, a.sample) < std::tie(b.frame, b.ped, b.sample);
  });
  for (const Line& l : lines) {
    out << l.frame << '\t' << l.ped << '\t' << l.sample << '\t'
        << detail::format_double(l.pos.x) << '\t'
        << detail::format_double(l.pos.y) << '\n';
  }
  if (!out) throw IoError("write_predictions: stream write failed");
}

// File-path conveniences.

inline ParsedDataset load_dataset(const std::string& path, double dt = 0.4) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);
  return parse_dataset(in, dt);
}

inline void save_dataset(const SceneDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  write_dataset(data, out);
}

inline PredictionSet load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open prediction file: " + path);
  return parse_predictions(in);
}

inline void save_predictions(const PredictionSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  write_predictions(set, out);
}

}  // namespace pedsynth
