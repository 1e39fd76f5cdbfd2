#include <catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include "helpers.hpp"
#include "pedsynth/dataset_io.hpp"
#include "pedsynth/rng.hpp"

using namespace pedsynth;

namespace {

ParsedDataset parse_text(const std::string& text, double dt = 0.4) {
  std::istringstream in(text);
  return parse_dataset(in, dt);
}

std::string write_text(const SceneDataset& data) {
  std::ostringstream out;
  write_dataset(data, out);
  return out.str();
}

/// Valid random dataset: every pedestrian gets >= 2 gapless observations
/// on a common stride.
SceneDataset random_dataset(Rng& rng, std::int64_t stride) {
  SceneDataset data;
  data.frame_stride = stride;
  const int peds = 1 + static_cast<int>(rng.uniform_index(8));
  for (int p = 1; p <= peds; ++p) {
    const std::int64_t start = static_cast<std::int64_t>(rng.uniform_index(20)) * stride;
    const int len = 2 + static_cast<int>(rng.uniform_index(10));
    for (int i = 0; i < len; ++i) {
      AnnotationRecord rec;
      rec.frame_id = start + i * stride;
      rec.ped_id = p;
      rec.position = {rng.uniform_range(-50.0, 50.0), rng.uniform_range(-50.0, 50.0)};
      data.records.push_back(rec);
    }
  }
  std::sort(data.records.begin(), data.records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.frame_id, a.ped_id) < std::tie(b.frame_id, b.ped_id);
  });
  return data;
}

}  // namespace

TEST_CASE("parse_dataset handles a minimal two-record track") {
  const ParsedDataset parsed = parse_text("0\t1\t0.0\t0.0\n10\t1\t0.4\t0.0", 0.4);
  const auto trajs = parsed.dataset.trajectories();
  REQUIRE(trajs.size() == 1);
  CHECK(trajs[0].ped_id == 1);
  CHECK(trajs[0].positions.size() == 2);
  CHECK(parsed.dataset.frame_stride == 10);
  CHECK(parsed.short_tracks_dropped == 0);
}

TEST_CASE("parse_dataset of an empty stream yields an empty dataset") {
  const ParsedDataset parsed = parse_text("");
  CHECK(parsed.dataset.records.empty());
  CHECK(parsed.dataset.trajectories().empty());
  CHECK_THROWS_AS(parse_text("", 0.0), DomainError);
}

TEST_CASE("parse_dataset groups a hand-written two-pedestrian file") {
  // 5 records: ped 1 gets three timesteps, ped 2 two.
  const std::string text =
      "0 1 0.0 0.0\n"
      "10 1 1.0 0.0\n"
      "20 1 2.0 0.0\n"
      "10 2 5.0 5.0\n"
      "20 2 5.0 6.0\n";
  const ParsedDataset parsed = parse_text(text);
  const auto trajs = parsed.dataset.trajectories();
  REQUIRE(trajs.size() == 2);
  CHECK(trajs[0].ped_id == 1);
  CHECK(trajs[0].positions.size() == 3);
  CHECK(trajs[1].ped_id == 2);
  CHECK(trajs[1].positions.size() == 2);
}

TEST_CASE("parse_dataset accepts benchmark-style float ids and CRLF") {
  const ParsedDataset parsed = parse_text("840.0\t3.0\t8.46\t3.59\r\n850.0\t3.0\t8.0\t3.5\r\n");
  REQUIRE(parsed.dataset.records.size() == 2);
  CHECK(parsed.dataset.records[0].frame_id == 840);
  CHECK(parsed.dataset.records[0].ped_id == 3);
}

TEST_CASE("parse_dataset drops and counts short tracks") {
  const std::string text =
      "0\t1\t0\t0\n10\t1\t1\t0\n"
      "0\t7\t9\t9\n";  // ped 7 has a single record
  const ParsedDataset parsed = parse_text(text);
  CHECK(parsed.short_tracks_dropped == 1);
  CHECK(parsed.dataset.trajectories().size() == 1);
}

TEST_CASE("parse_dataset rejects malformed input") {
  CHECK_THROWS_AS(parse_text("0\t1\t0.0\n"), ParseError);           // 3 fields
  CHECK_THROWS_AS(parse_text("0\t1\t0.0\t0.0\t9\n"), ParseError);   // 5 fields
  CHECK_THROWS_AS(parse_text("0\tone\t0.0\t0.0\n"), ParseError);    // non-numeric id
  CHECK_THROWS_AS(parse_text("0.5\t1\t0.0\t0.0\n"), ParseError);    // fractional frame
  CHECK_THROWS_AS(parse_text("-10\t1\t0.0\t0.0\n"), ParseError);    // negative frame
  CHECK_THROWS_AS(parse_text("0\t1\tnan\t0.0\n"), ParseError);      // non-finite position
  CHECK_THROWS_AS(parse_text("0\t1\t0\t0\n0\t1\t1\t1\n"), StructureError);  // duplicate
}

TEST_CASE("parse error messages carry the line number") {
  try {
    parse_text("0\t1\t0\t0\n10\t1\t1\t0\nbad line\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("parse_dataset rejects a gapped track naming the pedestrian") {
  // ped 5's gaps are 10 then 20: a hole relative to the inferred stride.
  const std::string text = "0\t5\t0\t0\n10\t5\t1\t0\n30\t5\t2\t0\n";
  try {
    parse_text(text);
    FAIL("expected StructureError");
  } catch (const StructureError& e) {
    CHECK(std::string(e.what()).find("pedestrian 5") != std::string::npos);
  }
}

TEST_CASE("write_dataset emits canonical tab-separated lines") {
  SceneDataset data;
  data.records.push_back({0, 1, {0.0, 0.0}});
  CHECK(write_text(data) == "0\t1\t0\t0\n");
  CHECK(write_text(SceneDataset{}).empty());
}

TEST_CASE("dataset round-trip is exact on random datasets") {
  Rng rng(2024);
  for (int iter = 0; iter < 100; ++iter) {
    const std::int64_t stride = 1 + static_cast<std::int64_t>(rng.uniform_index(12));
    const SceneDataset data = random_dataset(rng, stride);
    const ParsedDataset reparsed = parse_text(write_text(data));
    REQUIRE(reparsed.dataset.records == data.records);
    // Stride inference sees only gaps, so it must agree whenever any
    // pedestrian has one.
    CHECK(reparsed.dataset.frame_stride == stride);
  }
}

TEST_CASE("parsing is insensitive to input line order") {
  Rng rng(99);
  const SceneDataset data = random_dataset(rng, 10);
  std::string text = write_text(data);

  // Shuffle the lines.
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  for (std::size_t i = lines.size(); i > 1; --i)
    std::swap(lines[i - 1], lines[rng.uniform_index(i)]);
  std::string shuffled;
  for (const auto& l : lines) shuffled += l + "\n";

  CHECK(parse_text(shuffled).dataset == parse_text(text).dataset);
}

TEST_CASE("frame id scaling scales the inferred stride and nothing else") {
  Rng rng(7);
  const SceneDataset data = random_dataset(rng, 10);
  for (std::int64_t c : {2, 3, 7}) {
    SceneDataset scaled = data;
    for (auto& rec : scaled.records) rec.frame_id *= c;
    const ParsedDataset reparsed = parse_text(write_text(scaled));
    CHECK(reparsed.dataset.frame_stride == 10 * c);
    REQUIRE(reparsed.dataset.records.size() == data.records.size());
    for (std::size_t i = 0; i < data.records.size(); ++i) {
      CHECK(reparsed.dataset.records[i].ped_id == data.records[i].ped_id);
      CHECK(reparsed.dataset.records[i].position == data.records[i].position);
    }
  }
}

TEST_CASE("parse_predictions reads a small file and enforces shape") {
  SECTION("two samples for one key") {
    std::istringstream in("0\t1\t0\t1.0\t2.0\n0\t1\t1\t1.5\t2.5\n");
    const PredictionSet set = parse_predictions(in);
    CHECK(set.samples_per_point == 2);
    REQUIRE(set.tracks.size() == 1);
    CHECK(set.tracks[0].samples[0][1] == Vec2{1.5, 2.5});
  }
  SECTION("gapped sample ids are a structural error") {
    std::istringstream in("0\t1\t0\t1.0\t2.0\n0\t1\t2\t1.5\t2.5\n");
    CHECK_THROWS_AS(parse_predictions(in), StructureError);
  }
  SECTION("ragged sample counts are a structural error") {
    std::istringstream in(
        "0\t1\t0\t1\t2\n0\t1\t1\t1\t2\n"
        "10\t1\t0\t1\t2\n");
    CHECK_THROWS_AS(parse_predictions(in), StructureError);
  }
}

TEST_CASE("prediction round-trip preserves the parsed shape") {
  // 3 pedestrians, 8 timesteps, 100 samples each.
  PredictionSet set;
  set.samples_per_point = 100;
  set.horizon = 8;
  Rng rng(5);
  for (int p = 1; p <= 3; ++p) {
    PredictionSet::Track track;
    track.ped_id = p;
    for (int t = 0; t < 8; ++t) {
      track.frames.push_back(10 * (t + 1));
      std::vector<Vec2> samples;
      for (int j = 0; j < 100; ++j)
        samples.push_back({rng.uniform_range(-5, 5), rng.uniform_range(-5, 5)});
      track.samples.push_back(std::move(samples));
    }
    set.tracks.push_back(std::move(track));
  }

  std::ostringstream out;
  write_predictions(set, out);
  std::istringstream in(out.str());
  const PredictionSet reparsed = parse_predictions(in);
  REQUIRE(reparsed.tracks.size() == 3);
  CHECK(reparsed.samples_per_point == 100);
  CHECK(reparsed.horizon == 8);
  CHECK(reparsed == set);
}
