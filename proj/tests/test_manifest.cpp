#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "pedsynth/manifest.hpp"

using namespace pedsynth;

TEST_CASE("fnv1a64 matches published test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("manifest serialization is stable and complete") {
  const std::string input = testutil::temp_path("manifest_in.txt");
  testutil::write_file(input, "payload");

  RunManifest manifest;
  manifest.subcommand = "sample";
  manifest.seed = 99;
  manifest.has_seed = true;
  manifest.add_config("reps", "5");
  manifest.add_input(input);

  const std::string text = manifest.to_string();
  CHECK(text.find("manifest_version=") != std::string::npos);
  CHECK(text.find("subcommand=sample") != std::string::npos);
  CHECK(text.find("seed=99") != std::string::npos);
  CHECK(text.find("config.reps=5") != std::string::npos);
  CHECK(text.find("input." + input + "=fnv1a64:") != std::string::npos);

  // Same content, same digest line.
  RunManifest again = manifest;
  CHECK(again.to_string() == text);

  SECTION("digesting a missing file is an I/O error") {
    CHECK_THROWS_AS(file_digest("/nonexistent/nope"), IoError);
  }
}

TEST_CASE("write_manifest places the file next to the output") {
  const std::string out = testutil::temp_path("manifest_out.tsv");
  testutil::write_file(out, "data");
  RunManifest manifest;
  manifest.subcommand = "stats";
  const std::string path = write_manifest(manifest, out);
  CHECK(path == out + ".manifest");
  CHECK(!testutil::read_file(path).empty());
}
