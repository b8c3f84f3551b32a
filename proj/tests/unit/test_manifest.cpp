// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "seqiqa/errors.hpp"
#include "seqiqa/manifest.hpp"
#include "test_util.hpp"

using namespace seqiqa;

TEST_CASE("manifest parse and format round trip") {
  const std::string csv =
      "image_id,path,mos,split\n"
      "a,images/a.png,55.5,train\n"
      "\"b,2\",\"images/b \"\"q\"\".png\",0,test\n"
      "c,c.png,100,\n";
  const DatasetManifest m = parse_manifest(csv, "/data");
  REQUIRE(m.entries.size() == 3);
  CHECK(m.entries[1].image_id == "b,2");
  CHECK(m.entries[1].path == "images/b \"q\".png");
  CHECK(m.entries[0].split == Split::Train);
  CHECK(m.entries[2].split == Split::Unassigned);
  CHECK(m.resolve(m.entries[0]) == std::filesystem::path("/data/images/a.png"));
  CHECK(parse_manifest(format_manifest(m), "/data").entries == m.entries);
  CHECK(m.select(Split::Test).size() == 1);
}

TEST_CASE("real values survive formatting exactly") {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform(0.0, 100.0);
    CHECK(std::stod(format_real(v)) == v);
  }
}

TEST_CASE("malformed manifests report the offending line offset") {
  try {
    parse_manifest("image_id,path,mos\n");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.offset() == 0);
  }
  const std::string header = "image_id,path,mos,split\n";
  try {
    parse_manifest(header + "a,a.png,12,train\nb,b.png,abc,test\n");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.offset() == header.size() + 17);
  }
  CHECK_THROWS_AS(parse_manifest(header + "a,a.png,1\n"), FormatError);
  CHECK_THROWS_AS(parse_manifest(header + "a,a.png,1,validation\n"), FormatError);
  CHECK_THROWS_AS(parse_manifest(header + "a,\"a.png,1,train\n"), FormatError);
  CHECK_THROWS_AS(parse_manifest(""), FormatError);
  CHECK_THROWS_AS(parse_manifest(header + "a,a.png,120,train\n"), ValidationError);
  CHECK_THROWS_AS(parse_manifest(header + "a,a.png,1,train\na,b.png,2,test\n"), ValidationError);
}

TEST_CASE("manifest files round trip") {
  const auto dir = testing::scratch_dir("manifest_io");
  DatasetManifest m;
  m.entries.push_back({"x", "x.png", 12.25, Split::Test});
  write_manifest(m, dir / "m.csv");
  const DatasetManifest back = read_manifest(dir / "m.csv");
  CHECK(back.entries == m.entries);
  CHECK(back.base_dir == dir);
}
