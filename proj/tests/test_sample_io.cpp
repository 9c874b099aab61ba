// Copyright 2026 the marglik authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "sample_io.hpp"
#include "sampling.hpp"

using namespace marglik;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("./io_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("sample files round-trip bitwise with provenance") {
  RngStream rng(17);
  const PosteriorSample original{sample_normal(rng, -0.3, 1.7, 257), McmcInfo{500, 3, 0.437}};

  TempFile file("roundtrip.txt");
  write_sample_file(file.path, original);
  const PosteriorSample loaded = read_sample_file(file.path);

  CHECK(loaded.draws == original.draws);
  const auto* info = std::get_if<McmcInfo>(&loaded.provenance);
  REQUIRE(info != nullptr);
  CHECK(info->burn_in == 500);
  CHECK(info->thinning == 3);
  CHECK(info->acceptance_rate == 0.437);
}

TEST_CASE("exact-iid provenance round-trips and is the default") {
  TempFile file("exact.txt");
  write_sample_file(file.path, PosteriorSample{{1.5, -2.5, 0.25}, ExactIid{}});
  CHECK(std::holds_alternative<ExactIid>(read_sample_file(file.path).provenance));

  TempFile bare("bare.txt");
  std::ofstream(bare.path) << "0.5\n1.5\n";
  CHECK(std::holds_alternative<ExactIid>(read_sample_file(bare.path).provenance));
}

TEST_CASE("comments and blank lines are ignored") {
  TempFile file("comments.txt");
  std::ofstream(file.path) << "# a comment\n\n1\n  \n# another\n2\n3\n";
  const std::vector<double> values = read_values_file(file.path);
  CHECK(values == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("malformed lines are reported with their line number") {
  TempFile file("bad.txt");
  std::ofstream(file.path) << "1.0\n2.0\nnot-a-number\n";
  try {
    read_values_file(file.path);
    FAIL("expected parse_error");
  } catch (const error& e) {
    CHECK(e.code() == errc::parse_error);
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }

  TempFile inf_file("inf.txt");
  std::ofstream(inf_file.path) << "1.0\ninf\n";
  try {
    read_values_file(inf_file.path);
    FAIL("expected parse_error");
  } catch (const error& e) {
    CHECK(e.code() == errc::parse_error);
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }

  TempFile trailing("trailing.txt");
  std::ofstream(trailing.path) << "1.0 junk\n2.0\n";
  CHECK_THROWS_AS(read_values_file(trailing.path), error);
}

TEST_CASE("sample files need at least two draws") {
  TempFile file("single.txt");
  std::ofstream(file.path) << "1.0\n";
  try {
    read_sample_file(file.path);
    FAIL("expected sample_too_small");
  } catch (const error& e) {
    CHECK(e.code() == errc::sample_too_small);
  }
}

TEST_CASE("missing and empty files") {
  try {
    read_values_file("./does_not_exist_10293.txt");
    FAIL("expected io_error");
  } catch (const error& e) {
    CHECK(e.code() == errc::io_error);
  }

  TempFile empty("empty.txt");
  std::ofstream(empty.path) << "# only a comment\n";
  try {
    read_values_file(empty.path);
    FAIL("expected empty_dataset");
  } catch (const error& e) {
    CHECK(e.code() == errc::empty_dataset);
  }
}

TEST_CASE("write_values_file emits parseable output") {
  TempFile file("values.txt");
  const std::vector<double> values{0.1, -2.0, 33.25};
  write_values_file(file.path, values, "test values");
  CHECK(read_values_file(file.path) == values);
}

TEST_CASE("extreme magnitudes survive the text round trip bitwise") {
  TempFile file("extremes.txt");
  const std::vector<double> values{1e-300,          -1e300, 0.0,
                                   5e-324,          // smallest subnormal
                                   0.1,             // classic non-representable decimal
                                   -2.2250738585072014e-308};
  write_sample_file(file.path, PosteriorSample{values, ExactIid{}});
  CHECK(read_sample_file(file.path).draws == values);
}

TEST_CASE("writes to unwritable paths report io errors") {
  CHECK_THROWS_AS(write_sample_file("./no_such_dir_817/sample.txt",
                                    PosteriorSample{{1.0, 2.0}, ExactIid{}}),
                  error);
  try {
    write_values_file("./no_such_dir_817/values.txt", std::vector<double>{1.0}, "");
    FAIL("expected io_error");
  } catch (const error& e) {
    CHECK(e.code() == errc::io_error);
  }
}
