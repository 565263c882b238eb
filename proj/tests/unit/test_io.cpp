// Copyright 2026 The loadplan Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "loadplan/errors.hpp"
#include "loadplan/io.hpp"

namespace loadplan {
namespace {

namespace fs = std::filesystem;

HeightField wavy() {
  return testing::make_field(37, 23, 0.1, -1.3, 2.2, [](double x, double y) {
    return 1.0 + 0.5 * std::sin(3 * x) * std::cos(2 * y);
  });
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() /
                       ("loadplan_io_" + std::to_string(::testing::UnitTest::GetInstance()
                                                             ->random_seed()));
  fs::create_directories(dir);
  return dir;
}

TEST(Hfld, HeaderBytes) {
  std::stringstream ss;
  write_hfld(ss, wavy());
  const std::string s = ss.str();
  EXPECT_EQ(s.substr(0, 4), "HFLD");
  EXPECT_EQ(static_cast<unsigned char>(s[4]), 1);
  EXPECT_EQ(static_cast<unsigned char>(s[5]), 0);
  EXPECT_EQ(s.size(), 4u + 2 + 4 + 4 + 3 * 8 + 37u * 23 * 4);
}

TEST(Hfld, RoundTripAtFloatPrecision) {
  const HeightField f = wavy();
  std::stringstream ss;
  write_hfld(ss, f);
  const HeightField g = read_hfld(ss);
  ASSERT_EQ(g.nx(), f.nx());
  ASSERT_EQ(g.ny(), f.ny());
  EXPECT_EQ(g.cell(), f.cell());
  EXPECT_EQ(g.origin_x(), f.origin_x());
  EXPECT_EQ(g.origin_y(), f.origin_y());
  for (std::size_t k = 0; k < f.heights().size(); ++k) {
    EXPECT_EQ(g.heights()[k], static_cast<double>(static_cast<float>(f.heights()[k])));
  }
}

TEST(Hfld, BadMagicAndTruncation) {
  std::stringstream bad("HFLX\x01");
  EXPECT_THROW(read_hfld(bad), FormatError);
  std::stringstream full;
  write_hfld(full, wavy());
  std::stringstream cut(full.str().substr(0, 60));
  EXPECT_THROW(read_hfld(cut), FormatError);
}

TEST(HeightfieldCsv, RoundTrip) {
  const HeightField f = wavy();
  std::stringstream ss;
  write_heightfield_csv(ss, f);
  const HeightField g = read_heightfield_csv(ss, f.cell(), f.origin_x(), f.origin_y());
  ASSERT_EQ(g.nx(), f.nx());
  ASSERT_EQ(g.ny(), f.ny());
  for (std::size_t k = 0; k < f.heights().size(); ++k) {
    EXPECT_EQ(g.heights()[k], f.heights()[k]);
  }
}

TEST(HeightfieldCsv, RaggedRowsRejected) {
  std::stringstream ss("1,2,3\n4,5\n");
  EXPECT_THROW(read_heightfield_csv(ss, 0.1, 0, 0), FormatError);
}

TEST(AtomicWrite, ReplacesWholeFileAndLeavesNoTemp) {
  const fs::path dir = scratch_dir();
  const fs::path p = dir / "out.txt";
  write_file_atomic(p, "first version, longer than the second");
  write_file_atomic(p, "second");
  EXPECT_EQ(read_file(p), "second");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1);
  fs::remove_all(dir);
}

TEST(AtomicWrite, MissingDirectoryNamesPath) {
  const fs::path p = fs::temp_directory_path() / "loadplan_no_such_dir" / "x.txt";
  try {
    write_file_atomic(p, "x");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("loadplan_no_such_dir"), std::string::npos);
  }
  EXPECT_THROW(read_file(p), Error);
}

TEST(HfldFile, SaveLoad) {
  const fs::path dir = scratch_dir();
  const HeightField f = wavy();
  save_hfld(dir / "pile.hfld", f);
  const HeightField g = load_hfld(dir / "pile.hfld");
  EXPECT_EQ(g.nx(), f.nx());
  EXPECT_NEAR(g(5, 7), f(5, 7), 1e-6);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace loadplan
