// Copyright 2026 The MapRaster Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "maprast/mask_io.h"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace maprast {
namespace {

std::string Bytes(std::initializer_list<int> v) {
  std::string s;
  for (int b : v) s.push_back(static_cast<char>(b));
  return s;
}

TEST(WritePgmTest, HeaderAndRoundedBytes) {
  const GridSpec g(0, 3, 0, 2, 3, 2);
  const SoftMask m(g, {0.0, 0.5, 1.0, 0.001, 0.999, 0.25});
  std::ostringstream out;
  WritePgm(m, out);
  EXPECT_EQ(out.str(), "P5\n3 2\n255\n" + Bytes({0, 128, 255, 0, 255, 64}));
}

TEST(WritePbmTest, PacksRowsMsbFirstWithPadding) {
  const GridSpec g(0, 10, 0, 2, 10, 2);
  BinaryMask m(g);
  m.set(0, 0);
  m.set(0, 9);
  m.set(1, 1);
  m.set(1, 7);
  m.set(1, 8);
  std::ostringstream out;
  WritePbm(m, out);
  EXPECT_EQ(out.str(), "P4\n10 2\n" + Bytes({0x80, 0x40, 0x41, 0x80}));
}

TEST(WritePbmTest, EmptyMaskIsAllZero) {
  const GridSpec g(0, 8, 0, 3, 8, 3);
  std::ostringstream out;
  WritePbm(BinaryMask(g), out);
  EXPECT_EQ(out.str(), "P4\n8 3\n" + std::string(3, '\0'));
}

TEST(MaskFileTest, WritesSameBytesAsStream) {
  const GridSpec g(0, 4, 0, 4, 4, 4);
  SoftMask soft(g);
  soft.mutable_values()[5] = 0.75;
  const std::string path =
      (std::filesystem::temp_directory_path() / "maprast_mask_io_test.pgm")
          .string();
  WritePgmFile(soft, path);
  std::ifstream in(path, std::ios::binary);
  const std::string file((std::istreambuf_iterator<char>(in)), {});
  std::ostringstream out;
  WritePgm(soft, out);
  EXPECT_EQ(file, out.str());
  std::filesystem::remove(path);
}

TEST(MaskFileTest, UnwritablePathThrows) {
  const GridSpec g(0, 1, 0, 1, 1, 1);
  EXPECT_THROW(WritePbmFile(BinaryMask(g), "/nonexistent-dir/x.pbm"),
               std::runtime_error);
}

}  // namespace
}  // namespace maprast
