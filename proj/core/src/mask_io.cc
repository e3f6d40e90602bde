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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace maprast {

void WritePgm(const SoftMask& mask, std::ostream& out) {
  const GridSpec& g = mask.grid();
  out << "P5\n" << g.width() << ' ' << g.height() << "\n255\n";
  std::vector<char> row(static_cast<size_t>(g.width()));
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      row[c] = static_cast<char>(
          static_cast<uint8_t>(std::lround(255.0 * mask.at(r, c))));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void WritePbm(const BinaryMask& mask, std::ostream& out) {
  const GridSpec& g = mask.grid();
  out << "P4\n" << g.width() << ' ' << g.height() << '\n';
  const size_t stride = (static_cast<size_t>(g.width()) + 7) / 8;
  std::vector<char> row(stride);
  for (int r = 0; r < g.height(); ++r) {
    std::fill(row.begin(), row.end(), 0);
    for (int c = 0; c < g.width(); ++c) {
      if (mask.at(r, c)) row[c / 8] |= static_cast<char>(0x80u >> (c % 8));
    }
    out.write(row.data(), static_cast<std::streamsize>(stride));
  }
}

void WritePgmFile(const SoftMask& mask, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  WritePgm(mask, out);
}

void WritePbmFile(const BinaryMask& mask, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  WritePbm(mask, out);
}

}  // namespace maprast
