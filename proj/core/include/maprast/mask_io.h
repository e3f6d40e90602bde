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

// Netpbm export of masks. Soft masks become 8-bit P5 graymaps with
// value round(255 * I); binary masks become P4 bitmaps (1 = set). Row 0 of
// the mask is the first row written.

#ifndef MAPRAST_MASK_IO_H_
#define MAPRAST_MASK_IO_H_

#include <ostream>
#include <string>

#include "maprast/rasterizer.h"

namespace maprast {

void WritePgm(const SoftMask& mask, std::ostream& out);
void WritePbm(const BinaryMask& mask, std::ostream& out);

// Throw std::runtime_error if the file cannot be written.
void WritePgmFile(const SoftMask& mask, const std::string& path);
void WritePbmFile(const BinaryMask& mask, const std::string& path);

}  // namespace maprast

#endif  // MAPRAST_MASK_IO_H_
