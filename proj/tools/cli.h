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

#ifndef MAPRAST_TOOLS_CLI_H_
#define MAPRAST_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace maprast {

// Exit codes of the maprast tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

// Runs one tool invocation. `args` excludes the program name, e.g.
// {"eval", "raster", "--pred", "p.json", "--gt", "g.json", "--out", "r.json"}.
int RunCommand(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err);

}  // namespace maprast

#endif  // MAPRAST_TOOLS_CLI_H_
