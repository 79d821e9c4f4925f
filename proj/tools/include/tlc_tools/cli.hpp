// Copyright 2026 The tlc Authors
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

#ifndef TLC_TOOLS_CLI_HPP_
#define TLC_TOOLS_CLI_HPP_

#include <iosfwd>

namespace tlc::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kBadConfig = 3,
  kInvariant = 4,
  kEstimatorFault = 5,
  kSimulationFault = 6,
  kIoFailure = 7,
  kDomain = 8,
};

/// Entry point of the `tlc` tool. Writes the one-line summary to `out` and
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, on std::cout and std::cerr.
int run_cli(int argc, const char* const* argv);

}  // namespace tlc::cli

#endif  // TLC_TOOLS_CLI_HPP_
