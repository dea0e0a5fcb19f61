// Copyright 2026 The chatmut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHATMUT_CLI_HPP_
#define CHATMUT_CLI_HPP_

#include <ostream>

namespace chatmut {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSourceLoad = 2;
inline constexpr int kExitSuiteFailsOnOriginal = 3;
inline constexpr int kExitInternal = 4;

/// Entry point behind the chatmut executable. Machine output goes to `out`,
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chatmut

#endif  // CHATMUT_CLI_HPP_
