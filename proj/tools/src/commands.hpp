// Copyright 2026 The slslab Authors
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


#ifndef SLSLAB_TOOLS_COMMANDS_HPP_
#define SLSLAB_TOOLS_COMMANDS_HPP_

#include <iosfwd>

namespace slslab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;   // audits failed or runtime error
inline constexpr int kExitInput = 2;     // parse or schema error
inline constexpr int kExitUnreliable = 3;

// Runs `slslab <command> ...`; the one-line summary goes to `out`.
int RunCli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace slslab::cli

#endif  // SLSLAB_TOOLS_COMMANDS_HPP_
