//
// Copyright 2026 The intentkit Authors
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
//

#ifndef INTENTKIT_CLI_H_
#define INTENTKIT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace intentkit {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // provider / experiment failure
inline constexpr int kExitUsage = 2;    // bad usage, config or input files

// Entry point of the `intentkit` tool. `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace intentkit

#endif  // INTENTKIT_CLI_H_
