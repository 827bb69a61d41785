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

#ifndef INTENTKIT_TEXT_UTIL_H_
#define INTENTKIT_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace intentkit {

// ASCII-only case folding; bytes >= 0x80 pass through untouched so UTF-8
// sequences stay intact.
std::string AsciiLower(std::string_view s);

std::string_view TrimWhitespace(std::string_view s);

bool IsBlank(std::string_view s);

// Splits on '\n'. A trailing '\r' on each line is removed.
std::vector<std::string> SplitLines(std::string_view text);

std::string ReadFile(const std::string& path);

// Writes atomically enough for our purposes: truncate then write.
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace intentkit

#endif  // INTENTKIT_TEXT_UTIL_H_
