// Copyright 2026 The minent Authors
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

#ifndef MINENT_CLI_CLI_HPP
#define MINENT_CLI_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

namespace minent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitViolation = 2;

/// Runs the `minent` command line. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// FNV-1a over the bytes of `text`.
std::uint64_t fnv1a(const std::string& text);

}  // namespace minent::cli

#endif  // MINENT_CLI_CLI_HPP
