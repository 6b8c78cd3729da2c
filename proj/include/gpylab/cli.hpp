// Copyright 2026 The gpylab Authors
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gpylab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitUsage = 64;

// Environment variable naming the default segment cache directory.
inline constexpr const char* kCacheEnv = "GPYLAB_CACHE_DIR";

// args excludes the program name. Results go to --out (or `out` when absent);
// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "1e7" -> 10000000; rejects fractions and negatives.
std::uint64_t parse_count(std::string_view text);
std::int64_t parse_int(std::string_view text);
double parse_real(std::string_view text);
std::vector<std::string> split_list(std::string_view text);

}  // namespace gpylab::cli
