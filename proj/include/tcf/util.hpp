// Copyright 2026 the tcforecast authors
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

#ifndef TCF_UTIL_HPP
#define TCF_UTIL_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace tcf {

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when inputs are structurally valid but violate a contract
/// (bad config values, mismatched signatures, unusable data).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// FNV-1a fingerprint of a file's bytes, as 16 hex chars.
std::string hash_file_hex(const std::string& path);

std::string format_double(double v, int decimals);
/// Shortest round-trippable decimal form (%.17g).
std::string format_sci(double v);

std::vector<std::string> split_ws(const std::string& line);
std::string trim(const std::string& s);

}  // namespace tcf

#endif  // TCF_UTIL_HPP
