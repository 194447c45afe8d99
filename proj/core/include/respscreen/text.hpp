// Copyright (c) 2026 The respscreen Authors. All Rights Reserved.
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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace respscreen {

/// 64-bit FNV-1a. Used for content keys, config hashes and file checksums;
/// not a cryptographic hash.
class Fnv1a {
 public:
  Fnv1a& update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Fnv1a& update(const void* data, std::size_t n) {
    return update(std::string_view(static_cast<const char*>(data), n));
  }
  std::uint64_t digest() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a(std::string_view bytes);
std::string to_hex(std::uint64_t v);

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);
double parse_double(std::string_view text);

/// Splits one delimiter-separated line. Double-quoted fields may contain the
/// delimiter; "" inside quotes is a literal quote.
std::vector<std::string> split_fields(std::string_view line, char delim = ',');

/// Quotes a field for split_fields when it holds the delimiter, a quote or a
/// line break; otherwise returns it unchanged.
std::string csv_field(std::string_view field, char delim = ',');

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace respscreen
