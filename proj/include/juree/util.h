//
// Copyright 2026 The JurEE Authors
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

// Small helpers shared across modules: a platform-stable RNG, hashing and
// ASCII string utilities, and file IO.

#ifndef JUREE_UTIL_H_
#define JUREE_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace juree {

// Seeded random source whose outputs are identical on every platform.
// std::mt19937_64 is fully specified by the standard; the distributions in
// <random> are not, so the bounded draws are implemented here.
class StableRng {
 public:
  explicit StableRng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  uint64_t Uniform(uint64_t bound);

  // Uniform double in [0, 1) with 53 bits of precision.
  double UniformDouble();

  bool Bernoulli(double p) { return UniformDouble() < p; }

  // Fisher-Yates shuffle driven by Uniform().
  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(Uniform(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Mixes two 64-bit values into a new seed (splitmix64 finalizer).
uint64_t MixSeed(uint64_t a, uint64_t b);

// Lowercase hex SHA-256 digest.
std::string Sha256Hex(std::string_view data);

uint64_t Fnv1a64(std::string_view data);

std::string ToLowerAscii(std::string_view s);
std::string_view TrimAscii(std::string_view s);
std::vector<std::string> SplitWhitespace(std::string_view s);
// Lines without terminators; "\r\n" is accepted and a final newline does not
// start an extra empty line.
std::vector<std::string> SplitLines(std::string_view s);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// Replaces every occurrence of `from` with `to`.
std::string ReplaceAll(std::string s, std::string_view from, std::string_view to);

// Single-pass placeholder substitution: "{name}" is replaced by
// values.at(name), "{{" and "}}" render as literal braces. Substituted values
// are never re-scanned. Throws InvalidArgument on an unknown or unterminated
// placeholder.
std::string RenderTemplate(std::string_view tmpl,
                           const std::map<std::string, std::string>& values);

// Shortest decimal representation that round-trips to the same double.
std::string FormatDouble(double v);

std::string ReadFile(const std::filesystem::path& path);

// Writes via a temporary sibling and rename, so readers never observe a
// partially written file.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view data);

// UTC wall clock as ISO-8601 with second precision, e.g. 2026-01-02T03:04:05Z.
std::string UtcTimestamp();

}  // namespace juree

#endif  // JUREE_UTIL_H_
