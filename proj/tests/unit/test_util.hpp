// Copyright 2026 The approxcim Authors
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

#ifndef APPROXCIM_TESTS_UNIT_TEST_UTIL_HPP
#define APPROXCIM_TESTS_UNIT_TEST_UTIL_HPP

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "core/error.hpp"

namespace testutil {

struct Thrown {
  approxcim::ErrorCode code;
  std::string message;
};

// The approxcim::Error raised by f, if any.
template <typename F>
std::optional<Thrown> thrown(F&& f) {
  try {
    f();
  } catch (const approxcim::Error& e) {
    return Thrown{e.code(), e.what()};
  }
  return std::nullopt;
}

inline bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

inline std::vector<std::pair<std::uint64_t, std::uint64_t>> random_pairs(
    unsigned width, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::uint64_t mask = width >= 64 ? ~0ull : (1ull << width) - 1;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out(count);
  for (auto& [a, b] : out) {
    a = rng() & mask;
    b = rng() & mask;
  }
  return out;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("acim_unit_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil

#endif  // APPROXCIM_TESTS_UNIT_TEST_UTIL_HPP
