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

#include "core/cells.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <vector>

#include "core/error.hpp"
#include "builtin_tables.inc"

namespace approxcim {

CompressorSpec CompressorSpec::exact() {
  CompressorSpec spec;
  spec.name_ = "exact";
  spec.kind_ = CompressorKind::kExact;
  return spec;
}

CompressorSpec CompressorSpec::approximate(
    std::string name, const std::array<AdderBits, 16>& table) {
  for (const AdderBits& row : table) {
    if (row.sum > 1 || row.carry > 1) {
      fail(ErrorCode::kInvalidArgument,
           "compressor '" + name + "': non-bit output in table");
    }
  }
  CompressorSpec spec;
  spec.name_ = std::move(name);
  spec.kind_ = CompressorKind::kApproximate;
  spec.table_ = table;
  return spec;
}

const std::array<AdderBits, 16>& CompressorSpec::table() const {
  if (is_exact()) {
    fail(ErrorCode::kInvalidArgument, "exact compressor has no table");
  }
  return table_;
}

AdderBits CompressorSpec::lookup(unsigned pattern) const {
  return table().at(pattern & 0xF);
}

unsigned CompressorSpec::error_distance(unsigned pattern) const {
  const AdderBits out = lookup(pattern);
  const int encoded = out.sum + 2 * out.carry;
  const int expected = std::popcount(pattern & 0xFu);
  return static_cast<unsigned>(encoded > expected ? encoded - expected
                                                  : expected - encoded);
}

unsigned CompressorSpec::max_error_distance() const {
  unsigned worst = 0;
  for (unsigned p = 0; p < 16; ++p) worst = std::max(worst, error_distance(p));
  return worst;
}

unsigned CompressorSpec::erroneous_patterns() const {
  unsigned count = 0;
  for (unsigned p = 0; p < 16; ++p) count += error_distance(p) != 0;
  return count;
}

AdderBits approx_compressor42(const CompressorSpec& spec, Bit x1, Bit x2,
                              Bit x3, Bit x4) {
  if (spec.is_exact()) {
    fail(ErrorCode::kInvalidArgument,
         "approx_compressor42 needs an approximate spec; use "
         "exact_compressor42 for the exact cell");
  }
  const unsigned pattern = (x1 & 1u) << 3 | (x2 & 1u) << 2 | (x3 & 1u) << 1 |
                           (x4 & 1u);
  return spec.lookup(pattern);
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

CompressorSpec load_compressor_spec(std::string_view text, std::string name) {
  std::array<AdderBits, 16> table{};
  unsigned next_pattern = 0;
  std::size_t line_no = 0;
  std::size_t last_line = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view view = raw;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    const std::string line = trim(view);
    if (line.empty()) continue;
    last_line = line_no;

    std::istringstream fields(line);
    std::string pattern_text, sum_text, carry_text, extra;
    if (!(fields >> pattern_text >> sum_text >> carry_text) ||
        (fields >> extra)) {
      parse_fail(line_no, "expected 'x1x2x3x4 sum carry'");
    }
    if (pattern_text.size() != 4 ||
        pattern_text.find_first_not_of("01") != std::string::npos) {
      parse_fail(line_no, "malformed pattern '" + pattern_text + "'");
    }
    auto parse_bit = [&](const std::string& s) -> Bit {
      if (s != "0" && s != "1") parse_fail(line_no, "non-bit output '" + s + "'");
      return static_cast<Bit>(s[0] - '0');
    };
    const AdderBits row{parse_bit(sum_text), parse_bit(carry_text)};
    const unsigned pattern = std::stoul(pattern_text, nullptr, 2);
    if (pattern < next_pattern) {
      parse_fail(line_no, "duplicate pattern " + pattern_text);
    }
    if (pattern > next_pattern) {
      parse_fail(line_no, "missing pattern before " + pattern_text);
    }
    table[pattern] = row;
    ++next_pattern;
    if (next_pattern > 16) parse_fail(line_no, "more than 16 patterns");
  }
  if (next_pattern != 16) {
    parse_fail(last_line + 1, "missing pattern (found " +
                                  std::to_string(next_pattern) +
                                  " of 16 rows)");
  }
  return CompressorSpec::approximate(std::move(name), table);
}

std::string serialize_compressor_spec(const CompressorSpec& spec) {
  std::string out;
  for (unsigned p = 0; p < 16; ++p) {
    const AdderBits row = spec.lookup(p);
    for (int bit = 3; bit >= 0; --bit) out += ((p >> bit) & 1u) ? '1' : '0';
    out += ' ';
    out += static_cast<char>('0' + row.sum);
    out += ' ';
    out += static_cast<char>('0' + row.carry);
    out += '\n';
  }
  return out;
}

bool is_builtin_compressor(std::string_view name) {
  return name == "reference" || name == "exact-nocarry";
}

CompressorSpec builtin_compressor(std::string_view name) {
  if (name == "reference") {
    return load_compressor_spec(kReferenceTable, "reference");
  }
  if (name == "exact-nocarry") {
    return load_compressor_spec(kExactNocarryTable, "exact-nocarry");
  }
  fail(ErrorCode::kConfig, "unknown compressor '" + std::string(name) + "'");
}

CompressorSpec resolve_compressor(const std::string& name_or_path) {
  if (is_builtin_compressor(name_or_path)) {
    return builtin_compressor(name_or_path);
  }
  std::ifstream file(name_or_path, std::ios::binary);
  if (!file) {
    fail(ErrorCode::kConfig,
         "unknown compressor '" + name_or_path +
             "' (not a builtin name and no such table file)");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  std::string stem = name_or_path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos) {
    stem = stem.substr(slash + 1);
  }
  if (const auto dot = stem.rfind('.'); dot != std::string::npos) {
    stem = stem.substr(0, dot);
  }
  try {
    return load_compressor_spec(buffer.str(), stem);
  } catch (const Error& e) {
    fail(ErrorCode::kParse, name_or_path + ": " + e.what());
  }
}

}  // namespace approxcim
