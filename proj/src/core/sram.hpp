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

// Behavioral model of a banked, subarrayed single-port SRAM macro and its
// abstract physical (LEF) and timing (LIB) views.
//
// Address layout, most significant digit first:
//
//   addr = ((bank * subarrays + subarray) * rows + row) * mux_ratio + column
//
// With power-of-two geometry this is plain bit slicing.

#ifndef APPROXCIM_CORE_SRAM_HPP
#define APPROXCIM_CORE_SRAM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/multiplier.hpp"

namespace approxcim {

struct SramConfig {
  unsigned rows = 16;
  unsigned cols = 8;
  unsigned word_width = 8;
  unsigned banks = 1;
  unsigned subarrays = 1;
  unsigned mux_ratio = 1;
  // Carried into the LIB view only; the behavioral model is cycle-atomic.
  unsigned sae_offset = 1;
  unsigned precharge = 1;

  /// Throws kConfig naming the offending field.
  void validate() const;
  std::uint64_t capacity_words() const;
  /// ceil(log2(capacity)), at least 1.
  unsigned address_bits() const;
};

struct AddressParts {
  unsigned bank = 0;
  unsigned subarray = 0;
  unsigned row = 0;
  unsigned column = 0;  // mux column

  friend bool operator==(const AddressParts&, const AddressParts&) = default;
};

AddressParts decompose_address(const SramConfig& cfg, std::uint64_t addr);
std::uint64_t compose_address(const SramConfig& cfg, const AddressParts& parts);

struct SramStats {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
};

struct SramTraceEntry {
  std::uint64_t cycle = 0;
  char op = 'R';  // 'R' or 'W'
  std::uint64_t addr = 0;
  std::uint64_t data = 0;
};

class SramModel {
 public:
  explicit SramModel(SramConfig cfg);

  const SramConfig& config() const { return cfg_; }
  std::uint64_t capacity() const { return storage_.size(); }
  const SramStats& stats() const { return stats_; }

  void write(std::uint64_t addr, std::uint64_t word);
  std::uint64_t read(std::uint64_t addr);

  void enable_trace(bool on) { tracing_ = on; }
  const std::vector<SramTraceEntry>& trace() const { return trace_; }
  /// "cycle,op,addr,data" with a header row.
  std::string trace_csv() const;

 private:
  void check_address(std::uint64_t addr) const;
  void record(char op, std::uint64_t addr, std::uint64_t data);

  SramConfig cfg_;
  std::vector<std::uint64_t> storage_;
  SramStats stats_;
  std::uint64_t cycle_ = 0;
  bool tracing_ = false;
  std::vector<SramTraceEntry> trace_;
};

/// One PE step: read the stored word and multiply it with the operand.
std::uint64_t pe_cycle(SramModel& model, std::uint64_t addr,
                       std::uint64_t operand, const Multiplier& mult);

/// Non-calibrated analytic estimates feeding the abstract views.
struct MacroEstimate {
  std::uint64_t width_nm = 0;
  std::uint64_t height_nm = 0;
  double area_um2 = 0.0;
  double access_ns = 0.0;
  double leakage_nw = 0.0;
};

MacroEstimate estimate_macro(const SramConfig& cfg);

struct AbstractViews {
  std::string lef;
  std::string lib;
};

/// Pins: clk, we, ce, addr_in[], din[], dout[].
unsigned macro_pin_count(const SramConfig& cfg);
AbstractViews emit_abstract_views(const SramConfig& cfg,
                                  const std::string& macro_name);
std::string default_macro_name(const SramConfig& cfg);

}  // namespace approxcim

#endif  // APPROXCIM_CORE_SRAM_HPP
