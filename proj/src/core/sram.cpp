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

#include "core/sram.hpp"

#include <bit>
#include <cstdio>
#include <sstream>

#include "core/error.hpp"

namespace approxcim {

namespace {

// Analytic area/timing constants. Not calibrated against any process; they
// only have to be deterministic and scale linearly with the geometry.
constexpr std::uint64_t kCellWidthNm = 1000;
constexpr std::uint64_t kCellHeightNm = 500;
constexpr std::uint64_t kPeripheryWidthNum = 6;   // x1.20 for SA / write drivers
constexpr std::uint64_t kPeripheryWidthDen = 5;
constexpr std::uint64_t kPeripheryHeightNum = 5;  // x1.25 for WL decoders
constexpr std::uint64_t kPeripheryHeightDen = 4;
constexpr double kAccessBaseNs = 0.20;
constexpr double kAccessPerRowNs = 0.004;
constexpr double kLeakagePerBitNw = 0.5;
constexpr double kPinCapPf = 0.005;
constexpr double kPinPitchUm = 0.28;

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string microns(std::uint64_t nm) { return fixed(static_cast<double>(nm) / 1000.0, 3); }

}  // namespace

void SramConfig::validate() const {
  auto positive = [](unsigned v, const char* field) {
    if (v == 0) fail(ErrorCode::kConfig, std::string("sram.") + field + " must be positive");
  };
  positive(rows, "rows");
  positive(cols, "cols");
  positive(word_width, "word_width");
  positive(banks, "banks");
  positive(subarrays, "subarrays");
  positive(mux_ratio, "mux_ratio");
  if (word_width > 64) fail(ErrorCode::kConfig, "sram.word_width must be <= 64");
  if (static_cast<std::uint64_t>(word_width) * mux_ratio != cols) {
    fail(ErrorCode::kConfig, "sram.cols (" + std::to_string(cols) +
                                 ") must equal word_width * mux_ratio (" +
                                 std::to_string(word_width * mux_ratio) + ")");
  }
  if (capacity_words() > (std::uint64_t{1} << 28)) {
    fail(ErrorCode::kConfig, "sram capacity exceeds 2^28 words");
  }
}

std::uint64_t SramConfig::capacity_words() const {
  return std::uint64_t{rows} * mux_ratio * banks * subarrays;
}

unsigned SramConfig::address_bits() const {
  const std::uint64_t cap = capacity_words();
  return cap <= 2 ? 1u : static_cast<unsigned>(std::bit_width(cap - 1));
}

AddressParts decompose_address(const SramConfig& cfg, std::uint64_t addr) {
  if (addr >= cfg.capacity_words()) {
    fail(ErrorCode::kOutOfRange, "address " + std::to_string(addr) + " out of range");
  }
  AddressParts p;
  p.column = static_cast<unsigned>(addr % cfg.mux_ratio);
  addr /= cfg.mux_ratio;
  p.row = static_cast<unsigned>(addr % cfg.rows);
  addr /= cfg.rows;
  p.subarray = static_cast<unsigned>(addr % cfg.subarrays);
  p.bank = static_cast<unsigned>(addr / cfg.subarrays);
  return p;
}

std::uint64_t compose_address(const SramConfig& cfg, const AddressParts& p) {
  if (p.bank >= cfg.banks || p.subarray >= cfg.subarrays || p.row >= cfg.rows ||
      p.column >= cfg.mux_ratio) {
    fail(ErrorCode::kOutOfRange, "address component out of range");
  }
  return ((std::uint64_t{p.bank} * cfg.subarrays + p.subarray) * cfg.rows + p.row) *
             cfg.mux_ratio +
         p.column;
}

SramModel::SramModel(SramConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  storage_.assign(cfg_.capacity_words(), 0);
}

void SramModel::check_address(std::uint64_t addr) const {
  if (addr >= storage_.size()) {
    fail(ErrorCode::kOutOfRange, "address " + std::to_string(addr) +
                                     " out of range [0, " +
                                     std::to_string(storage_.size()) + ")");
  }
}

void SramModel::record(char op, std::uint64_t addr, std::uint64_t data) {
  if (tracing_) trace_.push_back({cycle_, op, addr, data});
  ++cycle_;
}

void SramModel::write(std::uint64_t addr, std::uint64_t word) {
  check_address(addr);
  if (cfg_.word_width < 64 && (word >> cfg_.word_width) != 0) {
    fail(ErrorCode::kOutOfRange, "word does not fit in " +
                                     std::to_string(cfg_.word_width) + " bits");
  }
  storage_[addr] = word;
  ++stats_.writes;
  record('W', addr, word);
}

std::uint64_t SramModel::read(std::uint64_t addr) {
  check_address(addr);
  const std::uint64_t word = storage_[addr];
  ++stats_.reads;
  record('R', addr, word);
  return word;
}

std::string SramModel::trace_csv() const {
  std::string out = "cycle,op,addr,data\n";
  for (const SramTraceEntry& e : trace_) {
    out += std::to_string(e.cycle) + "," + e.op + "," + std::to_string(e.addr) +
           "," + std::to_string(e.data) + "\n";
  }
  return out;
}

std::uint64_t pe_cycle(SramModel& model, std::uint64_t addr,
                       std::uint64_t operand, const Multiplier& mult) {
  if (model.config().word_width > mult.width()) {
    fail(ErrorCode::kConfig, "multiplier narrower than the SRAM word");
  }
  return mult.multiply(model.read(addr), operand);
}

MacroEstimate estimate_macro(const SramConfig& cfg) {
  cfg.validate();
  MacroEstimate e;
  e.width_nm = std::uint64_t{cfg.cols} * cfg.banks * kCellWidthNm *
               kPeripheryWidthNum / kPeripheryWidthDen;
  e.height_nm = std::uint64_t{cfg.rows} * cfg.subarrays * kCellHeightNm *
                kPeripheryHeightNum / kPeripheryHeightDen;
  e.area_um2 = static_cast<double>(e.width_nm) * static_cast<double>(e.height_nm) / 1e6;
  e.access_ns = kAccessBaseNs + kAccessPerRowNs * cfg.rows;
  e.leakage_nw = kLeakagePerBitNw * static_cast<double>(cfg.capacity_words()) * cfg.word_width;
  return e;
}

unsigned macro_pin_count(const SramConfig& cfg) {
  return 2 + cfg.address_bits() + 2 * cfg.word_width + 1;
}

std::string default_macro_name(const SramConfig& cfg) {
  return "sram_" + std::to_string(cfg.capacity_words()) + "x" +
         std::to_string(cfg.word_width);
}

namespace {

std::vector<std::pair<std::string, bool>> pin_list(const SramConfig& cfg) {
  std::vector<std::pair<std::string, bool>> pins;  // (name, is_output)
  pins.emplace_back("clk", false);
  pins.emplace_back("we", false);
  pins.emplace_back("ce", false);
  for (unsigned i = 0; i < cfg.address_bits(); ++i) {
    pins.emplace_back("addr_in[" + std::to_string(i) + "]", false);
  }
  for (unsigned i = 0; i < cfg.word_width; ++i) {
    pins.emplace_back("din[" + std::to_string(i) + "]", false);
  }
  for (unsigned i = 0; i < cfg.word_width; ++i) {
    pins.emplace_back("dout[" + std::to_string(i) + "]", true);
  }
  return pins;
}

std::string emit_lef(const SramConfig& cfg, const std::string& name,
                     const MacroEstimate& e) {
  std::ostringstream lef;
  lef << "VERSION 5.7 ;\n"
      << "BUSBITCHARS \"[]\" ;\n"
      << "DIVIDERCHAR \"/\" ;\n\n"
      << "MACRO " << name << "\n"
      << "  CLASS BLOCK ;\n"
      << "  FOREIGN " << name << " 0 0 ;\n"
      << "  ORIGIN 0 0 ;\n"
      << "  SIZE " << microns(e.width_nm) << " BY " << microns(e.height_nm) << " ;\n"
      << "  SYMMETRY X Y ;\n";
  const auto pins = pin_list(cfg);
  for (std::size_t i = 0; i < pins.size(); ++i) {
    const double y = 0.14 + kPinPitchUm * static_cast<double>(i);
    lef << "  PIN " << pins[i].first << "\n"
        << "    DIRECTION " << (pins[i].second ? "OUTPUT" : "INPUT") << " ;\n"
        << "    USE " << (pins[i].first == "clk" ? "CLOCK" : "SIGNAL") << " ;\n"
        << "    PORT\n"
        << "      LAYER metal3 ;\n"
        << "        RECT 0.000 " << fixed(y, 3) << " 0.070 " << fixed(y + 0.07, 3)
        << " ;\n"
        << "    END\n"
        << "  END " << pins[i].first << "\n";
  }
  lef << "  OBS\n"
      << "    LAYER metal1 ;\n"
      << "      RECT 0.000 0.000 " << microns(e.width_nm) << " " << microns(e.height_nm)
      << " ;\n"
      << "  END\n"
      << "END " << name << "\n\n"
      << "END LIBRARY\n";
  return lef.str();
}

std::string emit_lib(const SramConfig& cfg, const std::string& name,
                     const MacroEstimate& e) {
  const unsigned abits = cfg.address_bits();
  const std::string delay = fixed(e.access_ns, 3);
  std::ostringstream lib;
  lib << "library (" << name << "_lib) {\n"
      << "  /* rows " << cfg.rows << ", cols " << cfg.cols << ", word " << cfg.word_width
      << ", banks " << cfg.banks << ", subarrays " << cfg.subarrays << ", mux "
      << cfg.mux_ratio << " */\n"
      << "  /* timing knobs: sae_offset " << cfg.sae_offset << ", precharge "
      << cfg.precharge << " (behavioral model is cycle-atomic) */\n"
      << "  /* analytic estimates, not characterized */\n"
      << "  technology (cmos) ;\n"
      << "  delay_model : table_lookup ;\n"
      << "  time_unit : \"1ns\" ;\n"
      << "  voltage_unit : \"1V\" ;\n"
      << "  current_unit : \"1mA\" ;\n"
      << "  leakage_power_unit : \"1nW\" ;\n"
      << "  capacitive_load_unit (1, pf) ;\n"
      << "  nom_process : 1.0 ;\n"
      << "  nom_voltage : 1.1 ;\n"
      << "  nom_temperature : 25.0 ;\n"
      << "  type (" << name << "_addr) {\n"
      << "    base_type : array ;\n"
      << "    data_type : bit ;\n"
      << "    bit_width : " << abits << " ;\n"
      << "    bit_from : " << abits - 1 << " ;\n"
      << "    bit_to : 0 ;\n"
      << "    downto : true ;\n"
      << "  }\n"
      << "  type (" << name << "_data) {\n"
      << "    base_type : array ;\n"
      << "    data_type : bit ;\n"
      << "    bit_width : " << cfg.word_width << " ;\n"
      << "    bit_from : " << cfg.word_width - 1 << " ;\n"
      << "    bit_to : 0 ;\n"
      << "    downto : true ;\n"
      << "  }\n"
      << "  cell (" << name << ") {\n"
      << "    area : " << fixed(e.area_um2, 3) << " ;\n"
      << "    interface_timing : true ;\n"
      << "    memory () {\n"
      << "      type : ram ;\n"
      << "      address_width : " << abits << " ;\n"
      << "      word_width : " << cfg.word_width << " ;\n"
      << "    }\n"
      << "    cell_leakage_power : " << fixed(e.leakage_nw, 3) << " ;\n"
      << "    pin (clk) {\n"
      << "      direction : input ;\n"
      << "      capacitance : " << fixed(kPinCapPf, 4) << " ;\n"
      << "      clock : true ;\n"
      << "    }\n";
  for (const char* pin : {"we", "ce"}) {
    lib << "    pin (" << pin << ") {\n"
        << "      direction : input ;\n"
        << "      capacitance : " << fixed(kPinCapPf, 4) << " ;\n"
        << "    }\n";
  }
  lib << "    bus (addr_in) {\n"
      << "      bus_type : " << name << "_addr ;\n"
      << "      direction : input ;\n"
      << "      capacitance : " << fixed(kPinCapPf, 4) << " ;\n"
      << "    }\n"
      << "    bus (din) {\n"
      << "      bus_type : " << name << "_data ;\n"
      << "      direction : input ;\n"
      << "      capacitance : " << fixed(kPinCapPf, 4) << " ;\n"
      << "    }\n"
      << "    bus (dout) {\n"
      << "      bus_type : " << name << "_data ;\n"
      << "      direction : output ;\n"
      << "      max_capacitance : 0.500 ;\n"
      << "      timing () {\n"
      << "        related_pin : \"clk\" ;\n"
      << "        timing_type : rising_edge ;\n"
      << "        cell_rise (scalar) { values (\"" << delay << "\") ; }\n"
      << "        cell_fall (scalar) { values (\"" << delay << "\") ; }\n"
      << "        rise_transition (scalar) { values (\"0.050\") ; }\n"
      << "        fall_transition (scalar) { values (\"0.050\") ; }\n"
      << "      }\n"
      << "    }\n"
      << "  }\n"
      << "}\n";
  return lib.str();
}

}  // namespace

AbstractViews emit_abstract_views(const SramConfig& cfg,
                                  const std::string& macro_name) {
  const MacroEstimate e = estimate_macro(cfg);
  return {emit_lef(cfg, macro_name, e), emit_lib(cfg, macro_name, e)};
}

}  // namespace approxcim
