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

#include "core/project.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <variant>

#include "core/error.hpp"
#include "core/error_lab.hpp"
#include "core/rtl_emit.hpp"
#include "json.hpp"

namespace approxcim {

namespace fs = std::filesystem;

constexpr unsigned kExhaustiveReportWidth = 8;
constexpr std::uint64_t kSampledReportPairs = 100000;

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  if (text == "both") return ReportFormat::kBoth;
  fail(ErrorCode::kConfig, "unknown report format '" + std::string(text) +
                               "' (csv, json or both)");
}

void ProjectConfig::validate() const {
  check_module_name(name);
  multiplier.validate();
  sram.validate();
  if (sram.word_width > multiplier.width) {
    fail(ErrorCode::kConfig, "sram.word_width " + std::to_string(sram.word_width) +
                                 " exceeds multiplier.width " +
                                 std::to_string(multiplier.width));
  }
}

namespace {

using Value = std::variant<std::string, std::int64_t, double, bool>;

struct Entry {
  Value value;
  unsigned line = 0;
};

using Table = std::map<std::string, Entry>;

// Line 0 marks values that came from command-line overrides.
[[noreturn]] void config_error(unsigned line, const std::string& msg) {
  fail(ErrorCode::kConfig,
       (line ? "config line " + std::to_string(line) : std::string("override")) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_key(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    if (!std::isalnum(c) && c != '_' && c != '-') return false;
  }
  return true;
}

// Splits off a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

Value parse_value(std::string_view text, unsigned line) {
  if (text.empty()) config_error(line, "missing value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') config_error(line, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
      char c = text[i];
      if (c == '\\') {
        if (i + 2 >= text.size()) config_error(line, "dangling escape");
        c = text[++i];
        if (c == 'n') {
          c = '\n';
        } else if (c == 't') {
          c = '\t';
        } else if (c != '"' && c != '\\') {
          config_error(line, std::string("unknown escape \\") + c);
        }
      } else if (c == '"') {
        config_error(line, "unexpected quote inside string");
      }
      out.push_back(c);
    }
    return out;
  }
  if (text == "true") return true;
  if (text == "false") return false;
  std::string digits;
  for (char c : text) {
    if (c != '_') digits.push_back(c);
  }
  try {
    std::size_t used = 0;
    if (digits.find_first_of(".eE") == std::string::npos) {
      const long long v = std::stoll(digits, &used, 10);
      if (used == digits.size()) return static_cast<std::int64_t>(v);
    } else {
      const double v = std::stod(digits, &used);
      if (used == digits.size()) return v;
    }
  } catch (const std::exception&) {
  }
  config_error(line, "cannot parse value '" + std::string(text) +
                         "' (strings must be double-quoted)");
}

std::map<std::string, Table> parse_tables(std::string_view text) {
  std::map<std::string, Table> tables;
  std::string current;
  unsigned line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = trim(strip_comment(text.substr(pos, end - pos)));
    ++line_no;
    pos = end + 1;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') config_error(line_no, "malformed table header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (!is_key(name)) config_error(line_no, "bad table name '" + name + "'");
      if (tables.count(name)) config_error(line_no, "table [" + name + "] repeated");
      tables[name];
      current = name;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) config_error(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (!is_key(key)) config_error(line_no, "bad key '" + key + "'");
    if (current.empty()) config_error(line_no, "key '" + key + "' outside a table");
    Table& table = tables[current];
    if (table.count(key)) config_error(line_no, "duplicate key '" + key + "'");
    table[key] = {parse_value(trim(line.substr(eq + 1)), line_no), line_no};
  }
  return tables;
}

class TableReader {
 public:
  TableReader(const std::string& name, const Table* table) : name_(name), table_(table) {}

  ~TableReader() noexcept(false) {
    if (!table_ || std::uncaught_exceptions() > 0) return;
    for (const auto& [key, entry] : *table_) {
      if (!used_.count(key)) {
        config_error(entry.line, "unknown key '" + key + "' in [" + name_ + "]");
      }
    }
  }

  const Entry* find(const std::string& key) {
    if (!table_) return nullptr;
    used_.insert(key);
    auto it = table_->find(key);
    return it == table_->end() ? nullptr : &it->second;
  }

  std::optional<std::string> string(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return {};
    if (const auto* s = std::get_if<std::string>(&e->value)) return *s;
    config_error(e->line, name_ + "." + key + " must be a string");
  }

  std::optional<std::int64_t> integer(const std::string& key, std::int64_t lo,
                                      std::int64_t hi) {
    const Entry* e = find(key);
    if (!e) return {};
    const auto* v = std::get_if<std::int64_t>(&e->value);
    if (!v) config_error(e->line, name_ + "." + key + " must be an integer");
    if (*v < lo || *v > hi) {
      config_error(e->line, name_ + "." + key + " = " + std::to_string(*v) +
                                " out of range [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
    }
    return *v;
  }

  std::optional<bool> boolean(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return {};
    if (const auto* b = std::get_if<bool>(&e->value)) return *b;
    config_error(e->line, name_ + "." + key + " must be true or false");
  }

  unsigned line_of(const std::string& key) const {
    return table_->at(key).line;
  }

 private:
  std::string name_;
  const Table* table_;
  std::set<std::string> used_;
};

void read_unsigned(TableReader& t, const std::string& key, unsigned& field,
                   std::int64_t lo = 1) {
  if (auto v = t.integer(key, lo, 1 << 20)) field = static_cast<unsigned>(*v);
}

CompressorSpec load_config_compressor(const std::string& value, const std::string& base_dir,
                                      unsigned line) {
  if (is_builtin_compressor(value)) return builtin_compressor(value);
  fs::path path(value);
  if (path.is_relative()) path = fs::path(base_dir) / path;
  if (!fs::exists(path)) {
    fail(ErrorCode::kIo, "config line " + std::to_string(line) +
                             ": compressor table not found: " + path.string());
  }
  return resolve_compressor(path.string());
}

}  // namespace

ProjectConfig parse_project_config(std::string_view text, const std::string& base_dir,
                                   const ConfigOverrides& overrides) {
  std::map<std::string, Table> tables = parse_tables(text);
  for (const auto& [dotted, value] : overrides) {
    const std::size_t dot = dotted.find('.');
    if (dot == std::string::npos) {
      fail(ErrorCode::kConfig, "override '" + dotted + "' must be table.key");
    }
    tables[dotted.substr(0, dot)][dotted.substr(dot + 1)] = {
        parse_value(trim(value), 0), 0};
  }
  for (const auto& [name, table] : tables) {
    if (name != "project" && name != "multiplier" && name != "sram") {
      const unsigned line = table.empty() ? 0 : table.begin()->second.line;
      config_error(line, "unknown table [" + name + "]");
    }
  }
  auto table = [&](const char* name) -> const Table* {
    auto it = tables.find(name);
    return it == tables.end() ? nullptr : &it->second;
  };

  ProjectConfig cfg;
  {
    TableReader t("project", table("project"));
    if (auto v = t.integer("schema", 1, 1 << 20); v && *v != kConfigSchemaVersion) {
      config_error(t.line_of("schema"), "unsupported schema " + std::to_string(*v) +
                                            " (this build reads schema " +
                                            std::to_string(kConfigSchemaVersion) + ")");
    }
    if (auto v = t.string("name")) cfg.name = *v;
    if (auto v = t.string("output")) cfg.output_dir = *v;
    if (auto v = t.integer("seed", 0, std::numeric_limits<std::int64_t>::max())) {
      cfg.seed = static_cast<std::uint64_t>(*v);
    }
    if (auto v = t.string("report")) cfg.report = parse_report_format(*v);
  }
  {
    TableReader t("multiplier", table("multiplier"));
    MultiplierConfig& m = cfg.multiplier;
    if (auto v = t.string("family")) m.family = parse_family(*v);
    read_unsigned(t, "width", m.width);
    if (auto v = t.string("signedness")) {
      if (*v == "unsigned") {
        m.signedness = Signedness::kUnsigned;
      } else if (*v == "sign-magnitude") {
        m.signedness = Signedness::kSignMagnitude;
      } else {
        config_error(t.line_of("signedness"),
                     "multiplier.signedness must be \"unsigned\" or \"sign-magnitude\"");
      }
    }
    if (auto v = t.integer("region", 0, 64)) m.approx_region = static_cast<unsigned>(*v);
    if (auto v = t.string("compressor")) {
      m.compressor = load_config_compressor(*v, base_dir, t.line_of("compressor"));
    } else if (m.family == Family::kApprox42) {
      m.compressor = builtin_compressor("reference");
    }
    if (auto v = t.boolean("compensation")) m.compensation = *v;
  }
  {
    TableReader t("sram", table("sram"));
    SramConfig& s = cfg.sram;
    read_unsigned(t, "rows", s.rows);
    read_unsigned(t, "cols", s.cols);
    read_unsigned(t, "word_width", s.word_width);
    read_unsigned(t, "banks", s.banks);
    read_unsigned(t, "subarrays", s.subarrays);
    read_unsigned(t, "mux_ratio", s.mux_ratio);
    read_unsigned(t, "sae_offset", s.sae_offset, 0);
    read_unsigned(t, "precharge", s.precharge, 0);
  }
  cfg.validate();
  return cfg;
}

ProjectConfig load_project_config(const std::string& path,
                                  const ConfigOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open config " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const fs::path parent = fs::path(path).parent_path();
  try {
    return parse_project_config(buffer.str(), parent.empty() ? "." : parent.string(),
                                overrides);
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

std::vector<Artifact> generate_artifacts(const ProjectConfig& cfg) {
  cfg.validate();
  const MultiplierConfig& m = cfg.multiplier;
  const Netlist netlist = compile_netlist(m);
  std::vector<Artifact> out;

  const RtlArtifact rtl = m.family == Family::kLogarithmic
                              ? emit_log_mult_rtl(m, cfg.name)
                              : emit_verilog(netlist, cfg.name);
  out.push_back({cfg.name + ".v", rtl.text});

  std::mt19937_64 rng(cfg.seed);
  const std::uint64_t mask = (std::uint64_t{1} << m.width) - 1;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> vectors;
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t a = rng() & mask;
    vectors.emplace_back(a, rng() & mask);
  }
  out.push_back({cfg.name + "_tb.v", emit_testbench(netlist, cfg.name, vectors)});

  const std::string macro = default_macro_name(cfg.sram);
  const AbstractViews views = emit_abstract_views(cfg.sram, macro);
  out.push_back({macro + ".lef", views.lef});
  out.push_back({macro + ".lib", views.lib});

  const std::string pe_name = "pe_" + cfg.name;
  const RtlArtifact pe = emit_pe_wrapper(cfg.sram, macro, m.width, cfg.name, pe_name);
  out.push_back({pe_name + ".v", pe.text});

  FlowInputs flow;
  flow.design_name = pe_name;
  flow.verilog_files = {cfg.name + ".v", pe_name + ".v"};
  flow.macro_name = macro;
  flow.lef_file = macro + ".lef";
  flow.lib_file = macro + ".lib";
  for (auto& [file, text] : emit_flow_scripts(flow)) out.push_back({file, text});

  out.push_back({"gate_counts.csv", gate_count_csv_header() + gate_count_csv_rows(m)});

  const SweepMode mode = m.width <= kExhaustiveReportWidth
                             ? SweepMode::all()
                             : SweepMode::sampled(kSampledReportPairs, cfg.seed);
  const ErrorReport report = sweep_errors(Multiplier(m), mode);
  const std::string family(family_name(m.family));
  if (cfg.report != ReportFormat::kJson) {
    out.push_back({"error_report.csv",
                   error_report_csv_header() + error_report_csv_row(family, m.width, report)});
  }
  if (cfg.report != ReportFormat::kCsv) {
    out.push_back({"error_report.json", error_report_json(family, m.width, report)});
  }

  nlohmann::ordered_json manifest;
  manifest["toolkit_version"] = kToolkitVersion;
  manifest["schema_version"] = kConfigSchemaVersion;
  manifest["design"] = cfg.name;
  manifest["family"] = std::string(family_name(m.family));
  manifest["width"] = m.width;
  manifest["seed"] = cfg.seed;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const Artifact& a : out) {
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(a.contents)));
    files.push_back({{"path", a.path}, {"fnv1a64", digest}});
  }
  manifest["files"] = files;
  out.push_back({"manifest.json", manifest.dump(2) + "\n"});
  return out;
}

void write_failure_marker(const std::string& out_dir, const std::string& message) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::ofstream marker(fs::path(out_dir) / kFailureMarker, std::ios::binary);
  marker << message << "\n";
}

void write_artifacts(const std::vector<Artifact>& artifacts, const std::string& out_dir) {
  try {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::kIo, "cannot create output directory " + out_dir + ": " + ec.message());
    fs::remove(fs::path(out_dir) / kFailureMarker, ec);
    for (const Artifact& a : artifacts) {
      const fs::path path = fs::path(out_dir) / a.path;
      std::ofstream file(path, std::ios::binary);
      if (!file) fail(ErrorCode::kIo, "cannot write " + path.string());
      file.write(a.contents.data(), static_cast<std::streamsize>(a.contents.size()));
      if (!file) fail(ErrorCode::kIo, "write failed: " + path.string());
    }
  } catch (const std::exception& e) {
    write_failure_marker(out_dir, e.what());
    throw;
  }
}

}  // namespace approxcim
