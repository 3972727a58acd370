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

// acim: command-line driver over the approxcim C API.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error or unknown
// subcommand, 3 malformed config, 4 missing input file.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "approxcim/approxcim.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitMissingFile = 4;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void raise(int code, std::string message) { throw CliError{code, std::move(message)}; }

void check(acim_status status, int code_if_failed = kExitFailure) {
  if (status == ACIM_OK) return;
  const int code = status == ACIM_ERR_IO ? kExitMissingFile : code_if_failed;
  raise(code, acim_last_error());
}

// Owns a char* returned by the library.
class OwnedString {
 public:
  OwnedString() = default;
  ~OwnedString() { acim_string_free(p_); }
  OwnedString(const OwnedString&) = delete;
  OwnedString& operator=(const OwnedString&) = delete;
  char** out() { return &p_; }
  std::string str() const { return p_ ? p_ : ""; }

 private:
  char* p_ = nullptr;
};

template <typename T, void (*Destroy)(T*)>
class Handle {
 public:
  Handle() = default;
  ~Handle() { Destroy(p_); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  T** out() { return &p_; }
  T* get() const { return p_; }

 private:
  T* p_ = nullptr;
};

using MultiplierHandle = Handle<acim_multiplier, acim_multiplier_destroy>;
using ImageHandle = Handle<acim_image, acim_image_destroy>;
using SramHandle = Handle<acim_sram, acim_sram_destroy>;
using ProjectHandle = Handle<acim_project, acim_project_destroy>;

void write_file(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(kExitFailure, "cannot write " + path.string());
  out << text;
}

std::string default_out_dir(const std::string& flag, const std::string& from_config) {
  if (!flag.empty()) return flag;
  if (!from_config.empty()) return from_config;
  if (const char* env = std::getenv("ACIM_OUT_DIR"); env && *env) return env;
  return "acim_out";
}

std::string fmt(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct MultiplierFlags {
  std::string family = "exact";
  unsigned width = 8;
  int region = -1;
  std::string compressor;
  bool no_compensation = false;

  void add_to(CLI::App* cmd, unsigned default_width) {
    width = default_width;
    cmd->add_option("--family", family, "exact | approx4-2 | logarithmic")->capture_default_str();
    cmd->add_option("--width", width, "operand width in bits")->capture_default_str();
    cmd->add_option("--region", region, "approx4-2: approximate column count (default width)");
    cmd->add_option("--compressor", compressor, "approx4-2: builtin name or table file");
    cmd->add_flag("--no-compensation", no_compensation, "logarithmic: Mitchell baseline");
  }

  void create(MultiplierHandle& h) const {
    acim_multiplier_config cfg;
    acim_multiplier_config_init(&cfg);
    check(acim_parse_family(family.c_str(), &cfg.family), kExitUsage);
    cfg.width = width;
    if (cfg.family == ACIM_FAMILY_APPROX42) {
      cfg.region = region;
      if (!compressor.empty()) cfg.compressor = compressor.c_str();
    } else if (region >= 0 || !compressor.empty()) {
      raise(kExitUsage, "--region/--compressor apply only to --family approx4-2");
    }
    if (cfg.family == ACIM_FAMILY_LOG) {
      cfg.compensation = no_compensation ? 0 : 1;
    } else if (no_compensation) {
      raise(kExitUsage, "--no-compensation applies only to --family logarithmic");
    }
    check(acim_multiplier_create(&cfg, h.out()), kExitUsage);
  }
};

std::string config_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

int run_gen(const std::string& config_path, const std::string& out_flag,
            const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::vector<const char*> keys, values;
  for (const auto& [k, v] : overrides) {
    keys.push_back(k.c_str());
    values.push_back(v.c_str());
  }
  ProjectHandle project;
  if (config_path.empty()) {
    check(acim_project_parse("", ".", keys.data(), values.data(), keys.size(), project.out()),
          kExitConfig);
  } else {
    if (!fs::exists(config_path)) raise(kExitMissingFile, "config not found: " + config_path);
    check(acim_project_load(config_path.c_str(), keys.data(), values.data(), keys.size(),
                            project.out()),
          kExitConfig);
  }
  const std::string out_dir = default_out_dir(out_flag, acim_project_output_dir(project.get()));
  OwnedString files;
  check(acim_project_generate(project.get(), out_dir.c_str(), files.out()));
  std::printf("%s", files.str().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"approxcim: approximate multiplier and SRAM macro toolkit", "acim"};
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       std::string("acim ") + acim_version() + " (config schema " +
                           std::to_string(acim_schema_version()) + ")");

  // gen
  auto* gen = app.add_subcommand("gen", "emit RTL, SRAM views, flow stubs and reports");
  std::string gen_config, gen_out, gen_name, gen_family;
  unsigned gen_width = 0;
  long long gen_seed = -1;
  gen->add_option("--config", gen_config, "project config file");
  gen->add_option("--out", gen_out, "output directory (default: config, $ACIM_OUT_DIR, acim_out)");
  gen->add_option("--name", gen_name, "design name");
  gen->add_option("--family", gen_family, "override multiplier.family");
  gen->add_option("--width", gen_width, "override multiplier.width");
  gen->add_option("--seed", gen_seed, "override project.seed");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "error metrics over operand pairs");
  MultiplierFlags sweep_mult;
  sweep_mult.add_to(sweep, 8);
  bool sweep_exhaustive = false;
  std::uint64_t sweep_samples = 1'000'000, sweep_seed = 1;
  std::string sweep_format = "csv", sweep_out;
  sweep->add_flag("--exhaustive", sweep_exhaustive, "all operand pairs (width <= 10)");
  sweep->add_option("--samples", sweep_samples, "sampled pair count")->capture_default_str();
  sweep->add_option("--seed", sweep_seed)->capture_default_str();
  sweep->add_option("--format", sweep_format, "csv | json | both")
      ->check(CLI::IsMember({"csv", "json", "both"}))
      ->capture_default_str();
  sweep->add_option("--out", sweep_out, "also write report files into this directory");

  // image
  auto* image = app.add_subcommand("image", "blend or edge-detect PGM images");
  MultiplierFlags image_mult;
  image_mult.add_to(image, 0);
  std::string image_op = "blend", image_in, image_in2, image_out;
  std::string image_synth = "rings", image_synth2 = "radial";
  unsigned image_size = 64;
  image->add_option("--op", image_op, "blend | sobel")
      ->check(CLI::IsMember({"blend", "sobel"}))
      ->capture_default_str();
  image->add_option("--input", image_in, "P5 image (default: synthetic)");
  image->add_option("--input2", image_in2, "second P5 image for blend");
  image->add_option("--synthetic", image_synth, "synthetic first image")->capture_default_str();
  image->add_option("--synthetic2", image_synth2, "synthetic second image")->capture_default_str();
  image->add_option("--size", image_size, "synthetic image edge length")->capture_default_str();
  image->add_option("--out", image_out, "output directory");

  // yield
  auto* yield = app.add_subcommand("yield", "failure probability by MC or MNIS");
  acim_yield_params yp;
  acim_yield_params_init(&yp);
  std::string yield_model = "linear", yield_method = "mc", yield_out;
  unsigned yield_seed_count = 5;
  yield->add_option("--model", yield_model, "linear | snm-surrogate")
      ->check(CLI::IsMember({"linear", "snm-surrogate"}))
      ->capture_default_str();
  yield->add_option("--beta", yp.beta, "margin offset (rarity)")->capture_default_str();
  yield->add_option("--dim", yp.dim, "dimension of the linear model")->capture_default_str();
  yield->add_option("--method", yield_method, "mc | mnis | compare")
      ->check(CLI::IsMember({"mc", "mnis", "compare"}))
      ->capture_default_str();
  yield->add_option("--fom", yp.target_fom, "target std(Pf)/Pf")->capture_default_str();
  yield->add_option("--presamples", yp.presamples, "MNIS phase-1 samples")->capture_default_str();
  yield->add_option("--sigma-s", yp.sigma_s, "MNIS phase-1 spread")->capture_default_str();
  yield->add_option("--seed", yp.seed)->capture_default_str();
  yield->add_option("--max-sims", yp.max_sims)->capture_default_str();
  yield->add_option("--seeds", yield_seed_count, "compare: seeds 1..N")->capture_default_str();
  yield->add_option("--out", yield_out, "also write the CSV into this directory");

  // sram
  auto* sram = app.add_subcommand("sram", "exercise the SRAM model and emit its views");
  acim_sram_config sc;
  acim_sram_config_init(&sc);
  std::uint64_t sram_ops = 64, sram_seed = 1;
  std::string sram_out, sram_name;
  sram->add_option("--rows", sc.rows)->capture_default_str();
  sram->add_option("--cols", sc.cols)->capture_default_str();
  sram->add_option("--word-width", sc.word_width)->capture_default_str();
  sram->add_option("--banks", sc.banks)->capture_default_str();
  sram->add_option("--subarrays", sc.subarrays)->capture_default_str();
  sram->add_option("--mux", sc.mux_ratio)->capture_default_str();
  sram->add_option("--sae-offset", sc.sae_offset)->capture_default_str();
  sram->add_option("--precharge", sc.precharge)->capture_default_str();
  sram->add_option("--ops", sram_ops, "random operations to trace")->capture_default_str();
  sram->add_option("--seed", sram_seed)->capture_default_str();
  sram->add_option("--name", sram_name, "macro name");
  sram->add_option("--out", sram_out, "output directory");

  if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
    std::fprintf(stderr, "acim: error: unknown subcommand '%s' (gen, sweep, image, yield, sram)\n",
                 argv[1]);
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "acim: error: %s\n", e.what());
    return kExitUsage;
  }

  std::string marker_dir;
  try {
    if (gen->parsed()) {
      std::vector<std::pair<std::string, std::string>> overrides;
      if (!gen_name.empty()) overrides.emplace_back("project.name", config_string(gen_name));
      if (!gen_family.empty()) overrides.emplace_back("multiplier.family", config_string(gen_family));
      if (gen_width) overrides.emplace_back("multiplier.width", std::to_string(gen_width));
      if (gen_seed >= 0) overrides.emplace_back("project.seed", std::to_string(gen_seed));
      // A config error must not leave an earlier artifact set looking valid.
      const std::string target = default_out_dir(gen_out, "");
      if (fs::exists(target)) marker_dir = target;
      return run_gen(gen_config, gen_out, overrides);
    }

    if (sweep->parsed()) {
      MultiplierHandle m;
      sweep_mult.create(m);
      acim_error_report report;
      check(acim_sweep_errors(m.get(), sweep_exhaustive, sweep_samples, sweep_seed, &report),
            kExitUsage);
      OwnedString csv, json;
      check(acim_error_report_csv(m.get(), &report, 1, csv.out()));
      check(acim_error_report_json(m.get(), &report, json.out()));
      if (sweep_format != "json") std::printf("%s", csv.str().c_str());
      if (sweep_format != "csv") std::printf("%s", json.str().c_str());
      if (!sweep_out.empty()) {
        marker_dir = sweep_out;
        const std::string stem = "sweep_" + sweep_mult.family + "_" +
                                 std::to_string(sweep_mult.width);
        if (sweep_format != "json") write_file(fs::path(sweep_out) / (stem + ".csv"), csv.str());
        if (sweep_format != "csv") write_file(fs::path(sweep_out) / (stem + ".json"), json.str());
      }
      return 0;
    }

    if (image->parsed()) {
      const bool sobel = image_op == "sobel";
      if (image_mult.width == 0) image_mult.width = sobel ? 16 : 8;
      MultiplierHandle m;
      image_mult.create(m);
      const std::string out_dir = default_out_dir(image_out, "");
      marker_dir = out_dir;
      auto load = [&](const std::string& path, const std::string& synth, ImageHandle& h) {
        if (!path.empty()) {
          if (!fs::exists(path)) raise(kExitMissingFile, "image not found: " + path);
          check(acim_image_read_pgm(path.c_str(), h.out()));
        } else {
          check(acim_image_synthetic(synth.c_str(), image_size, image_size, h.out()), kExitUsage);
        }
      };
      ImageHandle a, b, result, reference;
      load(image_in, image_synth, a);
      if (sobel) {
        check(acim_sobel(a.get(), m.get(), result.out()));
        check(acim_sobel(a.get(), nullptr, reference.out()));
      } else {
        load(image_in2, image_synth2, b);
        MultiplierHandle exact;
        acim_multiplier_config ec;
        acim_multiplier_config_init(&ec);
        ec.width = image_mult.width;
        check(acim_multiplier_create(&ec, exact.out()));
        check(acim_blend(a.get(), b.get(), m.get(), result.out()));
        check(acim_blend(a.get(), b.get(), exact.get(), reference.out()));
      }
      double db = 0;
      check(acim_psnr(reference.get(), result.get(), &db));
      const std::string stem = image_op + "_" + image_mult.family + "_" +
                               std::to_string(image_mult.width);
      std::error_code ec;
      fs::create_directories(out_dir, ec);
      check(acim_image_write_pgm(result.get(), (fs::path(out_dir) / (stem + ".pgm")).c_str()));
      const std::string report = "workload,family,width,psnr_db\n" + image_op + "," +
                                 image_mult.family + "," + std::to_string(image_mult.width) +
                                 "," + fmt(db) + "\n";
      write_file(fs::path(out_dir) / (stem + "_psnr.csv"), report);
      std::printf("%s", report.c_str());
      return 0;
    }

    if (yield->parsed()) {
      yp.model = yield_model.c_str();
      std::string csv;
      if (yield_method == "compare") {
        std::vector<std::uint64_t> seeds;
        for (unsigned i = 1; i <= yield_seed_count; ++i) seeds.push_back(yp.seed + i - 1);
        OwnedString out;
        check(acim_yield_compare(&yp, seeds.data(), seeds.size(), out.out()), kExitUsage);
        csv = out.str();
      } else {
        yp.method = yield_method == "mnis" ? ACIM_YIELD_MNIS : ACIM_YIELD_MC;
        acim_yield_result r;
        check(acim_yield_run(&yp, &r), kExitUsage);
        OwnedString out;
        check(acim_yield_result_csv(&yp, &r, 1, out.out()));
        csv = out.str();
      }
      std::printf("%s", csv.c_str());
      if (!yield_out.empty()) {
        marker_dir = yield_out;
        write_file(fs::path(yield_out) / ("yield_" + yield_model + "_" + yield_method + ".csv"),
                   csv);
      }
      return 0;
    }

    if (sram->parsed()) {
      SramHandle s;
      check(acim_sram_create(&sc, s.out()), kExitConfig);
      const std::string out_dir = default_out_dir(sram_out, "");
      marker_dir = out_dir;
      acim_sram_enable_trace(s.get(), 1);
      std::mt19937_64 rng(sram_seed);
      const std::uint64_t capacity = acim_sram_capacity(s.get());
      const std::uint64_t word_mask =
          sc.word_width >= 64 ? ~0ull : (std::uint64_t{1} << sc.word_width) - 1;
      for (std::uint64_t i = 0; i < sram_ops; ++i) {
        const std::uint64_t addr = rng() % capacity;
        if (rng() & 1) {
          check(acim_sram_write(s.get(), addr, rng() & word_mask));
        } else {
          std::uint64_t word = 0;
          check(acim_sram_read(s.get(), addr, &word));
        }
      }
      OwnedString trace, lef, lib;
      check(acim_sram_trace_csv(s.get(), trace.out()));
      check(acim_sram_views(&sc, sram_name.empty() ? nullptr : sram_name.c_str(), lef.out(),
                            lib.out()));
      const std::string macro = sram_name.empty()
                                    ? "sram_" + std::to_string(capacity) + "x" +
                                          std::to_string(sc.word_width)
                                    : sram_name;
      write_file(fs::path(out_dir) / (macro + "_trace.csv"), trace.str());
      write_file(fs::path(out_dir) / (macro + ".lef"), lef.str());
      write_file(fs::path(out_dir) / (macro + ".lib"), lib.str());
      std::printf("%s: %llu words, %llu traced operations\n", macro.c_str(),
                  static_cast<unsigned long long>(capacity),
                  static_cast<unsigned long long>(sram_ops));
      return 0;
    }
  } catch (const CliError& e) {
    if (!marker_dir.empty()) acim_write_failure_marker(marker_dir.c_str(), e.message.c_str());
    std::fprintf(stderr, "acim: error: %s\n", e.message.c_str());
    return e.exit_code;
  }
  return kExitUsage;
}
