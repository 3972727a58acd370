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

#include "approxcim/approxcim.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <random>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/error_lab.hpp"
#include "core/image.hpp"
#include "core/multiplier.hpp"
#include "core/project.hpp"
#include "core/rtl_emit.hpp"
#include "core/rtl_sim.hpp"
#include "core/sram.hpp"
#include "core/yield.hpp"

using namespace approxcim;

struct acim_multiplier {
  Multiplier impl;
};

struct acim_image {
  GrayImage impl;
};

struct acim_sram {
  SramModel impl;
};

struct acim_project {
  ProjectConfig impl;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
acim_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return ACIM_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<acim_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  }
  return ACIM_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (!p) fail(ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

MultiplierConfig to_config(const acim_multiplier_config& c) {
  MultiplierConfig cfg;
  cfg.width = c.width;
  cfg.signedness = c.sign_magnitude ? Signedness::kSignMagnitude : Signedness::kUnsigned;
  switch (c.family) {
    case ACIM_FAMILY_EXACT: cfg.family = Family::kExact; break;
    case ACIM_FAMILY_APPROX42:
      cfg.family = Family::kApprox42;
      cfg.compressor = resolve_compressor(c.compressor ? c.compressor : "reference");
      if (c.region >= 0) cfg.approx_region = static_cast<unsigned>(c.region);
      break;
    case ACIM_FAMILY_LOG:
      cfg.family = Family::kLogarithmic;
      if (c.compensation >= 0) cfg.compensation = c.compensation != 0;
      break;
    default: fail(ErrorCode::kInvalidArgument, "unknown family");
  }
  if (cfg.family != Family::kApprox42 && (c.region >= 0 || c.compressor)) {
    fail(ErrorCode::kConfig, "region and compressor apply only to approx4-2");
  }
  if (cfg.family != Family::kLogarithmic && c.compensation >= 0) {
    fail(ErrorCode::kConfig, "compensation applies only to the logarithmic family");
  }
  cfg.validate();
  return cfg;
}

SramConfig to_config(const acim_sram_config& c) {
  SramConfig cfg;
  cfg.rows = c.rows;
  cfg.cols = c.cols;
  cfg.word_width = c.word_width;
  cfg.banks = c.banks;
  cfg.subarrays = c.subarrays;
  cfg.mux_ratio = c.mux_ratio;
  cfg.sae_offset = c.sae_offset;
  cfg.precharge = c.precharge;
  return cfg;
}

ErrorReport from_c(const acim_error_report& r) {
  ErrorReport e;
  e.samples = r.samples;
  e.med = r.med;
  e.nmed = r.nmed;
  e.mred = r.mred;
  e.wce = r.wce;
  e.error_rate = r.error_rate;
  return e;
}

RtlArtifact emit_for(const Multiplier& m, const std::string& name) {
  return m.config().family == Family::kLogarithmic ? emit_log_mult_rtl(m.config(), name)
                                                   : emit_verilog(m.netlist(), name);
}

YieldParams to_params(const acim_yield_params& p) {
  YieldParams y;
  y.target_fom = p.target_fom;
  y.max_sims = p.max_sims;
  y.seed = p.seed;
  y.presamples = p.presamples;
  y.sigma_s = p.sigma_s;
  return y;
}

ConfigOverrides to_overrides(const char* const* keys, const char* const* values,
                             std::size_t count) {
  ConfigOverrides out;
  if (count) {
    require(keys, "keys");
    require(values, "values");
  }
  for (std::size_t i = 0; i < count; ++i) {
    require(keys[i], "override key");
    require(values[i], "override value");
    out.emplace_back(keys[i], values[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* acim_version(void) { return kToolkitVersion; }
int acim_schema_version(void) { return kConfigSchemaVersion; }
const char* acim_last_error(void) { return g_last_error.c_str(); }
void acim_string_free(char* s) { std::free(s); }

const char* acim_status_name(acim_status status) {
  switch (status) {
    case ACIM_OK: return "ok";
    case ACIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ACIM_ERR_PARSE: return "parse error";
    case ACIM_ERR_IO: return "i/o error";
    case ACIM_ERR_OUT_OF_RANGE: return "out of range";
    case ACIM_ERR_CONFIG: return "config error";
    case ACIM_ERR_NOT_CONVERGED: return "not converged";
    case ACIM_ERR_UNSUPPORTED: return "unsupported";
    case ACIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void acim_multiplier_config_init(acim_multiplier_config* cfg) {
  if (!cfg) return;
  cfg->width = 8;
  cfg->family = ACIM_FAMILY_EXACT;
  cfg->sign_magnitude = 0;
  cfg->region = -1;
  cfg->compressor = nullptr;
  cfg->compensation = -1;
}

acim_status acim_parse_family(const char* name, acim_family* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    switch (parse_family(name)) {
      case Family::kExact: *out = ACIM_FAMILY_EXACT; break;
      case Family::kApprox42: *out = ACIM_FAMILY_APPROX42; break;
      case Family::kLogarithmic: *out = ACIM_FAMILY_LOG; break;
    }
  });
}

acim_status acim_multiplier_create(const acim_multiplier_config* cfg,
                                   acim_multiplier** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = nullptr;
    *out = new acim_multiplier{Multiplier(to_config(*cfg))};
  });
}

void acim_multiplier_destroy(acim_multiplier* m) { delete m; }

unsigned acim_multiplier_width(const acim_multiplier* m) { return m ? m->impl.width() : 0; }

acim_status acim_multiply(const acim_multiplier* m, uint64_t a, uint64_t b, uint64_t* out) {
  return guarded([&] {
    require(m, "multiplier");
    require(out, "out");
    *out = m->impl.multiply(a, b);
  });
}

acim_status acim_multiply_signed(const acim_multiplier* m, int64_t a, int64_t b,
                                 int64_t* out) {
  return guarded([&] {
    require(m, "multiplier");
    require(out, "out");
    *out = m->impl.multiply_signed(a, b);
  });
}

acim_status acim_multiply_batch(const acim_multiplier* m, const uint64_t* a,
                                const uint64_t* b, size_t count, uint64_t* out) {
  return guarded([&] {
    require(m, "multiplier");
    if (count == 0) return;
    require(a, "a");
    require(b, "b");
    require(out, "out");
    m->impl.multiply_batch({a, count}, {b, count}, {out, count});
  });
}

acim_status acim_gate_count_csv(const acim_multiplier* m, char** out) {
  return guarded([&] {
    require(m, "multiplier");
    require(out, "out");
    *out = copy_string(gate_count_csv_header() + gate_count_csv_rows(m->impl.config()));
  });
}

acim_status acim_emit_verilog(const acim_multiplier* m, const char* module_name, char** out) {
  return guarded([&] {
    require(m, "multiplier");
    require(module_name, "module_name");
    require(out, "out");
    *out = copy_string(emit_for(m->impl, module_name).text);
  });
}

acim_status acim_emit_testbench(const acim_multiplier* m, const char* module_name,
                                const uint64_t* a, const uint64_t* b, size_t count,
                                char** out) {
  return guarded([&] {
    require(m, "multiplier");
    require(module_name, "module_name");
    require(out, "out");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> vectors;
    if (count) {
      require(a, "a");
      require(b, "b");
    }
    for (size_t i = 0; i < count; ++i) vectors.emplace_back(a[i], b[i]);
    *out = copy_string(emit_testbench(m->impl.netlist(), module_name, vectors));
  });
}

acim_status acim_check_rtl(const acim_multiplier* m, size_t count, uint64_t seed,
                           int* matches) {
  return guarded([&] {
    require(m, "multiplier");
    require(matches, "matches");
    const RtlArtifact art = emit_for(m->impl, "acim_check");
    const RtlSimulator sim(art.text, art.module_name);
    std::mt19937_64 rng(seed);
    const std::uint64_t mask = (std::uint64_t{1} << m->impl.width()) - 1;
    std::vector<std::uint64_t> a(count), b(count), p(count), want(count);
    for (size_t i = 0; i < count; ++i) {
      a[i] = rng() & mask;
      b[i] = rng() & mask;
    }
    sim.evaluate_multiplier(a, b, p);
    m->impl.netlist().evaluate_batch(a, b, want);
    *matches = p == want ? 1 : 0;
  });
}

acim_status acim_sweep_errors(const acim_multiplier* m, int exhaustive, uint64_t samples,
                              uint64_t seed, acim_error_report* out) {
  return guarded([&] {
    require(m, "multiplier");
    require(out, "out");
    const ErrorReport r = sweep_errors(
        m->impl, exhaustive ? SweepMode::all() : SweepMode::sampled(samples, seed));
    *out = {r.samples, r.med, r.nmed, r.mred, r.wce, r.error_rate};
  });
}

acim_status acim_error_report_csv(const acim_multiplier* m, const acim_error_report* report,
                                  int header, char** out) {
  return guarded([&] {
    require(m, "multiplier");
    require(report, "report");
    require(out, "out");
    const std::string family(family_name(m->impl.config().family));
    *out = copy_string((header ? error_report_csv_header() : std::string()) +
                       error_report_csv_row(family, m->impl.width(), from_c(*report)));
  });
}

acim_status acim_error_report_json(const acim_multiplier* m, const acim_error_report* report,
                                   char** out) {
  return guarded([&] {
    require(m, "multiplier");
    require(report, "report");
    require(out, "out");
    const std::string family(family_name(m->impl.config().family));
    *out = copy_string(error_report_json(family, m->impl.width(), from_c(*report)));
  });
}

acim_status acim_image_read_pgm(const char* path, acim_image** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new acim_image{read_pgm_file(path)};
  });
}

acim_status acim_image_write_pgm(const acim_image* img, const char* path) {
  return guarded([&] {
    require(img, "image");
    require(path, "path");
    write_pgm_file(img->impl, path);
  });
}

acim_status acim_image_synthetic(const char* kind, unsigned width, unsigned height,
                                 acim_image** out) {
  return guarded([&] {
    require(kind, "kind");
    require(out, "out");
    *out = nullptr;
    *out = new acim_image{synthetic_image(parse_synthetic_kind(kind), width, height)};
  });
}

void acim_image_destroy(acim_image* img) { delete img; }
unsigned acim_image_width(const acim_image* img) { return img ? img->impl.width() : 0; }
unsigned acim_image_height(const acim_image* img) { return img ? img->impl.height() : 0; }
const uint8_t* acim_image_pixels(const acim_image* img) {
  return img ? img->impl.pixels().data() : nullptr;
}

acim_status acim_blend(const acim_image* a, const acim_image* b, const acim_multiplier* m,
                       acim_image** out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(m, "multiplier");
    require(out, "out");
    *out = nullptr;
    *out = new acim_image{blend_images(a->impl, b->impl, m->impl)};
  });
}

acim_status acim_sobel(const acim_image* img, const acim_multiplier* m, acim_image** out) {
  return guarded([&] {
    require(img, "image");
    require(out, "out");
    *out = nullptr;
    *out = new acim_image{m ? sobel_edge(img->impl, m->impl) : sobel_reference(img->impl)};
  });
}

acim_status acim_psnr(const acim_image* reference, const acim_image* test, double* out) {
  return guarded([&] {
    require(reference, "reference");
    require(test, "test");
    require(out, "out");
    *out = psnr(reference->impl, test->impl);
  });
}

void acim_yield_params_init(acim_yield_params* p) {
  if (!p) return;
  const YieldParams d;
  p->model = "linear";
  p->beta = 3.0;
  p->dim = 1;
  p->method = ACIM_YIELD_MC;
  p->target_fom = d.target_fom;
  p->max_sims = d.max_sims;
  p->seed = d.seed;
  p->presamples = d.presamples;
  p->sigma_s = d.sigma_s;
}

acim_status acim_yield_run(const acim_yield_params* p, acim_yield_result* out) {
  return guarded([&] {
    require(p, "params");
    require(p->model, "params.model");
    require(out, "out");
    const auto model = make_cell_model(p->model, p->beta, p->dim);
    const YieldResult r = p->method == ACIM_YIELD_MNIS ? mnis_yield(*model, to_params(*p))
                                                       : mc_yield(*model, to_params(*p));
    out->method = p->method == ACIM_YIELD_MNIS ? ACIM_YIELD_MNIS : ACIM_YIELD_MC;
    out->pf = r.pf;
    out->std_dev = r.std_dev;
    out->fom = r.fom;
    out->sims = r.sims;
    out->seed = r.seed;
    out->converged = r.converged ? 1 : 0;
  });
}

acim_status acim_yield_result_csv(const acim_yield_params* p, const acim_yield_result* r,
                                  int header, char** out) {
  return guarded([&] {
    require(p, "params");
    require(p->model, "params.model");
    require(r, "result");
    require(out, "out");
    YieldResult y;
    y.method = r->method == ACIM_YIELD_MNIS ? YieldMethod::kMnis : YieldMethod::kMonteCarlo;
    y.pf = r->pf;
    y.std_dev = r->std_dev;
    y.fom = r->fom;
    y.sims = r->sims;
    y.seed = r->seed;
    y.converged = r->converged != 0;
    *out = copy_string((header ? yield_result_csv_header() : std::string()) +
                       yield_result_csv_row(p->model, y));
  });
}

acim_status acim_yield_compare(const acim_yield_params* p, const uint64_t* seeds,
                               size_t seed_count, char** out) {
  return guarded([&] {
    require(p, "params");
    require(p->model, "params.model");
    require(seeds, "seeds");
    require(out, "out");
    const auto model = make_cell_model(p->model, p->beta, p->dim);
    *out = copy_string(
        comparison_csv(compare_methods(*model, to_params(*p), {seeds, seed_count})));
  });
}

void acim_sram_config_init(acim_sram_config* cfg) {
  if (!cfg) return;
  const SramConfig d;
  *cfg = {d.rows,      d.cols,      d.word_width, d.banks,
          d.subarrays, d.mux_ratio, d.sae_offset, d.precharge};
}

acim_status acim_sram_create(const acim_sram_config* cfg, acim_sram** out) {
  return guarded([&] {
    require(cfg, "cfg");
    require(out, "out");
    *out = nullptr;
    *out = new acim_sram{SramModel(to_config(*cfg))};
  });
}

void acim_sram_destroy(acim_sram* s) { delete s; }
uint64_t acim_sram_capacity(const acim_sram* s) { return s ? s->impl.capacity() : 0; }

acim_status acim_sram_write(acim_sram* s, uint64_t addr, uint64_t word) {
  return guarded([&] {
    require(s, "sram");
    s->impl.write(addr, word);
  });
}

acim_status acim_sram_read(acim_sram* s, uint64_t addr, uint64_t* out) {
  return guarded([&] {
    require(s, "sram");
    require(out, "out");
    *out = s->impl.read(addr);
  });
}

acim_status acim_sram_pe_cycle(acim_sram* s, uint64_t addr, uint64_t operand,
                               const acim_multiplier* m, uint64_t* out) {
  return guarded([&] {
    require(s, "sram");
    require(m, "multiplier");
    require(out, "out");
    *out = pe_cycle(s->impl, addr, operand, m->impl);
  });
}

void acim_sram_enable_trace(acim_sram* s, int on) {
  if (s) s->impl.enable_trace(on != 0);
}

acim_status acim_sram_trace_csv(const acim_sram* s, char** out) {
  return guarded([&] {
    require(s, "sram");
    require(out, "out");
    *out = copy_string(s->impl.trace_csv());
  });
}

acim_status acim_sram_views(const acim_sram_config* cfg, const char* macro_name, char** lef,
                            char** lib) {
  return guarded([&] {
    require(cfg, "cfg");
    require(lef, "lef");
    require(lib, "lib");
    const SramConfig c = to_config(*cfg);
    const AbstractViews v =
        emit_abstract_views(c, macro_name ? std::string(macro_name) : default_macro_name(c));
    char* lef_text = copy_string(v.lef);
    try {
      *lib = copy_string(v.lib);
    } catch (...) {
      std::free(lef_text);
      throw;
    }
    *lef = lef_text;
  });
}

acim_status acim_project_load(const char* path, const char* const* keys,
                              const char* const* values, size_t count, acim_project** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new acim_project{load_project_config(path, to_overrides(keys, values, count))};
  });
}

acim_status acim_project_parse(const char* text, const char* base_dir,
                               const char* const* keys, const char* const* values,
                               size_t count, acim_project** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = nullptr;
    *out = new acim_project{parse_project_config(text, base_dir ? base_dir : ".",
                                                 to_overrides(keys, values, count))};
  });
}

void acim_project_destroy(acim_project* p) { delete p; }

const char* acim_project_output_dir(const acim_project* p) {
  return p ? p->impl.output_dir.c_str() : "";
}

uint64_t acim_project_seed(const acim_project* p) { return p ? p->impl.seed : 0; }

acim_status acim_project_generate(const acim_project* p, const char* out_dir,
                                  char** file_list) {
  return guarded([&] {
    require(p, "project");
    require(out_dir, "out_dir");
    std::vector<Artifact> artifacts;
    try {
      artifacts = generate_artifacts(p->impl);
    } catch (const std::exception& e) {
      write_failure_marker(out_dir, e.what());
      throw;
    }
    write_artifacts(artifacts, out_dir);
    if (file_list) {
      std::string list;
      for (const Artifact& a : artifacts) list += a.path + "\n";
      *file_list = copy_string(list);
    }
  });
}

void acim_write_failure_marker(const char* out_dir, const char* message) {
  if (!out_dir) return;
  try {
    write_failure_marker(out_dir, message ? message : "");
  } catch (...) {
  }
}

}  // extern "C"
