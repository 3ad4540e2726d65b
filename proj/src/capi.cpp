// Copyright 2026 The teleportsim developers
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

#include "teleportsim.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "tsim/experiment.hpp"

struct tsim_experiment {
  tsim::ExperimentSpec spec;
};

struct tsim_records {
  std::vector<tsim::SweepRecord> records;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
tsim_status guarded(Fn&& fn) {
  try {
    fn();
    return TSIM_OK;
  } catch (const tsim::ValidationError& e) {
    g_last_error = e.what();
    return TSIM_ERROR_VALIDATION;
  } catch (const tsim::SimulationError& e) {
    g_last_error = e.what();
    return TSIM_ERROR_SIMULATION;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TSIM_ERROR_SIMULATION;
  }
}

tsim_status null_arg(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  return TSIM_ERROR_VALIDATION;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

tsim_status hand_out(const std::string& s, char** out) {
  *out = dup_string(s);
  if (!*out) {
    g_last_error = "out of memory";
    return TSIM_ERROR_SIMULATION;
  }
  return TSIM_OK;
}

}  // namespace

extern "C" {

const char* tsim_version(void) { return "0.1.0"; }

const char* tsim_last_error(void) { return g_last_error.c_str(); }

void tsim_string_free(char* s) { std::free(s); }

tsim_status tsim_correction_table_format(const char* gate, char** out) {
  if (!gate) return null_arg("gate");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const tsim::CorrectionTable table = tsim::correction_table(tsim::gate_by_name(gate));
    const tsim_status st = hand_out(tsim::format_correction_table(table), out);
    if (st != TSIM_OK) throw tsim::SimulationError(g_last_error);
  });
}

tsim_status tsim_clifford_level(const char* gate, int k_max, int* out_level) {
  if (!gate) return null_arg("gate");
  if (!out_level) return null_arg("out_level");
  return guarded([&] {
    const auto level = tsim::clifford_level(tsim::gate_by_name(gate), k_max > 0 ? k_max : 4);
    *out_level = level ? *level : -1;
  });
}

tsim_status tsim_experiment_new(tsim_experiment** out) {
  if (!out) return null_arg("out");
  *out = new (std::nothrow) tsim_experiment;
  if (!*out) {
    g_last_error = "out of memory";
    return TSIM_ERROR_SIMULATION;
  }
  return TSIM_OK;
}

tsim_status tsim_experiment_parse(const char* text, tsim_experiment** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto exp = std::make_unique<tsim_experiment>();
    exp->spec = tsim::parse_spec(text);
    *out = exp.release();
  });
}

tsim_status tsim_experiment_load(const char* path, tsim_experiment** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto exp = std::make_unique<tsim_experiment>();
    exp->spec = tsim::load_spec(path);
    *out = exp.release();
  });
}

tsim_status tsim_experiment_set(tsim_experiment* exp, const char* line) {
  if (!exp) return null_arg("exp");
  if (!line) return null_arg("line");
  return guarded([&] { tsim::apply_spec_line(exp->spec, line); });
}

tsim_status tsim_experiment_run(const tsim_experiment* exp, tsim_records** out) {
  if (!exp) return null_arg("exp");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto recs = std::make_unique<tsim_records>();
    recs->records = tsim::run_sweep(exp->spec);
    *out = recs.release();
  });
}

void tsim_experiment_free(tsim_experiment* exp) { delete exp; }

size_t tsim_records_size(const tsim_records* recs) { return recs ? recs->records.size() : 0; }

tsim_status tsim_records_fidelity(const tsim_records* recs, size_t index, double* out) {
  if (!recs) return null_arg("recs");
  if (!out) return null_arg("out");
  if (index >= recs->records.size()) {
    g_last_error = "record index " + std::to_string(index) + " out of range";
    return TSIM_ERROR_VALIDATION;
  }
  *out = recs->records[index].fidelity;
  return TSIM_OK;
}

tsim_status tsim_records_branches(const tsim_records* recs, size_t index, size_t* out) {
  if (!recs) return null_arg("recs");
  if (!out) return null_arg("out");
  if (index >= recs->records.size()) {
    g_last_error = "record index " + std::to_string(index) + " out of range";
    return TSIM_ERROR_VALIDATION;
  }
  *out = recs->records[index].branch_count;
  return TSIM_OK;
}

tsim_status tsim_records_mean_fidelity(const tsim_records* recs, double* out) {
  if (!recs) return null_arg("recs");
  if (!out) return null_arg("out");
  if (recs->records.empty()) {
    g_last_error = "no records";
    return TSIM_ERROR_VALIDATION;
  }
  double acc = 0;
  for (const tsim::SweepRecord& r : recs->records) acc += r.fidelity;
  *out = acc / static_cast<double>(recs->records.size());
  return TSIM_OK;
}

tsim_status tsim_records_write_csv(const tsim_records* recs, const char* path) {
  if (!recs) return null_arg("recs");
  if (!path) return null_arg("path");
  return guarded([&] { tsim::emit_csv(recs->records, path); });
}

tsim_status tsim_records_write_plot(const tsim_records* recs, const char* path) {
  if (!recs) return null_arg("recs");
  if (!path) return null_arg("path");
  return guarded([&] { tsim::emit_plot(recs->records, path); });
}

void tsim_records_free(tsim_records* recs) { delete recs; }

tsim_status tsim_figure_list(char** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  std::string joined;
  for (const std::string& id : tsim::figure_ids()) {
    joined += id;
    joined += '\n';
  }
  return hand_out(joined, out);
}

tsim_status tsim_reproduce(const char* figure_id, const char* out_dir,
                           const char* mode_override, int* comparison_flagged) {
  if (!figure_id) return null_arg("figure_id");
  if (!out_dir) return null_arg("out_dir");
  return guarded([&] {
    const tsim::ReproduceResult result =
        tsim::run_reproduce(figure_id, out_dir, mode_override ? mode_override : "");
    if (comparison_flagged) *comparison_flagged = result.comparison_flagged ? 1 : 0;
  });
}

}  // extern "C"
