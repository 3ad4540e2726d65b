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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tsim/protocols.hpp"

namespace tsim {

enum class ProtocolKind { StateTeleport, SingleGate, TwoNodeGate, ThreeNodeGate, Toffoli };

int wire_count(ProtocolKind kind);
std::string protocol_name(ProtocolKind kind);

struct SweepParam {
  std::string path;
  std::vector<double> values;
};

// A sweep description, read from `key = value` lines:
//
//   protocol = three_node        # state | single | two_node | three_node | toffoli
//   gate = CNOT
//   mode = sampled               # or exact (one deterministic record per point)
//   runs = 100
//   seed = 7
//   input.0 = RZ(0.3) RX(1.2)    # prep gates for wire 0; unset wires get H
//   link.fidelity = 0.9          # or link.input0-gate.fidelity = ...
//   device.gate.depol = 0.01
//   sweep link.fidelity = 0.5:1.0:0.05
//   sweep device.depol = 0,0.05,0.1
struct ExperimentSpec {
  ProtocolKind protocol = ProtocolKind::StateTeleport;
  bool protocol_set = false;
  std::string gate;
  RunOptions::Mode mode = RunOptions::Mode::Sampled;
  int runs = 100;
  std::uint64_t base_seed = 0;
  std::map<int, std::vector<std::string>> input_preps;
  std::vector<std::pair<std::string, double>> base_params;  // applied in file order
  std::vector<SweepParam> sweeps;
};

// Applies one config line (syntax check only; no cross-field validation).
void apply_spec_line(ExperimentSpec& spec, const std::string& line);
// Cross-field validation: protocol/gate fit, noise paths and ranges, inputs.
void finalize_spec(const ExperimentSpec& spec);

ExperimentSpec parse_spec(const std::string& text);  // parse errors carry line numbers
ExperimentSpec load_spec(const std::string& path);

struct SweepRecord {
  std::vector<std::pair<std::string, double>> params;  // swept values at this point
  int run = 0;
  std::uint64_t seed = 0;
  double fidelity = 0.0;
  std::size_t branch_count = 0;
};

// Cartesian product of the sweeps; sampled mode draws `runs` trajectories
// per point with consecutive seeds, exact mode emits one record per point.
std::vector<SweepRecord> run_sweep(const ExperimentSpec& spec);

// Columns: swept parameter paths (alphabetical), run, seed, fidelity.
// Identical inputs produce identical bytes.
void emit_csv(const std::vector<SweepRecord>& records, const std::string& path);

// SVG curve of mean fidelity with a +-1 standard deviation band; requires
// exactly one swept parameter.
void emit_plot(const std::vector<SweepRecord>& records, const std::string& path);

struct FigureSweep {
  std::string label;
  ExperimentSpec spec;
};

std::vector<std::string> figure_ids();
std::vector<FigureSweep> builtin_figure(const std::string& figure_id);

struct ComparisonPoint {
  double link_fidelity = 1.0;
  double depol = 0.0;
  double link_curve = 0.0;    // fidelity with only the links degraded
  double device_curve = 0.0;  // fidelity with only the devices degraded
};

struct ComparisonReport {
  std::string protocol_label;
  std::vector<ComparisonPoint> points;  // matched noise steps, mildest first
  bool ordering_holds = true;           // device_curve <= link_curve + 1e-9 everywhere

  std::string to_text() const;
};

// Exact-mode sweep pairing a link-only and a device-only degradation grid
// for the same protocol. The grids must have equal length.
ComparisonReport link_vs_device_comparison(ProtocolKind kind, const std::string& gate,
                                           const std::vector<double>& link_grid,
                                           const std::vector<double>& depol_grid);

std::vector<double> default_link_grid();   // 1.00 down to 0.50, step 0.05
std::vector<double> default_depol_grid();  // 0.00 up to 0.20, step 0.02

struct ReproduceResult {
  std::vector<std::string> files;
  bool comparison_flagged = false;  // noise-comparison found an ordering violation
};

// Writes the CSVs, the SVG and (for noise-comparison) the report for one
// built-in figure into out_dir. mode_override: "", "exact" or "sampled".
ReproduceResult run_reproduce(const std::string& figure_id, const std::string& out_dir,
                              const std::string& mode_override = "");

}  // namespace tsim
