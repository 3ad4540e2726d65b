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

// Command line front end; everything goes through the C API.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "teleportsim.h"

namespace {

constexpr const char* kSpecHelp =
    "Config text, one 'key = value' per line ('#' comments):\n"
    "  protocol = state | single | two_node | three_node | toffoli\n"
    "  gate = CNOT | DCNOT | CZ | SWAP | H | S | ...\n"
    "  mode = exact | sampled\n"
    "  runs = 100            (sampled trajectories per sweep point)\n"
    "  seed = 7\n"
    "  input.0 = RZ(0.3) RX(1.2)   (prep gates for wire 0; default H)\n"
    "  link.fidelity = 0.9          (all links, or link.input0-gate.fidelity)\n"
    "  device.gate.depol = 0.01     (also: single_qubit_depol,\n"
    "                                two_qubit_depol, measurement_flip)\n"
    "  sweep link.fidelity = 0.5:1.0:0.05   (or a comma list)\n";

int report(tsim_status status) {
  if (status == TSIM_OK) return 0;
  std::fprintf(stderr, "error: %s\n", tsim_last_error());
  return static_cast<int>(status);
}

int run_corrections(const std::string& gate) {
  char* text = nullptr;
  tsim_status st = tsim_correction_table_format(gate.c_str(), &text);
  if (st != TSIM_OK) return report(st);
  std::fputs(text, stdout);
  tsim_string_free(text);

  int level = 0;
  st = tsim_clifford_level(gate.c_str(), 0, &level);
  if (st != TSIM_OK) return report(st);
  if (level >= 0) {
    std::printf("clifford hierarchy level: %d\n", level);
  } else {
    std::printf("clifford hierarchy level: above the search bound\n");
  }
  return 0;
}

struct TeleportArgs {
  std::string protocol;
  std::string gate;
  int nodes = 0;
  std::string mode = "exact";
  std::uint64_t seed = 0;
  int runs = 100;
  double link_fidelity = -1;
  double depol = -1;
  std::string csv;
  std::string plot;
};

int expected_nodes(const std::string& protocol) {
  if (protocol == "three_node") return 3;
  if (protocol == "toffoli") return 4;
  return 2;
}

int run_teleport(const TeleportArgs& args) {
  if (args.nodes != 0 && args.nodes != expected_nodes(args.protocol)) {
    std::fprintf(stderr, "error: protocol '%s' runs on %d nodes, got --nodes %d\n",
                 args.protocol.c_str(), expected_nodes(args.protocol), args.nodes);
    return 1;
  }

  std::string text = "protocol = " + args.protocol + "\n";
  if (!args.gate.empty()) text += "gate = " + args.gate + "\n";
  text += "mode = " + args.mode + "\n";
  text += "seed = " + std::to_string(args.seed) + "\n";
  text += "runs = " + std::to_string(args.runs) + "\n";
  if (args.link_fidelity >= 0) {
    text += "link.fidelity = " + std::to_string(args.link_fidelity) + "\n";
  }
  if (args.depol >= 0) text += "device.depol = " + std::to_string(args.depol) + "\n";

  tsim_experiment* exp = nullptr;
  tsim_status st = tsim_experiment_parse(text.c_str(), &exp);
  if (st != TSIM_OK) return report(st);

  tsim_records* recs = nullptr;
  st = tsim_experiment_run(exp, &recs);
  tsim_experiment_free(exp);
  if (st != TSIM_OK) return report(st);

  const size_t n = tsim_records_size(recs);
  double mean = 0;
  st = tsim_records_mean_fidelity(recs, &mean);
  if (st != TSIM_OK) {
    tsim_records_free(recs);
    return report(st);
  }

  std::printf("protocol: %s%s%s\n", args.protocol.c_str(), args.gate.empty() ? "" : " ",
              args.gate.c_str());
  std::printf("mode: %s, seed %llu\n", args.mode.c_str(),
              static_cast<unsigned long long>(args.seed));
  if (args.mode == "exact") {
    size_t branches = 0;
    tsim_records_branches(recs, 0, &branches);
    std::printf("fidelity: %.12g (%zu measurement branches)\n", mean, branches);
  } else {
    std::printf("mean fidelity over %zu runs: %.12g\n", n, mean);
  }

  if (!args.csv.empty()) {
    st = tsim_records_write_csv(recs, args.csv.c_str());
    if (st != TSIM_OK) {
      tsim_records_free(recs);
      return report(st);
    }
    std::printf("wrote %s\n", args.csv.c_str());
  }
  if (!args.plot.empty()) {
    st = tsim_records_write_plot(recs, args.plot.c_str());
    if (st != TSIM_OK) {
      tsim_records_free(recs);
      return report(st);
    }
    std::printf("wrote %s\n", args.plot.c_str());
  }
  tsim_records_free(recs);
  return 0;
}

int run_sweep_cmd(const std::string& spec_path, const std::string& csv, const std::string& plot) {
  tsim_experiment* exp = nullptr;
  tsim_status st = tsim_experiment_load(spec_path.c_str(), &exp);
  if (st != TSIM_OK) return report(st);

  tsim_records* recs = nullptr;
  st = tsim_experiment_run(exp, &recs);
  tsim_experiment_free(exp);
  if (st != TSIM_OK) return report(st);

  double mean = 0;
  tsim_status mst = tsim_records_mean_fidelity(recs, &mean);
  std::printf("records: %zu\n", tsim_records_size(recs));
  if (mst == TSIM_OK) std::printf("mean fidelity: %.12g\n", mean);

  if (!csv.empty()) {
    st = tsim_records_write_csv(recs, csv.c_str());
    if (st != TSIM_OK) {
      tsim_records_free(recs);
      return report(st);
    }
    std::printf("wrote %s\n", csv.c_str());
  }
  if (!plot.empty()) {
    st = tsim_records_write_plot(recs, plot.c_str());
    if (st != TSIM_OK) {
      tsim_records_free(recs);
      return report(st);
    }
    std::printf("wrote %s\n", plot.c_str());
  }
  tsim_records_free(recs);
  return 0;
}

int run_reproduce_cmd(const std::string& figure, const std::string& out_dir,
                      const std::string& mode, bool list) {
  if (list) {
    char* ids = nullptr;
    const tsim_status st = tsim_figure_list(&ids);
    if (st != TSIM_OK) return report(st);
    std::fputs(ids, stdout);
    tsim_string_free(ids);
    return 0;
  }
  if (figure.empty()) {
    std::fprintf(stderr, "error: pass a figure id or --list\n");
    return 1;
  }
  int flagged = 0;
  const tsim_status st = tsim_reproduce(figure.c_str(), out_dir.c_str(),
                                        mode.empty() ? nullptr : mode.c_str(), &flagged);
  if (st != TSIM_OK) return report(st);
  std::printf("wrote figure '%s' into %s\n", figure.c_str(), out_dir.c_str());
  if (flagged) {
    std::printf("note: the link/device ordering did not hold; "
                "the comparison is parameterization-dependent\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("teleportsim ") + tsim_version() +
               " - gate teleportation over noisy quantum networks"};
  app.require_subcommand(1);

  int rc = 0;

  auto* corrections = app.add_subcommand("corrections",
                                         "Print the classically controlled correction table");
  std::string corrections_gate;
  corrections->add_option("gate", corrections_gate, "Gate name (CNOT, DCNOT, CZ, SWAP, TOFF, ...)")
      ->required();
  corrections->callback([&] { rc = run_corrections(corrections_gate); });

  auto* teleport = app.add_subcommand("teleport", "Run one teleportation protocol");
  TeleportArgs targs;
  teleport->add_option("protocol", targs.protocol, "state | single | two_node | three_node | toffoli")
      ->required()
      ->check(CLI::IsMember({"state", "single", "two_node", "three_node", "toffoli"}));
  teleport->add_option("--gate", targs.gate, "Gate to teleport through");
  teleport->add_option("--nodes", targs.nodes, "Node count; checked against the protocol")
      ->check(CLI::IsMember({2, 3, 4}));
  teleport->add_option("--mode", targs.mode, "exact | sampled (default exact)")
      ->check(CLI::IsMember({"exact", "sampled"}));
  teleport->add_option("--seed", targs.seed, "RNG seed (default 0)");
  teleport->add_option("--runs", targs.runs, "Sampled trajectories (default 100)");
  teleport->add_option("--link-fidelity", targs.link_fidelity, "EPR fidelity for every link");
  teleport->add_option("--depol", targs.depol, "Depolarizing probability for every device");
  teleport->add_option("--csv", targs.csv, "Write per-run records to this CSV file");
  teleport->add_option("--plot", targs.plot, "Write an SVG plot to this file");
  teleport->callback([&] { rc = run_teleport(targs); });

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a config file");
  std::string spec_path, sweep_csv, sweep_plot;
  sweep->add_option("--spec", spec_path, std::string("Config file. ") + kSpecHelp)->required();
  sweep->add_option("--csv", sweep_csv, "Write the records to this CSV file");
  sweep->add_option("--plot", sweep_plot, "Write an SVG plot to this file");
  sweep->callback([&] { rc = run_sweep_cmd(spec_path, sweep_csv, sweep_plot); });

  auto* reproduce = app.add_subcommand("reproduce", "Regenerate a built-in figure");
  std::string figure, out_dir = "figures", mode_override;
  bool list = false;
  reproduce->add_option("figure", figure, "Figure id (see --list)");
  reproduce->add_option("--out", out_dir, "Output directory (default figures)");
  reproduce->add_option("--mode", mode_override, "Override the figure's mode: exact | sampled")
      ->check(CLI::IsMember({"exact", "sampled"}));
  reproduce->add_flag("--list", list, "List the built-in figure ids");
  reproduce->callback([&] { rc = run_reproduce_cmd(figure, out_dir, mode_override, list); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return rc;
}
