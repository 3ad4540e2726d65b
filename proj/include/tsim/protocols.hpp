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

#include "tsim/netsim.hpp"
#include "tsim/pauli.hpp"

namespace tsim {

// Input preparation: per input qubit, gates applied in order to |0>.
struct InputSpec {
  std::vector<std::vector<GateMatrix>> preps;

  static InputSpec plus_states(int n_inputs);  // H on every input
};

struct ProtocolOptions {
  RunOptions run;
  // Leave on. Off skips the classically controlled layer entirely, which is
  // only useful to show the corrections carry the protocol.
  bool apply_corrections = true;
};

struct BranchResult {
  double probability = 1.0;
  std::vector<std::uint8_t> bits;  // measurement records in emission order
  DensityMatrix output;            // reduced state of the outputs, logical wire order
  double fidelity = 0.0;
};

struct TeleportResult {
  Statevector ideal;               // what a perfect run would place on the outputs
  std::vector<QubitRef> outputs;   // output qubits in logical wire order
  std::vector<BranchResult> branches;
  double fidelity = 0.0;           // probability-weighted (exact) or the trajectory's (sampled)

  std::size_t branch_count() const { return branches.size(); }
};

// Canonical topologies. Node order fixes the roles: in the two-node network
// the first node prepares and measures, the second holds the outputs; in the
// star networks the hub applies the gate.
NetworkConfig two_node_network(const LinkNoise& link, const DeviceNoise& sender,
                               const DeviceNoise& receiver);
NetworkConfig three_node_network(const LinkNoise& link0, const LinkNoise& link1,
                                 const DeviceNoise& input0, const DeviceNoise& input1,
                                 const DeviceNoise& gate_node);
NetworkConfig four_node_network(const std::array<LinkNoise, 3>& links,
                                const std::array<DeviceNoise, 3>& inputs,
                                const DeviceNoise& gate_node);

// Plain state teleportation over a two-node network.
TeleportResult state_teleport(const Simulation& sim, const InputSpec& input,
                              const ProtocolOptions& options = {});

// Teleports a state through a single-qubit gate u (Clifford level <= 2)
// applied by the receiver before the corrections.
TeleportResult single_gate_teleport(const Simulation& sim, const GateMatrix& u,
                                    const InputSpec& input, const ProtocolOptions& options = {});

// Both wires of a two-qubit gate teleported from one sender to one receiver.
TeleportResult two_node_gate_teleport(const Simulation& sim, const GateMatrix& u,
                                      const InputSpec& input, const ProtocolOptions& options = {});

// Two input nodes each teleport one wire into the hub, which applies u and
// the classically controlled corrections.
TeleportResult three_node_gate_teleport(const Simulation& sim, const GateMatrix& u,
                                        const InputSpec& input, const ProtocolOptions& options = {});

// Toffoli across a four-node star; the corrections include genuine Pauli
// sums, realized as exponential circuits.
TeleportResult toffoli_teleport(const Simulation& sim, const InputSpec& input,
                                const ProtocolOptions& options = {});

}  // namespace tsim
