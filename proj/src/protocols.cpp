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

#include "tsim/protocols.hpp"

#include <set>
#include <string>

namespace tsim {

namespace {

std::string pair_key(const std::string& a, const std::string& b) {
  return a < b ? a + "|" + b : b + "|" + a;
}

struct StarRoles {
  std::string hub;
  std::vector<std::string> leaves;  // config node order
};

// A protocol network is a star: every quantum link joins the hub to one
// leaf, classical links mirror them. With a single leaf the roles follow
// node order (first node leaf, second hub).
StarRoles star_roles(const NetworkConfig& cfg, std::size_t n_leaves, const std::string& proto) {
  if (cfg.nodes.size() != n_leaves + 1) {
    throw ValidationError(proto + " needs " + std::to_string(n_leaves + 1) + " nodes, config has " +
                          std::to_string(cfg.nodes.size()));
  }
  if (cfg.quantum_links.size() != n_leaves || cfg.classical_links.size() != n_leaves) {
    throw ValidationError(proto + " needs exactly " + std::to_string(n_leaves) +
                          " quantum and classical link(s) into the hub");
  }

  StarRoles roles;
  if (n_leaves == 1) {
    roles.leaves = {cfg.nodes[0].name};
    roles.hub = cfg.nodes[1].name;
  } else {
    for (const NodeConfig& n : cfg.nodes) {
      bool in_all = true;
      for (const QuantumLinkConfig& l : cfg.quantum_links) {
        if (l.node_a != n.name && l.node_b != n.name) {
          in_all = false;
          break;
        }
      }
      if (in_all) {
        roles.hub = n.name;
        break;
      }
    }
    if (roles.hub.empty()) {
      throw ValidationError(proto + ": no hub node shared by every quantum link");
    }
    for (const NodeConfig& n : cfg.nodes) {
      if (n.name != roles.hub) roles.leaves.push_back(n.name);
    }
  }

  std::set<std::string> quantum, classical;
  for (const QuantumLinkConfig& l : cfg.quantum_links) quantum.insert(pair_key(l.node_a, l.node_b));
  for (const ClassicalLinkConfig& l : cfg.classical_links) classical.insert(pair_key(l.node_a, l.node_b));
  for (const std::string& leaf : roles.leaves) {
    if (!quantum.count(pair_key(leaf, roles.hub)) || !classical.count(pair_key(leaf, roles.hub))) {
      throw ValidationError(proto + ": node '" + leaf + "' is not linked to hub '" + roles.hub + "'");
    }
  }
  return roles;
}

void check_input(const InputSpec& input, int n_wires, const std::string& proto) {
  if (static_cast<int>(input.preps.size()) != n_wires) {
    throw ValidationError(proto + " expects " + std::to_string(n_wires) + " input(s), got " +
                          std::to_string(input.preps.size()));
  }
  for (const auto& gates : input.preps) {
    for (const GateMatrix& g : gates) {
      if (g.n_qubits != 1) {
        throw ValidationError("input preparation gate '" + g.name + "' is not single-qubit");
      }
    }
  }
}

void check_clifford(const GateMatrix& u, const std::string& proto) {
  const std::optional<int> level = clifford_level(u);
  if (!level || *level > 2) {
    throw ValidationError(proto + " supports gates up to Clifford-hierarchy level 2; gate '" +
                          u.name + "' is at level " + (level ? std::to_string(*level) : "above 4"));
  }
}

std::string wire_name(const char* prefix, int w) { return prefix + std::to_string(w); }

// One leaf: establish a pair per wire, prepare, Bell-measure, report.
Program leaf_program(const std::string& node, const std::string& hub,
                     const std::vector<int>& wires, const InputSpec& input) {
  const GateMatrix cnot = gate_by_name("CNOT");
  const GateMatrix h = gate_by_name("H");

  Program p;
  p.node = node;
  for (int w : wires) p.epr(hub, wire_name("e", w));
  p.flush();
  for (int w : wires) {
    p.alloc(wire_name("q", w));
    for (const GateMatrix& g : input.preps[w]) p.gate(g, {wire_name("q", w)});
  }
  p.flush();
  for (int w : wires) {
    p.gate(cnot, {wire_name("q", w), wire_name("e", w)});
    p.gate(h, {wire_name("q", w)});
    p.measure(wire_name("e", w), wire_name("me", w));
    p.measure(wire_name("q", w), wire_name("mq", w));
  }
  p.flush();
  for (int w : wires) p.send(hub, wire_name("corr", w), {wire_name("me", w), wire_name("mq", w)});
  return p;
}

std::vector<Instruction> circuit_body(const CorrectionCircuit& circuit,
                                      const std::vector<std::string>& wire_vars) {
  std::vector<Instruction> body;
  for (const CircuitGate& g : circuit.gates) {
    std::vector<std::string> targets;
    targets.reserve(g.targets.size());
    for (int t : g.targets) targets.push_back(wire_vars[t]);
    body.push_back(Program::gate_instruction(g.materialize(), targets));
  }
  return body;
}

// The hub: one pair per wire, the gate, then per wire the X-entry correction
// ahead of the Z-entry one, wires in ascending order. That sequence inverts
// the residual X^a Z^m teleportation error conjugated through the gate.
Program hub_program(const std::string& node, const std::vector<std::string>& leaf_of_wire,
                    const GateMatrix* u, const CorrectionTable& table, bool corrections) {
  const int n_wires = table.n_qubits;
  Program p;
  p.node = node;

  std::vector<std::string> wire_vars;
  for (int w = 0; w < n_wires; ++w) wire_vars.push_back(wire_name("g", w));
  for (int w = 0; w < n_wires; ++w) p.epr(leaf_of_wire[w], wire_vars[w]);
  p.flush();
  if (u) p.gate(*u, wire_vars);
  p.flush();
  for (int w = 0; w < n_wires; ++w) {
    p.recv(leaf_of_wire[w], wire_name("corr", w), {wire_name("x", w), wire_name("z", w)});
  }
  if (corrections) {
    for (int w = 0; w < n_wires; ++w) {
      const CorrectionEntry& x_entry = table.entries[2 * w];
      const CorrectionEntry& z_entry = table.entries[2 * w + 1];
      p.cond(wire_name("x", w), circuit_body(correction_circuit(x_entry), wire_vars));
      p.cond(wire_name("z", w), circuit_body(correction_circuit(z_entry), wire_vars));
    }
  }
  return p;
}

Statevector ideal_output(const InputSpec& input, const GateMatrix* u) {
  const int n = static_cast<int>(input.preps.size());
  Statevector psi = Statevector::zero_state(n);
  for (int w = 0; w < n; ++w) {
    for (const GateMatrix& g : input.preps[w]) apply_gate(psi, g, {w});
  }
  if (u) {
    std::vector<int> all;
    for (int w = 0; w < n; ++w) all.push_back(w);
    apply_gate(psi, *u, all);
  }
  return psi;
}

// apply_u: gate the hub really applies (null for plain state teleportation).
// correction_source: unitary whose conjugated basis drives the corrections.
TeleportResult run_star_protocol(const Simulation& sim, const std::string& proto,
                                 std::size_t n_leaves, const GateMatrix* apply_u,
                                 const GateMatrix& correction_source, const InputSpec& input,
                                 const ProtocolOptions& options) {
  const int n_wires = correction_source.n_qubits;
  check_input(input, n_wires, proto);
  const StarRoles roles = star_roles(sim.config(), n_leaves, proto);
  const CorrectionTable table = correction_table(correction_source);

  // One leaf owns every wire, or each leaf owns exactly one.
  std::vector<std::string> leaf_of_wire;
  std::vector<std::vector<int>> wires_of_leaf(n_leaves);
  for (int w = 0; w < n_wires; ++w) {
    const std::size_t leaf = n_leaves == 1 ? 0 : static_cast<std::size_t>(w);
    leaf_of_wire.push_back(roles.leaves[leaf]);
    wires_of_leaf[leaf].push_back(w);
  }

  std::vector<Program> programs;
  for (std::size_t l = 0; l < n_leaves; ++l) {
    programs.push_back(leaf_program(roles.leaves[l], roles.hub, wires_of_leaf[l], input));
  }
  programs.push_back(hub_program(roles.hub, leaf_of_wire, apply_u, table, options.apply_corrections));

  const RunOutcome outcome = sim.run(programs, options.run);

  TeleportResult result;
  result.ideal = ideal_output(input, apply_u);

  std::vector<int> slots;
  for (int w = 0; w < n_wires; ++w) {
    const int global = outcome.qubit_vars.at(roles.hub).at(wire_name("g", w));
    const int slot = outcome.slot_of(global);
    if (slot < 0) throw SimulationError(proto + ": output qubit left the dense state");
    slots.push_back(slot);
    result.outputs.push_back(outcome.active_refs[slot]);
  }

  double total = 0.0, weighted = 0.0;
  for (const RunBranch& rb : outcome.branches) {
    BranchResult br;
    br.probability = rb.probability;
    for (const MeasurementRecord& m : rb.measurements) br.bits.push_back(m.value);
    br.output = partial_trace(rb.state, slots);
    br.fidelity = fidelity_pure(br.output, result.ideal);
    total += br.probability;
    weighted += br.probability * br.fidelity;
    result.branches.push_back(std::move(br));
  }
  if (options.run.mode == RunOptions::Mode::Sampled) {
    result.fidelity = result.branches.front().fidelity;
  } else {
    if (total <= 0.0) throw SimulationError(proto + ": no reachable branch");
    result.fidelity = weighted / total;
  }
  return result;
}

}  // namespace

InputSpec InputSpec::plus_states(int n_inputs) {
  InputSpec spec;
  spec.preps.assign(n_inputs, {gate_by_name("H")});
  return spec;
}

NetworkConfig two_node_network(const LinkNoise& link, const DeviceNoise& sender,
                               const DeviceNoise& receiver) {
  return build_network({{"sender", sender}, {"receiver", receiver}},
                       {{"sender", "receiver", link}},
                       {{"sender", "receiver"}});
}

NetworkConfig three_node_network(const LinkNoise& link0, const LinkNoise& link1,
                                 const DeviceNoise& input0, const DeviceNoise& input1,
                                 const DeviceNoise& gate_node) {
  return build_network({{"input0", input0}, {"input1", input1}, {"gate", gate_node}},
                       {{"input0", "gate", link0}, {"input1", "gate", link1}},
                       {{"input0", "gate"}, {"input1", "gate"}});
}

NetworkConfig four_node_network(const std::array<LinkNoise, 3>& links,
                                const std::array<DeviceNoise, 3>& inputs,
                                const DeviceNoise& gate_node) {
  return build_network({{"input0", inputs[0]}, {"input1", inputs[1]}, {"input2", inputs[2]},
                        {"gate", gate_node}},
                       {{"input0", "gate", links[0]}, {"input1", "gate", links[1]},
                        {"input2", "gate", links[2]}},
                       {{"input0", "gate"}, {"input1", "gate"}, {"input2", "gate"}});
}

TeleportResult state_teleport(const Simulation& sim, const InputSpec& input,
                              const ProtocolOptions& options) {
  const GateMatrix identity = gate_by_name("I");
  return run_star_protocol(sim, "state_teleport", 1, nullptr, identity, input, options);
}

TeleportResult single_gate_teleport(const Simulation& sim, const GateMatrix& u,
                                    const InputSpec& input, const ProtocolOptions& options) {
  if (u.n_qubits != 1) {
    throw ValidationError("single_gate_teleport takes a single-qubit gate, '" + u.name + "' acts on " +
                          std::to_string(u.n_qubits));
  }
  check_clifford(u, "single_gate_teleport");
  return run_star_protocol(sim, "single_gate_teleport", 1, &u, u, input, options);
}

TeleportResult two_node_gate_teleport(const Simulation& sim, const GateMatrix& u,
                                      const InputSpec& input, const ProtocolOptions& options) {
  if (u.n_qubits != 2) {
    throw ValidationError("two_node_gate_teleport takes a two-qubit gate, '" + u.name + "' acts on " +
                          std::to_string(u.n_qubits));
  }
  check_clifford(u, "two_node_gate_teleport");
  return run_star_protocol(sim, "two_node_gate_teleport", 1, &u, u, input, options);
}

TeleportResult three_node_gate_teleport(const Simulation& sim, const GateMatrix& u,
                                        const InputSpec& input, const ProtocolOptions& options) {
  if (u.n_qubits != 2) {
    throw ValidationError("three_node_gate_teleport takes a two-qubit gate, '" + u.name +
                          "' acts on " + std::to_string(u.n_qubits));
  }
  check_clifford(u, "three_node_gate_teleport");
  return run_star_protocol(sim, "three_node_gate_teleport", 2, &u, u, input, options);
}

TeleportResult toffoli_teleport(const Simulation& sim, const InputSpec& input,
                                const ProtocolOptions& options) {
  const GateMatrix toff = gate_by_name("TOFF");
  return run_star_protocol(sim, "toffoli_teleport", 3, &toff, toff, input, options);
}

}  // namespace tsim
