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

#include "tsim/noise.hpp"
#include "tsim/qmath.hpp"

namespace tsim {

struct NodeConfig {
  std::string name;
  DeviceNoise noise;
};

struct QuantumLinkConfig {
  std::string node_a, node_b;
  LinkNoise noise;
};

struct ClassicalLinkConfig {
  std::string node_a, node_b;
};

struct NetworkConfig {
  std::vector<NodeConfig> nodes;
  std::vector<QuantumLinkConfig> quantum_links;
  std::vector<ClassicalLinkConfig> classical_links;
};

struct QubitRef {
  std::string node;
  int local_id = -1;
  int global_index = -1;
};

struct ClassicalMessage {
  std::string sender;
  std::string tag;
  std::vector<std::uint8_t> payload;
};

// One node-local instruction. Programs are straight-line instruction lists;
// the only control flow is Cond, whose body holds gates alone, so a runtime
// snapshot (instruction pointers plus state) is trivially copyable and
// measurement branch points can fork the whole simulation.
struct Instruction {
  enum class Kind { Alloc, Epr, Gate, Measure, Send, Recv, Flush, Cond };

  Kind kind{};
  std::string qubit;               // Alloc, Epr, Measure
  std::string peer;                // Epr, Send, Recv
  std::string tag;                 // Send, Recv
  std::string bit;                 // Measure, Cond
  std::vector<std::string> bits;   // Send, Recv payload bit names
  GateMatrix gate;                 // Gate
  std::vector<std::string> qubits; // Gate targets
  std::vector<Instruction> body;   // Cond (Gate instructions only)
};

struct Program {
  std::string node;
  std::vector<Instruction> instructions;

  Program& alloc(const std::string& qubit);
  Program& epr(const std::string& peer, const std::string& qubit);
  Program& gate(const GateMatrix& g, const std::vector<std::string>& qubits);
  Program& measure(const std::string& qubit, const std::string& bit);
  Program& send(const std::string& peer, const std::string& tag, const std::vector<std::string>& bits);
  Program& recv(const std::string& peer, const std::string& tag, const std::vector<std::string>& bits);
  Program& flush();
  Program& cond(const std::string& bit, std::vector<Instruction> body);

  static Instruction gate_instruction(const GateMatrix& g, const std::vector<std::string>& qubits);
};

struct RunOptions {
  enum class Mode { Exact, Sampled };
  Mode mode = Mode::Exact;
  std::uint64_t seed = 0;
};

struct MeasurementRecord {
  std::string node;
  std::string bit;
  std::uint8_t value = 0;  // recorded value, after any readout flip
};

struct RunBranch {
  double probability = 1.0;
  std::vector<MeasurementRecord> measurements;
  DensityMatrix state;  // unmeasured qubits, slot order given by RunOutcome::active_globals
};

struct RunOutcome {
  std::vector<RunBranch> branches;  // exact: all reachable branches; sampled: one trajectory
  std::vector<int> active_globals;  // global qubit index per state slot
  std::vector<QubitRef> active_refs;
  // Final qubit-variable bindings, node name -> variable -> global index.
  std::map<std::string, std::map<std::string, int>> qubit_vars;

  int slot_of(int global_index) const;
};

// A quantum network with a global density-matrix back end. Qubits live in
// one shared state; every qubit is owned by a node and only that node's
// program may touch it. Measured qubits leave the dense state immediately
// (their classical record remains), which keeps exact-mode branch
// enumeration tractable; global indices stay stable.
class Simulation {
 public:
  explicit Simulation(NetworkConfig config);

  const NetworkConfig& config() const { return config_; }

  // Entangles a fresh qubit pair across the quantum link joining the two
  // nodes, using that link's Werner fidelity.
  std::pair<QubitRef, QubitRef> create_epr(const std::string& node_a, const std::string& node_b);

  // Dense state over currently active qubits, slot order = allocation order.
  const DensityMatrix& global_state() const;

  // Runs one program per node (nodes without a program stay idle) under a
  // deterministic round-robin schedule with flush barriers. Exact mode
  // enumerates measurement branches depth-first, outcome 0 first; sampled
  // mode draws one trajectory from the seeded generator.
  RunOutcome run(const std::vector<Program>& programs, const RunOptions& options) const;

 private:
  friend class Executor;

  struct SeedQubit {
    int node = -1;  // index into config_.nodes
    int local_id = -1;
  };

  NetworkConfig config_;
  std::vector<SeedQubit> seed_qubits_;
  std::vector<int> next_local_id_;
  DensityMatrix seed_state_;
};

NetworkConfig build_network(std::vector<NodeConfig> nodes,
                            std::vector<QuantumLinkConfig> quantum_links,
                            std::vector<ClassicalLinkConfig> classical_links);

}  // namespace tsim
