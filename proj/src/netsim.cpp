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

#include "tsim/netsim.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <optional>
#include <random>
#include <set>

namespace tsim {

namespace {

std::string link_key(const std::string& a, const std::string& b) {
  return a < b ? a + "|" + b : b + "|" + a;
}

double draw_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void validate_config(const NetworkConfig& cfg) {
  if (cfg.nodes.empty()) throw ValidationError("network has no nodes");
  std::set<std::string> names;
  for (const NodeConfig& n : cfg.nodes) {
    if (n.name.empty()) throw ValidationError("node with empty name");
    if (!names.insert(n.name).second) throw ValidationError("duplicate node name '" + n.name + "'");
    for (double p : {n.noise.single_qubit_depol, n.noise.two_qubit_depol, n.noise.measurement_flip}) {
      if (p < 0.0 || p > 1.0) {
        throw ValidationError("device noise probability " + std::to_string(p) +
                              " on node '" + n.name + "' outside [0, 1]");
      }
    }
  }
  std::set<std::string> qkeys, ckeys;
  for (const QuantumLinkConfig& l : cfg.quantum_links) {
    if (!names.count(l.node_a) || !names.count(l.node_b)) {
      throw ValidationError("quantum link '" + l.node_a + "'-'" + l.node_b + "' references an unknown node");
    }
    if (l.node_a == l.node_b) throw ValidationError("quantum link from node '" + l.node_a + "' to itself");
    if (!qkeys.insert(link_key(l.node_a, l.node_b)).second) {
      throw ValidationError("duplicate quantum link between '" + l.node_a + "' and '" + l.node_b + "'");
    }
    if (l.noise.epr_fidelity < 0.25 || l.noise.epr_fidelity > 1.0) {
      throw ValidationError("link fidelity " + std::to_string(l.noise.epr_fidelity) + " outside [0.25, 1]");
    }
  }
  for (const ClassicalLinkConfig& l : cfg.classical_links) {
    if (!names.count(l.node_a) || !names.count(l.node_b)) {
      throw ValidationError("classical link '" + l.node_a + "'-'" + l.node_b + "' references an unknown node");
    }
    if (l.node_a == l.node_b) throw ValidationError("classical link from node '" + l.node_a + "' to itself");
    if (!ckeys.insert(link_key(l.node_a, l.node_b)).second) {
      throw ValidationError("duplicate classical link between '" + l.node_a + "' and '" + l.node_b + "'");
    }
  }
}

void validate_cond_body(const std::vector<Instruction>& body) {
  for (const Instruction& ins : body) {
    if (ins.kind != Instruction::Kind::Gate) {
      throw ValidationError("conditional blocks may contain gates only");
    }
  }
}

struct QubitRecord {
  int node = -1;  // owner, index into config nodes
  int local_id = -1;
  int slot = -1;  // position in the dense state; -1 once measured
};

// Sentinel for a qubit variable whose EPR pair has not been delivered yet.
constexpr int kPendingEpr = -2;

struct PendingEprRequest {
  int prog = -1;
  std::string var;
};

struct ProgState {
  std::size_t ip = 0;
  std::map<std::string, int> qubit_vars;
  std::map<std::string, std::uint8_t> bit_vars;
};

// Complete runtime snapshot; copying one forks the simulation at a
// measurement branch point.
struct SimState {
  DensityMatrix state;
  std::vector<QubitRecord> qubits;
  std::vector<int> active;  // slot -> global index
  std::vector<ProgState> progs;
  std::map<std::pair<int, int>, std::deque<ClassicalMessage>> queues;  // (from, to) node indices
  std::map<std::string, std::array<std::deque<PendingEprRequest>, 2>> epr_waiting;
  int cursor = 0;
  bool round_progress = false;
  double probability = 1.0;
  std::vector<MeasurementRecord> measurements;
};

struct MeasureOption {
  int recorded = 0;
  int actual = 0;
  double probability = 0.0;
};

}  // namespace

Program& Program::alloc(const std::string& qubit) {
  Instruction ins;
  ins.kind = Instruction::Kind::Alloc;
  ins.qubit = qubit;
  instructions.push_back(std::move(ins));
  return *this;
}

Program& Program::epr(const std::string& peer, const std::string& qubit) {
  Instruction ins;
  ins.kind = Instruction::Kind::Epr;
  ins.peer = peer;
  ins.qubit = qubit;
  instructions.push_back(std::move(ins));
  return *this;
}

Instruction Program::gate_instruction(const GateMatrix& g, const std::vector<std::string>& qubits) {
  Instruction ins;
  ins.kind = Instruction::Kind::Gate;
  ins.gate = g;
  ins.qubits = qubits;
  return ins;
}

Program& Program::gate(const GateMatrix& g, const std::vector<std::string>& qubits) {
  instructions.push_back(gate_instruction(g, qubits));
  return *this;
}

Program& Program::measure(const std::string& qubit, const std::string& bit) {
  Instruction ins;
  ins.kind = Instruction::Kind::Measure;
  ins.qubit = qubit;
  ins.bit = bit;
  instructions.push_back(std::move(ins));
  return *this;
}

Program& Program::send(const std::string& peer, const std::string& tag,
                       const std::vector<std::string>& bits) {
  Instruction ins;
  ins.kind = Instruction::Kind::Send;
  ins.peer = peer;
  ins.tag = tag;
  ins.bits = bits;
  instructions.push_back(std::move(ins));
  return *this;
}

Program& Program::recv(const std::string& peer, const std::string& tag,
                       const std::vector<std::string>& bits) {
  Instruction ins;
  ins.kind = Instruction::Kind::Recv;
  ins.peer = peer;
  ins.tag = tag;
  ins.bits = bits;
  instructions.push_back(std::move(ins));
  return *this;
}

Program& Program::flush() {
  Instruction ins;
  ins.kind = Instruction::Kind::Flush;
  instructions.push_back(std::move(ins));
  return *this;
}

Program& Program::cond(const std::string& bit, std::vector<Instruction> body) {
  validate_cond_body(body);
  Instruction ins;
  ins.kind = Instruction::Kind::Cond;
  ins.bit = bit;
  ins.body = std::move(body);
  instructions.push_back(std::move(ins));
  return *this;
}

int RunOutcome::slot_of(int global_index) const {
  for (std::size_t s = 0; s < active_globals.size(); ++s) {
    if (active_globals[s] == global_index) return static_cast<int>(s);
  }
  return -1;
}

NetworkConfig build_network(std::vector<NodeConfig> nodes,
                            std::vector<QuantumLinkConfig> quantum_links,
                            std::vector<ClassicalLinkConfig> classical_links) {
  NetworkConfig cfg{std::move(nodes), std::move(quantum_links), std::move(classical_links)};
  validate_config(cfg);
  return cfg;
}

// Runs a fixed program set against one Simulation. Nodes are scheduled
// round-robin in name order; a program segment continues until it flushes,
// blocks on an empty message queue, or ends. Measurements surface to the
// driver, which either forks (exact) or samples (sampled).
class Executor {
 public:
  Executor(const Simulation& sim, const std::vector<Program>& programs)
      : cfg_(sim.config()) {
    for (std::size_t i = 0; i < cfg_.nodes.size(); ++i) node_index_[cfg_.nodes[i].name] = static_cast<int>(i);
    for (const QuantumLinkConfig& l : cfg_.quantum_links) quantum_links_[link_key(l.node_a, l.node_b)] = &l;
    for (const ClassicalLinkConfig& l : cfg_.classical_links) classical_links_.insert(link_key(l.node_a, l.node_b));

    programs_ = programs;
    std::sort(programs_.begin(), programs_.end(),
              [](const Program& a, const Program& b) { return a.node < b.node; });
    std::set<std::string> seen;
    for (const Program& p : programs_) {
      if (!node_index_.count(p.node)) throw ValidationError("program for unknown node '" + p.node + "'");
      if (!seen.insert(p.node).second) throw ValidationError("two programs for node '" + p.node + "'");
      validate_program(p);
    }

    root_.state = sim.seed_state_;
    for (std::size_t g = 0; g < sim.seed_qubits_.size(); ++g) {
      root_.qubits.push_back({sim.seed_qubits_[g].node, sim.seed_qubits_[g].local_id,
                              static_cast<int>(g)});
      root_.active.push_back(static_cast<int>(g));
    }
    root_.progs.resize(programs_.size());
  }

  RunOutcome run(const RunOptions& options) {
    return options.mode == RunOptions::Mode::Exact ? run_exact() : run_sampled(options.seed);
  }

 private:
  const NetworkConfig& cfg_;
  std::map<std::string, int> node_index_;
  std::map<std::string, const QuantumLinkConfig*> quantum_links_;
  std::set<std::string> classical_links_;
  std::vector<Program> programs_;
  SimState root_;

  const std::string& node_name(int idx) const { return cfg_.nodes[idx].name; }

  void validate_program(const Program& p) const {
    for (const Instruction& ins : p.instructions) validate_instruction(p.node, ins);
  }

  void validate_instruction(const std::string& node, const Instruction& ins) const {
    switch (ins.kind) {
      case Instruction::Kind::Epr:
        if (!quantum_links_.count(link_key(node, ins.peer))) {
          throw ValidationError("no quantum link between '" + node + "' and '" + ins.peer + "'");
        }
        break;
      case Instruction::Kind::Send:
      case Instruction::Kind::Recv:
        if (!classical_links_.count(link_key(node, ins.peer))) {
          throw ValidationError("no classical link between '" + node + "' and '" + ins.peer + "'");
        }
        break;
      case Instruction::Kind::Gate:
        if (!is_unitary(ins.gate.mat)) {
          throw ValidationError("gate '" + ins.gate.name + "' in program for '" + node + "' is not unitary");
        }
        break;
      case Instruction::Kind::Cond:
        validate_cond_body(ins.body);
        for (const Instruction& g : ins.body) validate_instruction(node, g);
        break;
      default:
        break;
    }
  }

  RunOutcome run_exact() const {
    RunOutcome outcome;
    std::vector<SimState> stack;
    stack.push_back(root_);
    while (!stack.empty()) {
      SimState st = std::move(stack.back());
      stack.pop_back();
      for (;;) {
        const std::optional<int> at_measure = advance(st);
        if (!at_measure) {
          finalize_branch(std::move(st), outcome);
          break;
        }
        const int p = *at_measure;
        const Instruction& ins = programs_[p].instructions[st.progs[p].ip];
        const std::vector<MeasureOption> options = measure_options(st, p, ins);
        if (options.empty()) {
          throw SimulationError("measurement of '" + ins.qubit + "' on node '" + programs_[p].node +
                                "' has no reachable outcome");
        }
        for (std::size_t i = options.size(); i-- > 1;) {
          SimState fork = st;
          apply_measure(fork, p, ins, options[i]);
          stack.push_back(std::move(fork));
        }
        apply_measure(st, p, ins, options.front());
      }
    }
    return outcome;
  }

  RunOutcome run_sampled(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    RunOutcome outcome;
    SimState st = root_;
    for (;;) {
      const std::optional<int> at_measure = advance(st);
      if (!at_measure) break;
      const int p = *at_measure;
      const Instruction& ins = programs_[p].instructions[st.progs[p].ip];
      apply_measure(st, p, ins, sample_option(st, p, ins, rng));
    }
    st.probability = 1.0;
    finalize_branch(std::move(st), outcome);
    return outcome;
  }

  void finalize_branch(SimState&& st, RunOutcome& outcome) const {
    if (outcome.branches.empty()) {
      outcome.active_globals = st.active;
      for (int g : st.active) {
        const QubitRecord& rec = st.qubits[g];
        outcome.active_refs.push_back({node_name(rec.node), rec.local_id, g});
      }
      for (std::size_t p = 0; p < programs_.size(); ++p) {
        outcome.qubit_vars[programs_[p].node] = st.progs[p].qubit_vars;
      }
    } else if (outcome.active_globals != st.active) {
      throw SimulationError("branches disagree about surviving qubits");
    }
    RunBranch branch;
    branch.probability = st.probability;
    branch.measurements = std::move(st.measurements);
    branch.state = std::move(st.state);
    outcome.branches.push_back(std::move(branch));
  }

  // Advances until every program is done (nullopt) or some program is parked
  // on a Measure instruction (its index). Throws on deadlock.
  std::optional<int> advance(SimState& st) const {
    if (programs_.empty()) return std::nullopt;
    for (;;) {
      if (all_finished(st)) return std::nullopt;
      if (st.cursor == static_cast<int>(programs_.size())) {
        if (!st.round_progress) throw_deadlock(st);
        st.cursor = 0;
        st.round_progress = false;
      }
      const int p = st.cursor;
      ProgState& ps = st.progs[p];
      const std::vector<Instruction>& code = programs_[p].instructions;
      bool yield = false;
      while (!yield && ps.ip < code.size()) {
        const Instruction& ins = code[ps.ip];
        switch (ins.kind) {
          case Instruction::Kind::Measure:
            return p;
          case Instruction::Kind::Flush:
            ++ps.ip;
            st.round_progress = true;
            yield = true;
            break;
          case Instruction::Kind::Recv:
            if (!try_recv(st, p, ins)) {
              yield = true;  // retry next round
            } else {
              ++ps.ip;
              st.round_progress = true;
            }
            break;
          default:
            execute(st, p, ins);
            ++ps.ip;
            st.round_progress = true;
            break;
        }
      }
      ++st.cursor;
    }
  }

  bool all_finished(const SimState& st) const {
    for (std::size_t p = 0; p < programs_.size(); ++p) {
      if (st.progs[p].ip < programs_[p].instructions.size()) return false;
    }
    return true;
  }

  [[noreturn]] void throw_deadlock(const SimState& st) const {
    std::string detail;
    for (std::size_t p = 0; p < programs_.size(); ++p) {
      const std::vector<Instruction>& code = programs_[p].instructions;
      if (st.progs[p].ip >= code.size()) continue;
      const Instruction& ins = code[st.progs[p].ip];
      if (!detail.empty()) detail += "; ";
      if (ins.kind == Instruction::Kind::Recv) {
        detail += "node '" + programs_[p].node + "' waiting for message '" + ins.tag +
                  "' from '" + ins.peer + "'";
      } else {
        detail += "node '" + programs_[p].node + "' stalled";
      }
    }
    throw SimulationError("deadlock: " + detail);
  }

  void execute(SimState& st, int p, const Instruction& ins) const {
    switch (ins.kind) {
      case Instruction::Kind::Alloc: do_alloc(st, p, ins); break;
      case Instruction::Kind::Epr: do_epr(st, p, ins); break;
      case Instruction::Kind::Gate: do_gate(st, p, ins); break;
      case Instruction::Kind::Send: do_send(st, p, ins); break;
      case Instruction::Kind::Cond: do_cond(st, p, ins); break;
      default:
        throw SimulationError("unexpected instruction in scheduler");
    }
  }

  int owner_node(int p) const { return node_index_.at(programs_[p].node); }

  int new_qubit(SimState& st, int node) const {
    int local = 0;
    for (const QubitRecord& q : st.qubits) {
      if (q.node == node) ++local;
    }
    const int global = static_cast<int>(st.qubits.size());
    st.qubits.push_back({node, local, static_cast<int>(st.active.size())});
    st.active.push_back(global);
    return global;
  }

  void do_alloc(SimState& st, int p, const Instruction& ins) const {
    const int global = new_qubit(st, owner_node(p));
    st.state = st.state.n_qubits == 0 ? DensityMatrix::zero_state(1)
                                      : tensor(st.state, DensityMatrix::zero_state(1));
    st.progs[p].qubit_vars[ins.qubit] = global;
  }

  void do_epr(SimState& st, int p, const Instruction& ins) const {
    const std::string& me = programs_[p].node;
    const std::string key = link_key(me, ins.peer);
    const QuantumLinkConfig* link = quantum_links_.at(key);
    const int side = me == link->node_a ? 0 : 1;
    auto& waiting = st.epr_waiting[key];

    if (waiting[1 - side].empty()) {
      waiting[side].push_back({p, ins.qubit});
      st.progs[p].qubit_vars[ins.qubit] = kPendingEpr;
      return;
    }
    const PendingEprRequest other = waiting[1 - side].front();
    waiting[1 - side].pop_front();

    const int global_a = new_qubit(st, node_index_.at(link->node_a));
    const int global_b = new_qubit(st, node_index_.at(link->node_b));
    const DensityMatrix pair = werner_epr(link->noise.epr_fidelity);
    st.state = st.state.n_qubits == 0 ? pair : tensor(st.state, pair);

    const int mine = side == 0 ? global_a : global_b;
    const int theirs = side == 0 ? global_b : global_a;
    st.progs[p].qubit_vars[ins.qubit] = mine;
    st.progs[other.prog].qubit_vars[other.var] = theirs;
  }

  int resolve_qubit(const SimState& st, int p, const std::string& var) const {
    const auto& vars = st.progs[p].qubit_vars;
    const auto it = vars.find(var);
    if (it == vars.end()) {
      throw SimulationError("unknown qubit '" + var + "' on node '" + programs_[p].node + "'");
    }
    if (it->second == kPendingEpr) {
      throw SimulationError("EPR pair for qubit '" + var + "' on node '" + programs_[p].node +
                            "' has not been delivered yet");
    }
    const QubitRecord& rec = st.qubits[it->second];
    if (rec.node != owner_node(p)) {
      throw SimulationError("node '" + programs_[p].node + "' does not own qubit '" + var + "'");
    }
    if (rec.slot < 0) {
      throw SimulationError("qubit '" + var + "' on node '" + programs_[p].node +
                            "' was already measured");
    }
    return it->second;
  }

  void do_gate(SimState& st, int p, const Instruction& ins) const {
    std::vector<int> slots;
    slots.reserve(ins.qubits.size());
    for (const std::string& var : ins.qubits) slots.push_back(st.qubits[resolve_qubit(st, p, var)].slot);
    noisy_apply(st.state, ins.gate, slots, cfg_.nodes[owner_node(p)].noise);
  }

  void do_send(SimState& st, int p, const Instruction& ins) const {
    ClassicalMessage msg;
    msg.sender = programs_[p].node;
    msg.tag = ins.tag;
    for (const std::string& bit : ins.bits) {
      const auto it = st.progs[p].bit_vars.find(bit);
      if (it == st.progs[p].bit_vars.end()) {
        throw SimulationError("node '" + programs_[p].node + "' sends unset bit '" + bit + "'");
      }
      msg.payload.push_back(it->second);
    }
    st.queues[{owner_node(p), node_index_.at(ins.peer)}].push_back(std::move(msg));
  }

  bool try_recv(SimState& st, int p, const Instruction& ins) const {
    auto& queue = st.queues[{node_index_.at(ins.peer), owner_node(p)}];
    if (queue.empty()) return false;
    const ClassicalMessage msg = std::move(queue.front());
    queue.pop_front();
    if (msg.tag != ins.tag) {
      throw SimulationError("node '" + programs_[p].node + "' expected message '" + ins.tag +
                            "' from '" + ins.peer + "', found '" + msg.tag + "'");
    }
    if (msg.payload.size() != ins.bits.size()) {
      throw SimulationError("message '" + ins.tag + "' carries " + std::to_string(msg.payload.size()) +
                            " bit(s), node '" + programs_[p].node + "' expected " +
                            std::to_string(ins.bits.size()));
    }
    for (std::size_t i = 0; i < ins.bits.size(); ++i) st.progs[p].bit_vars[ins.bits[i]] = msg.payload[i];
    return true;
  }

  void do_cond(SimState& st, int p, const Instruction& ins) const {
    const auto it = st.progs[p].bit_vars.find(ins.bit);
    if (it == st.progs[p].bit_vars.end()) {
      throw SimulationError("node '" + programs_[p].node + "' branches on unset bit '" + ins.bit + "'");
    }
    if (it->second == 0) return;
    for (const Instruction& g : ins.body) do_gate(st, p, g);
  }

  std::vector<MeasureOption> measure_options(const SimState& st, int p, const Instruction& ins) const {
    const int global = resolve_qubit(st, p, ins.qubit);
    const int slot = st.qubits[global].slot;
    const int shift = st.state.n_qubits - 1 - slot;
    const std::size_t bit = std::size_t{1} << shift;

    double prob[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < st.state.dim(); ++i) {
      prob[(i & bit) ? 1 : 0] += st.state.mat(i, i).real();
    }
    const double flip = cfg_.nodes[owner_node(p)].noise.measurement_flip;

    std::vector<MeasureOption> options;
    for (int recorded = 0; recorded < 2; ++recorded) {
      for (int actual = 0; actual < 2; ++actual) {
        const double weight = recorded == actual ? 1.0 - flip : flip;
        const double prob_option = std::max(prob[actual], 0.0) * weight;
        if (prob_option >= kBranchCutoff) options.push_back({recorded, actual, prob_option});
      }
    }
    return options;
  }

  MeasureOption sample_option(const SimState& st, int p, const Instruction& ins,
                              std::mt19937_64& rng) const {
    const std::vector<MeasureOption> options = measure_options(st, p, ins);
    if (options.empty()) {
      throw SimulationError("measurement of '" + ins.qubit + "' on node '" + programs_[p].node +
                            "' has no reachable outcome");
    }
    double total = 0.0;
    for (const MeasureOption& o : options) total += o.probability;
    double u = draw_uniform(rng) * total;
    for (const MeasureOption& o : options) {
      u -= o.probability;
      if (u <= 0.0) return o;
    }
    return options.back();
  }

  // Collapses the measured qubit to `actual`, removes it from the dense
  // state, records the (possibly flipped) classical bit, and moves past the
  // Measure instruction.
  void apply_measure(SimState& st, int p, const Instruction& ins, const MeasureOption& opt) const {
    const int global = resolve_qubit(st, p, ins.qubit);
    const int slot = st.qubits[global].slot;
    const int n = st.state.n_qubits;
    const int shift = n - 1 - slot;
    const std::size_t low_mask = (std::size_t{1} << shift) - 1;
    const std::size_t dim = st.state.dim() >> 1;

    // Raw (unconditioned) weight of the collapsed block normalizes the
    // post state; the option probability already includes any flip weight.
    double block_weight = 0.0;
    auto expand = [&](std::size_t i) {
      return ((i >> shift) << (shift + 1)) | (static_cast<std::size_t>(opt.actual) << shift) |
             (i & low_mask);
    };
    for (std::size_t i = 0; i < dim; ++i) block_weight += st.state.mat(expand(i), expand(i)).real();
    if (block_weight < kBranchCutoff) {
      throw SimulationError("collapse onto an unreachable measurement outcome");
    }

    Mat reduced(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) reduced(r, c) = st.state.mat(expand(r), expand(c)) / block_weight;
    }
    st.state.mat = std::move(reduced);
    st.state.n_qubits = n - 1;

    st.qubits[global].slot = -1;
    st.active.erase(st.active.begin() + slot);
    for (QubitRecord& q : st.qubits) {
      if (q.slot > slot) --q.slot;
    }

    st.probability *= opt.probability;
    st.progs[p].bit_vars[ins.bit] = static_cast<std::uint8_t>(opt.recorded);
    st.measurements.push_back({programs_[p].node, ins.bit, static_cast<std::uint8_t>(opt.recorded)});
    ++st.progs[p].ip;
    st.round_progress = true;
  }
};

Simulation::Simulation(NetworkConfig config) : config_(std::move(config)) {
  validate_config(config_);
  next_local_id_.assign(config_.nodes.size(), 0);
  seed_state_.n_qubits = 0;
  seed_state_.mat = Mat::Ones(1, 1);
}

const DensityMatrix& Simulation::global_state() const { return seed_state_; }

std::pair<QubitRef, QubitRef> Simulation::create_epr(const std::string& node_a,
                                                     const std::string& node_b) {
  const QuantumLinkConfig* link = nullptr;
  for (const QuantumLinkConfig& l : config_.quantum_links) {
    if (link_key(l.node_a, l.node_b) == link_key(node_a, node_b)) {
      link = &l;
      break;
    }
  }
  if (!link) {
    throw ValidationError("no quantum link between '" + node_a + "' and '" + node_b + "'");
  }

  auto node_idx = [&](const std::string& name) {
    for (std::size_t i = 0; i < config_.nodes.size(); ++i) {
      if (config_.nodes[i].name == name) return static_cast<int>(i);
    }
    throw ValidationError("unknown node '" + name + "'");
  };

  const int idx_a = node_idx(link->node_a), idx_b = node_idx(link->node_b);
  QubitRef ref_a{link->node_a, next_local_id_[idx_a]++, static_cast<int>(seed_qubits_.size())};
  seed_qubits_.push_back({idx_a, ref_a.local_id});
  QubitRef ref_b{link->node_b, next_local_id_[idx_b]++, static_cast<int>(seed_qubits_.size())};
  seed_qubits_.push_back({idx_b, ref_b.local_id});

  const DensityMatrix pair = werner_epr(link->noise.epr_fidelity);
  seed_state_ = seed_state_.n_qubits == 0 ? pair : tensor(seed_state_, pair);

  if (node_a == link->node_a) return {ref_a, ref_b};
  return {ref_b, ref_a};
}

RunOutcome Simulation::run(const std::vector<Program>& programs, const RunOptions& options) const {
  Executor exec(*this, programs);
  return exec.run(options);
}

}  // namespace tsim
