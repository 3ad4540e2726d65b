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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "tsim/netsim.hpp"

using namespace tsim;

namespace {

NetworkConfig two_nodes(double epr_fidelity = 1.0) {
  return build_network({{"alice", DeviceNoise{}}, {"bob", DeviceNoise{}}},
                       {{"alice", "bob", LinkNoise{epr_fidelity}}}, {{"alice", "bob"}});
}

Statevector bell_state() {
  Statevector psi = Statevector::zero_state(2);
  apply_gate(psi, gate_by_name("H"), {0});
  apply_gate(psi, gate_by_name("CNOT"), {0, 1});
  return psi;
}

}  // namespace

TEST_CASE("build_network validation") {
  CHECK_NOTHROW(two_nodes());

  CHECK_THROWS_WITH_AS(
      build_network({{"a", DeviceNoise{}}, {"a", DeviceNoise{}}}, {}, {}),
      doctest::Contains("duplicate node name"), ValidationError);

  CHECK_THROWS_WITH_AS(
      build_network({{"a", DeviceNoise{}}}, {{"a", "ghost", LinkNoise{}}}, {}),
      doctest::Contains("unknown node"), ValidationError);

  CHECK_THROWS_AS(build_network({{"a", DeviceNoise{}}}, {{"a", "a", LinkNoise{}}}, {}),
                  ValidationError);
  CHECK_THROWS_AS(build_network({}, {}, {}), ValidationError);
  CHECK_THROWS_AS(build_network({{"a", DeviceNoise{}}, {"b", DeviceNoise{}}},
                                {{"a", "b", LinkNoise{0.1}}}, {}),
                  ValidationError);

  DeviceNoise bad;
  bad.single_qubit_depol = 1.5;
  CHECK_THROWS_AS(build_network({{"a", bad}}, {}, {}), ValidationError);

  // four-node star
  CHECK_NOTHROW(build_network(
      {{"in0", DeviceNoise{}}, {"in1", DeviceNoise{}}, {"in2", DeviceNoise{}}, {"hub", DeviceNoise{}}},
      {{"in0", "hub", LinkNoise{}}, {"in1", "hub", LinkNoise{}}, {"in2", "hub", LinkNoise{}}},
      {{"in0", "hub"}, {"in1", "hub"}, {"in2", "hub"}}));
}

TEST_CASE("create_epr seeds Werner pairs in the global state") {
  Simulation perfect(two_nodes(1.0));
  const auto [a, b] = perfect.create_epr("alice", "bob");
  CHECK(a.node == "alice");
  CHECK(b.node == "bob");
  CHECK(a.global_index != b.global_index);

  const Statevector bell = bell_state();
  CHECK(fidelity_pure(perfect.global_state(), bell) == doctest::Approx(1.0).epsilon(1e-12));

  Simulation noisy(two_nodes(0.7));
  noisy.create_epr("alice", "bob");
  CHECK(fidelity_pure(noisy.global_state(), bell) == doctest::Approx(0.7).epsilon(1e-10));

  CHECK_THROWS_AS(noisy.create_epr("alice", "ghost"), ValidationError);
}

TEST_CASE("two EPR pairs on different links are independent tensor factors") {
  NetworkConfig cfg = build_network(
      {{"in0", DeviceNoise{}}, {"in1", DeviceNoise{}}, {"hub", DeviceNoise{}}},
      {{"in0", "hub", LinkNoise{0.9}}, {"in1", "hub", LinkNoise{0.6}}},
      {{"in0", "hub"}, {"in1", "hub"}});
  Simulation sim(cfg);
  sim.create_epr("in0", "hub");
  sim.create_epr("in1", "hub");

  const DensityMatrix& state = sim.global_state();
  REQUIRE(state.n_qubits == 4);
  const DensityMatrix expected = tensor(werner_epr(0.9), werner_epr(0.6));
  CHECK(oracle::max_abs_diff(state.mat, expected.mat) < 1e-12);
}

TEST_CASE("exact run enumerates measurement branches") {
  Simulation sim(two_nodes());
  Program alice;
  alice.node = "alice";
  alice.alloc("q").gate(gate_by_name("H"), {"q"}).measure("q", "m");

  RunOptions options;
  options.mode = RunOptions::Mode::Exact;
  const RunOutcome outcome = sim.run({alice}, options);
  REQUIRE(outcome.branches.size() == 2);
  double total = 0;
  for (const RunBranch& b : outcome.branches) total += b.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(outcome.branches[0].measurements[0].value == 0);
  CHECK(outcome.branches[1].measurements[0].value == 1);
  CHECK(outcome.branches[0].probability == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("classically conditioned correction merges branches") {
  Simulation sim(two_nodes());
  Program alice;
  alice.node = "alice";
  alice.alloc("a")
      .alloc("b")
      .gate(gate_by_name("H"), {"a"})
      .gate(gate_by_name("CNOT"), {"a", "b"})
      .measure("a", "m")
      .cond("m", {Program::gate_instruction(gate_by_name("X"), {"b"})});

  RunOptions options;
  options.mode = RunOptions::Mode::Exact;
  const RunOutcome outcome = sim.run({alice}, options);
  REQUIRE(outcome.branches.size() == 2);
  const Statevector zero = Statevector::zero_state(1);
  for (const RunBranch& b : outcome.branches) {
    CHECK(b.probability == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(fidelity_pure(b.state, zero) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("sampled runs are reproducible and match exact branches") {
  Simulation sim(two_nodes());
  Program alice;
  alice.node = "alice";
  alice.alloc("q").gate(gate_by_name("H"), {"q"}).measure("q", "m").alloc("r").measure("r", "s");

  RunOptions exact{RunOptions::Mode::Exact, 0};
  const RunOutcome all = sim.run({alice}, exact);

  for (std::uint64_t seed : {0ull, 1ull, 7ull, 12345ull}) {
    RunOptions sampled{RunOptions::Mode::Sampled, seed};
    const RunOutcome once = sim.run({alice}, sampled);
    const RunOutcome twice = sim.run({alice}, sampled);
    REQUIRE(once.branches.size() == 1);
    CHECK(once.branches[0].probability == doctest::Approx(1.0));

    REQUIRE(once.branches[0].measurements.size() == twice.branches[0].measurements.size());
    for (std::size_t i = 0; i < once.branches[0].measurements.size(); ++i) {
      CHECK(once.branches[0].measurements[i].value == twice.branches[0].measurements[i].value);
    }
    CHECK(oracle::max_abs_diff(once.branches[0].state.mat, twice.branches[0].state.mat) == 0.0);

    // the trajectory exists among the exact branches
    bool found = false;
    for (const RunBranch& b : all.branches) {
      bool same = b.measurements.size() == once.branches[0].measurements.size();
      for (std::size_t i = 0; same && i < b.measurements.size(); ++i) {
        same = b.measurements[i].value == once.branches[0].measurements[i].value;
      }
      if (same) {
        found = true;
        CHECK(oracle::max_abs_diff(b.state.mat, once.branches[0].state.mat) < 1e-12);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("classical messages arrive in FIFO order with payloads intact") {
  Simulation sim(two_nodes());
  Program alice, bob;
  alice.node = "alice";
  bob.node = "bob";

  alice.alloc("q").measure("q", "m0").alloc("r").gate(gate_by_name("X"), {"r"}).measure("r", "m1");
  alice.send("bob", "first", {"m0", "m1"});
  alice.send("bob", "second", {"m1"});

  bob.recv("alice", "first", {"a", "b"}).recv("alice", "second", {"c"});
  bob.alloc("out");
  bob.cond("b", {Program::gate_instruction(gate_by_name("X"), {"out"})});
  bob.measure("out", "check");

  RunOptions options;
  options.mode = RunOptions::Mode::Exact;
  const RunOutcome outcome = sim.run({alice, bob}, options);
  REQUIRE(outcome.branches.size() == 1);
  // m0=0, m1=1, so bob's conditioned X fires and his qubit reads 1
  const auto& ms = outcome.branches[0].measurements;
  CHECK(ms.back().node == "bob");
  CHECK(ms.back().value == 1);
}

TEST_CASE("deadlock names the blocked node and tag") {
  Simulation sim(two_nodes());
  Program alice, bob;
  alice.node = "alice";
  bob.node = "bob";
  bob.recv("alice", "never", {"x"});

  RunOptions options;
  CHECK_THROWS_WITH_AS(sim.run({alice, bob}, options),
                       doctest::Contains("node 'bob' waiting for message 'never'"),
                       SimulationError);
}

TEST_CASE("mismatched tags and payload sizes are errors") {
  Simulation sim(two_nodes());
  Program alice, bob;
  alice.node = "alice";
  bob.node = "bob";
  alice.alloc("q").measure("q", "m").send("bob", "tagA", {"m"});
  bob.recv("alice", "tagB", {"x"});
  RunOptions options;
  CHECK_THROWS_WITH_AS(sim.run({alice, bob}, options), doctest::Contains("expected message"),
                       SimulationError);

  Simulation sim2(two_nodes());
  Program alice2, bob2;
  alice2.node = "alice";
  bob2.node = "bob";
  alice2.alloc("q").measure("q", "m").send("bob", "tag", {"m"});
  bob2.recv("alice", "tag", {"x", "y"});
  CHECK_THROWS_WITH_AS(sim2.run({alice2, bob2}, options), doctest::Contains("carries"),
                       SimulationError);
}

TEST_CASE("ownership is enforced across nodes") {
  Simulation sim(two_nodes());
  Program alice, bob;
  alice.node = "alice";
  bob.node = "bob";
  alice.epr("bob", "mine");
  bob.epr("alice", "theirs");
  bob.flush();
  // bob tries to touch alice's half: his own variable names only give his
  // qubits, so the violation needs a shared global index. Use the same var
  // name on both sides; each node sees its own half, so this is legal.
  bob.gate(gate_by_name("X"), {"theirs"});

  RunOptions options;
  CHECK_NOTHROW(sim.run({alice, bob}, options));

  // measuring a foreign qubit variable is unknown on that node
  Simulation sim2(two_nodes());
  Program alice2, bob2;
  alice2.node = "alice";
  bob2.node = "bob";
  alice2.alloc("q");
  bob2.gate(gate_by_name("X"), {"q"});
  CHECK_THROWS_WITH_AS(sim2.run({alice2, bob2}, options), doctest::Contains("unknown qubit"),
                       SimulationError);
}

TEST_CASE("EPR halves wait for the counterpart request") {
  Simulation sim(two_nodes());
  Program alice, bob;
  alice.node = "alice";
  bob.node = "bob";
  // alice asks for the pair and uses it in the same segment; bob has not
  // requested his half yet when the gate runs.
  alice.epr("bob", "e").gate(gate_by_name("X"), {"e"});
  bob.flush();
  bob.epr("alice", "e");

  RunOptions options;
  CHECK_THROWS_WITH_AS(sim.run({alice, bob}, options),
                       doctest::Contains("has not been delivered yet"), SimulationError);

  // with a flush between request and use, both sides line up
  Simulation sim2(two_nodes());
  Program alice2, bob2;
  alice2.node = "alice";
  bob2.node = "bob";
  alice2.epr("bob", "e").flush().gate(gate_by_name("X"), {"e"});
  bob2.epr("alice", "e").flush();
  CHECK_NOTHROW(sim2.run({alice2, bob2}, options));
}

TEST_CASE("measured qubits cannot be reused") {
  Simulation sim(two_nodes());
  Program alice;
  alice.node = "alice";
  alice.alloc("q").measure("q", "m").gate(gate_by_name("X"), {"q"});
  RunOptions options;
  CHECK_THROWS_WITH_AS(sim.run({alice}, options), doctest::Contains("already measured"),
                       SimulationError);
}

TEST_CASE("measurement flips bias the recorded bit, not the state") {
  NetworkConfig cfg = two_nodes();
  cfg.nodes[0].noise.measurement_flip = 1.0;  // alice always reads back inverted
  Simulation sim(cfg);
  Program alice;
  alice.node = "alice";
  alice.alloc("q").measure("q", "m");  // |0> measured

  RunOptions options;
  options.mode = RunOptions::Mode::Exact;
  const RunOutcome outcome = sim.run({alice}, options);
  REQUIRE(outcome.branches.size() == 1);
  CHECK(outcome.branches[0].measurements[0].value == 1);
  CHECK(outcome.branches[0].probability == doctest::Approx(1.0));
}

TEST_CASE("run validates programs against the network") {
  Simulation sim(two_nodes());
  RunOptions options;

  Program ghost;
  ghost.node = "ghost";
  CHECK_THROWS_AS(sim.run({ghost}, options), ValidationError);

  Program a1, a2;
  a1.node = "alice";
  a2.node = "alice";
  CHECK_THROWS_AS(sim.run({a1, a2}, options), ValidationError);

  Program bad_link;
  bad_link.node = "alice";
  bad_link.epr("alice", "q");
  CHECK_THROWS_AS(sim.run({bad_link}, options), ValidationError);

  Program bad_gate;
  bad_gate.node = "alice";
  GateMatrix broken{"broken", 1, 2.0 * Mat::Identity(2, 2)};
  bad_gate.alloc("q");
  bad_gate.instructions.push_back(Program::gate_instruction(broken, {"q"}));
  CHECK_THROWS_AS(sim.run({bad_gate}, options), ValidationError);
}

TEST_CASE("cond bodies may contain gates only") {
  Program p;
  p.node = "alice";
  Instruction not_a_gate;
  not_a_gate.kind = Instruction::Kind::Flush;
  CHECK_THROWS_AS(p.cond("m", {not_a_gate}), ValidationError);
}

TEST_CASE("identical runs give identical outcomes") {
  NetworkConfig cfg = two_nodes(0.8);
  cfg.nodes[1].noise.single_qubit_depol = 0.05;
  Simulation sim(cfg);

  Program alice, bob;
  alice.node = "alice";
  bob.node = "bob";
  alice.epr("bob", "e").flush();
  alice.alloc("q").gate(gate_by_name("H"), {"q"});
  alice.gate(gate_by_name("CNOT"), {"q", "e"}).gate(gate_by_name("H"), {"q"});
  alice.measure("e", "me").measure("q", "mq").send("bob", "corr", {"me", "mq"});
  bob.epr("alice", "e").flush();
  bob.recv("alice", "corr", {"x", "z"});
  bob.cond("x", {Program::gate_instruction(gate_by_name("X"), {"e"})});
  bob.cond("z", {Program::gate_instruction(gate_by_name("Z"), {"e"})});

  for (auto mode : {RunOptions::Mode::Exact, RunOptions::Mode::Sampled}) {
    RunOptions options{mode, 99};
    const RunOutcome first = sim.run({alice, bob}, options);
    const RunOutcome second = sim.run({alice, bob}, options);
    REQUIRE(first.branches.size() == second.branches.size());
    for (std::size_t i = 0; i < first.branches.size(); ++i) {
      CHECK(first.branches[i].probability == second.branches[i].probability);
      CHECK(oracle::max_abs_diff(first.branches[i].state.mat, second.branches[i].state.mat) == 0.0);
    }
    CHECK(first.active_globals == second.active_globals);
  }
}

TEST_CASE("state teleportation as raw programs, exact mode") {
  Simulation sim(two_nodes());
  Program alice, bob;
  alice.node = "alice";
  bob.node = "bob";

  alice.epr("bob", "e").flush();
  alice.alloc("q");  // teleport |0>
  alice.gate(gate_by_name("CNOT"), {"q", "e"}).gate(gate_by_name("H"), {"q"});
  alice.measure("e", "me").measure("q", "mq");
  alice.send("bob", "corr", {"me", "mq"});

  bob.epr("alice", "e").flush();
  bob.recv("alice", "corr", {"x", "z"});
  bob.cond("x", {Program::gate_instruction(gate_by_name("X"), {"e"})});
  bob.cond("z", {Program::gate_instruction(gate_by_name("Z"), {"e"})});

  RunOptions options;
  options.mode = RunOptions::Mode::Exact;
  const RunOutcome outcome = sim.run({alice, bob}, options);

  REQUIRE(outcome.branches.size() == 4);
  const Statevector zero = Statevector::zero_state(1);
  for (const RunBranch& b : outcome.branches) {
    CHECK(b.probability == doctest::Approx(0.25).epsilon(1e-9));
    REQUIRE(b.state.n_qubits == 1);
    CHECK(fidelity_pure(b.state, zero) == doctest::Approx(1.0).epsilon(1e-9));
  }

  // bob's surviving qubit is the only active one
  REQUIRE(outcome.active_refs.size() == 1);
  CHECK(outcome.active_refs[0].node == "bob");
  CHECK(outcome.qubit_vars.at("bob").at("e") == outcome.active_globals[0]);
}
