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

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tsim/protocols.hpp"

using namespace tsim;

namespace {

InputSpec make_input(const std::vector<std::vector<std::string>>& gate_names) {
  InputSpec input;
  for (const auto& wire : gate_names) {
    std::vector<GateMatrix> gates;
    for (const std::string& name : wire) gates.push_back(gate_by_name(name));
    input.preps.push_back(std::move(gates));
  }
  return input;
}

Statevector prepared_state(const InputSpec& input) {
  Statevector psi = Statevector::zero_state(static_cast<int>(input.preps.size()));
  for (std::size_t w = 0; w < input.preps.size(); ++w) {
    for (const GateMatrix& g : input.preps[w]) apply_gate(psi, g, {static_cast<int>(w)});
  }
  return psi;
}

double overlap(const Statevector& a, const Statevector& b) {
  return std::norm((a.amp.adjoint() * b.amp)(0, 0));
}

// One-wire depolarizing strength of a Werner-f teleport channel.
double channel_p(double f) { return (4.0 * f - 1.0) / 3.0; }

NetworkConfig clean_two_node() { return two_node_network(LinkNoise{1.0}, {}, {}); }

NetworkConfig clean_three_node() {
  return three_node_network(LinkNoise{1.0}, LinkNoise{1.0}, {}, {}, {});
}

NetworkConfig clean_four_node() {
  return four_node_network({LinkNoise{1.0}, LinkNoise{1.0}, LinkNoise{1.0}},
                           {DeviceNoise{}, DeviceNoise{}, DeviceNoise{}}, {});
}

}  // namespace

TEST_CASE("state teleportation over a clean link is exact in every branch") {
  Simulation sim(clean_two_node());
  const InputSpec input = make_input({{"H", "S"}});
  const TeleportResult result = state_teleport(sim, input);

  CHECK(overlap(result.ideal, prepared_state(input)) == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(result.branches.size() == 4);
  REQUIRE(result.outputs.size() == 1);
  CHECK(result.outputs[0].node == "receiver");

  double total = 0.0;
  for (const BranchResult& b : result.branches) {
    CHECK(b.probability == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(b.fidelity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(b.bits.size() == 2);
    total += b.probability;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(result.fidelity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(result.branch_count() == 4);
}

TEST_CASE("state teleportation through a Werner link matches the closed form") {
  for (double f : {0.25, 0.6, 0.85, 1.0}) {
    Simulation sim(two_node_network(LinkNoise{f}, {}, {}));
    const TeleportResult result = state_teleport(sim, make_input({{"H"}}));
    const double expected = (2.0 * f + 1.0) / 3.0;
    CHECK(result.fidelity == doctest::Approx(expected).epsilon(1e-10));
    // Werner noise is Pauli-diagonal, so every correction branch sees the
    // same channel.
    for (const BranchResult& b : result.branches) {
      CHECK(b.fidelity == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("state teleportation fidelity does not depend on the input state") {
  Simulation sim(two_node_network(LinkNoise{0.7}, {}, {}));
  for (const auto& prep :
       std::vector<std::vector<std::string>>{{}, {"X"}, {"H"}, {"H", "S"}, {"X", "H", "S"}}) {
    const TeleportResult result = state_teleport(sim, make_input({prep}));
    CHECK(result.fidelity == doctest::Approx((2.0 * 0.7 + 1.0) / 3.0).epsilon(1e-10));
  }
}

TEST_CASE("single-qubit gate teleportation applies the gate") {
  Simulation sim(clean_two_node());
  for (const std::string& name : {"I", "X", "Z", "H", "S"}) {
    const GateMatrix u = gate_by_name(name);
    const InputSpec input = make_input({{"H"}});
    const TeleportResult result = single_gate_teleport(sim, u, input);

    Statevector expected = prepared_state(input);
    apply_gate(expected, u, {0});
    CHECK(overlap(result.ideal, expected) == doctest::Approx(1.0).epsilon(1e-12));

    REQUIRE(result.branches.size() == 4);
    for (const BranchResult& b : result.branches) {
      CHECK(b.fidelity == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(result.fidelity == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("single-qubit gate teleportation through noise keeps the closed form") {
  Simulation sim(two_node_network(LinkNoise{0.7}, {}, {}));
  const TeleportResult result = single_gate_teleport(sim, gate_by_name("H"), make_input({{}}));
  CHECK(result.fidelity == doctest::Approx(0.8).epsilon(1e-10));
}

TEST_CASE("gates above Clifford level 2 are rejected for direct teleportation") {
  Simulation sim(clean_two_node());
  CHECK_THROWS_WITH_AS(single_gate_teleport(sim, make_rz(0.3), make_input({{}})),
                       doctest::Contains("Clifford"), ValidationError);
  CHECK_THROWS_WITH_AS(single_gate_teleport(sim, gate_by_name("CNOT"), make_input({{}})),
                       doctest::Contains("single-qubit"), ValidationError);

  Simulation sim3(clean_three_node());
  CHECK_THROWS_WITH_AS(
      three_node_gate_teleport(sim3, make_rz(M_PI / 4.0), make_input({{}, {}})),
      doctest::Contains("two-qubit"), ValidationError);
}

TEST_CASE("two-node gate teleportation is exact for the Clifford two-qubit gates") {
  Simulation sim(clean_two_node());
  for (const std::string& name : {"CNOT", "DCNOT", "CZ", "SWAP"}) {
    const GateMatrix u = gate_by_name(name);
    const InputSpec input = make_input({{"H"}, {"X"}});
    const TeleportResult result = two_node_gate_teleport(sim, u, input);

    Statevector expected = prepared_state(input);
    apply_gate(expected, u, {0, 1});
    CHECK(overlap(result.ideal, expected) == doctest::Approx(1.0).epsilon(1e-12));

    REQUIRE(result.branches.size() == 16);
    REQUIRE(result.outputs.size() == 2);
    double total = 0.0;
    for (const BranchResult& b : result.branches) {
      CHECK(b.fidelity == doctest::Approx(1.0).epsilon(1e-9));
      total += b.probability;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(result.fidelity == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("wire order survives the asymmetric gates") {
  Simulation sim(clean_three_node());

  // |10>: CNOT flips the target, DCNOT maps |ab> to |b, a xor b>
  const InputSpec input = make_input({{"X"}, {}});

  const TeleportResult cnot = three_node_gate_teleport(sim, gate_by_name("CNOT"), input);
  CHECK(std::norm(cnot.ideal.amp(3)) == doctest::Approx(1.0).epsilon(1e-12));  // |11>

  const TeleportResult dcnot = three_node_gate_teleport(sim, gate_by_name("DCNOT"), input);
  CHECK(std::norm(dcnot.ideal.amp(1)) == doctest::Approx(1.0).epsilon(1e-12));  // |01>

  const TeleportResult swap = three_node_gate_teleport(sim, gate_by_name("SWAP"), input);
  CHECK(std::norm(swap.ideal.amp(1)) == doctest::Approx(1.0).epsilon(1e-12));  // |01>

  for (const TeleportResult* r : {&cnot, &dcnot, &swap}) {
    CHECK(r->fidelity == doctest::Approx(1.0).epsilon(1e-9));
    REQUIRE(r->outputs.size() == 2);
    CHECK(r->outputs[0].node == "gate");
    CHECK(r->outputs[1].node == "gate");
  }
}

TEST_CASE("three-node gate teleportation is exact on a clean star") {
  Simulation sim(clean_three_node());
  for (const std::string& name : {"CNOT", "DCNOT", "CZ", "SWAP"}) {
    const TeleportResult result =
        three_node_gate_teleport(sim, gate_by_name(name), make_input({{"H"}, {"H", "S"}}));
    REQUIRE(result.branches.size() == 16);
    for (const BranchResult& b : result.branches) {
      CHECK(b.fidelity == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(b.bits.size() == 4);
    }
    CHECK(result.fidelity == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("two independent Werner wires multiply the channel fidelities") {
  const double f = 0.8;
  Simulation sim(two_node_network(LinkNoise{f}, {}, {}));
  const TeleportResult result =
      two_node_gate_teleport(sim, gate_by_name("CNOT"), make_input({{"H"}, {"H"}}));
  const double wire = (1.0 + channel_p(f)) / 2.0;
  CHECK(result.fidelity == doctest::Approx(wire * wire).epsilon(1e-10));

  Simulation star(three_node_network(LinkNoise{f}, LinkNoise{f}, {}, {}, {}));
  const TeleportResult star_result =
      three_node_gate_teleport(star, gate_by_name("CNOT"), make_input({{"H"}, {"H"}}));
  CHECK(star_result.fidelity == doctest::Approx(wire * wire).epsilon(1e-10));
}

TEST_CASE("noise on the links and on the gate node both cost fidelity") {
  const TeleportResult clean = three_node_gate_teleport(
      Simulation(clean_three_node()), gate_by_name("CNOT"), InputSpec::plus_states(2));
  CHECK(clean.fidelity == doctest::Approx(1.0).epsilon(1e-9));

  Simulation noisy_links(three_node_network(LinkNoise{0.9}, LinkNoise{0.9}, {}, {}, {}));
  const TeleportResult via_links =
      three_node_gate_teleport(noisy_links, gate_by_name("CNOT"), InputSpec::plus_states(2));
  CHECK(via_links.fidelity < 1.0 - 1e-6);
  CHECK(via_links.fidelity > 0.5);

  DeviceNoise hub;
  hub.single_qubit_depol = 0.02;
  hub.two_qubit_depol = 0.02;
  Simulation noisy_hub(three_node_network(LinkNoise{1.0}, LinkNoise{1.0}, {}, {}, hub));
  const TeleportResult via_hub =
      three_node_gate_teleport(noisy_hub, gate_by_name("CNOT"), InputSpec::plus_states(2));
  CHECK(via_hub.fidelity < 1.0 - 1e-6);
  CHECK(via_hub.fidelity > 0.5);
}

TEST_CASE("corrections are what make the protocol work") {
  Simulation sim(clean_three_node());
  ProtocolOptions options;
  options.apply_corrections = false;
  const TeleportResult result =
      three_node_gate_teleport(sim, gate_by_name("CNOT"), make_input({{}, {}}), options);
  // without corrections each wire is a fully twirled (maximally mixed) qubit
  CHECK(result.fidelity == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("toffoli teleportation is exact for every computational input") {
  Simulation sim(clean_four_node());
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        std::vector<std::vector<std::string>> preps(3);
        if (a) preps[0] = {"X"};
        if (b) preps[1] = {"X"};
        if (c) preps[2] = {"X"};
        const InputSpec input = make_input(preps);
        const TeleportResult result = toffoli_teleport(sim, input);

        const int flipped = (a && b) ? 1 - c : c;
        const int index = (a << 2) | (b << 1) | flipped;
        CHECK(std::norm(result.ideal.amp(index)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(result.fidelity == doctest::Approx(1.0).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("toffoli teleportation handles superposition inputs branch by branch") {
  Simulation sim(clean_four_node());
  const TeleportResult result = toffoli_teleport(sim, InputSpec::plus_states(3));
  REQUIRE(result.branches.size() == 64);
  REQUIRE(result.outputs.size() == 3);
  double total = 0.0;
  for (const BranchResult& b : result.branches) {
    CHECK(b.fidelity == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(b.bits.size() == 6);
    total += b.probability;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(result.fidelity == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sampled protocol runs draw one branch reproducibly") {
  Simulation sim(clean_two_node());
  ProtocolOptions options;
  options.run.mode = RunOptions::Mode::Sampled;
  options.run.seed = 42;

  const TeleportResult once =
      two_node_gate_teleport(sim, gate_by_name("SWAP"), make_input({{"X"}, {}}), options);
  const TeleportResult again =
      two_node_gate_teleport(sim, gate_by_name("SWAP"), make_input({{"X"}, {}}), options);
  REQUIRE(once.branches.size() == 1);
  CHECK(once.branches[0].probability == doctest::Approx(1.0));
  CHECK(once.fidelity == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(again.branches.size() == 1);
  CHECK(once.branches[0].bits == again.branches[0].bits);
  CHECK(once.fidelity == again.fidelity);
}

TEST_CASE("sampled fidelities live in the exact branch set") {
  Simulation sim(two_node_network(LinkNoise{0.9}, {}, {}));
  const InputSpec input = make_input({{"H"}, {}});
  const TeleportResult exact = two_node_gate_teleport(sim, gate_by_name("CZ"), input);

  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    ProtocolOptions options;
    options.run.mode = RunOptions::Mode::Sampled;
    options.run.seed = seed;
    const TeleportResult sampled = two_node_gate_teleport(sim, gate_by_name("CZ"), input, options);
    bool found = false;
    for (const BranchResult& b : exact.branches) {
      if (std::abs(b.fidelity - sampled.fidelity) < 1e-9) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("protocols check their inputs and networks") {
  Simulation sim(clean_two_node());
  CHECK_THROWS_WITH_AS(state_teleport(sim, make_input({{}, {}})), doctest::Contains("input"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(two_node_gate_teleport(sim, gate_by_name("CNOT"),
                                              make_input({{"CNOT"}, {}})),
                       doctest::Contains("not single-qubit"), ValidationError);

  // a two-node protocol cannot run on a star
  Simulation star(clean_three_node());
  CHECK_THROWS_AS(state_teleport(star, make_input({{}})), ValidationError);
  // and the star protocols need the star
  CHECK_THROWS_AS(three_node_gate_teleport(sim, gate_by_name("CNOT"), make_input({{}, {}})),
                  ValidationError);
  CHECK_THROWS_AS(toffoli_teleport(sim, make_input({{}, {}, {}})), ValidationError);
}

TEST_CASE("protocols run on any structurally matching network") {
  NetworkConfig cfg = build_network({{"alice", DeviceNoise{}}, {"bob", DeviceNoise{}}},
                                    {{"alice", "bob", LinkNoise{1.0}}}, {{"alice", "bob"}});
  Simulation sim(cfg);
  const TeleportResult result = state_teleport(sim, make_input({{"H"}}));
  CHECK(result.fidelity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(result.outputs[0].node == "bob");
}
