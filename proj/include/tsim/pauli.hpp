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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tsim/qmath.hpp"

namespace tsim {

// Decomposition coefficients with magnitude at or below this are dropped.
inline constexpr double kDecomposeCutoff = 1e-10;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);

struct PauliString {
  cx coefficient{1.0, 0.0};
  std::vector<Pauli> factors;

  static PauliString from_pattern(const std::string& pattern, cx coefficient = 1.0);

  int n_qubits() const { return static_cast<int>(factors.size()); }
  bool is_identity() const;
  std::string pattern() const;
  std::string to_string() const;
  Mat matrix() const;  // coefficient included
  bool commutes_with(const PauliString& other) const;
};

struct PauliSum {
  std::vector<PauliString> terms;

  int n_qubits() const { return terms.empty() ? 0 : terms.front().n_qubits(); }
  Mat matrix() const;
  std::string to_string() const;
};

// A correction is either a signed Pauli operator or a genuine sum of them.
using Correction = std::variant<PauliString, PauliSum>;

Mat correction_matrix(const Correction& c);
std::string correction_to_string(const Correction& c);

struct CorrectionEntry {
  PauliString basis;      // weight-one X or Z
  Correction correction;  // u * basis * u^dagger
};

struct CorrectionTable {
  std::string gate_name;
  int n_qubits = 0;
  std::vector<CorrectionEntry> entries;  // basis order X0, Z0, X1, Z1, ...
};

// Weight-one basis [X0, Z0, X1, Z1, ...] whose corrections determine the
// teleported gate's classical control layer.
std::vector<PauliString> teleport_basis(int n_qubits);

// Expands m over the Pauli basis; coefficients are Tr(P m) / 2^n.
PauliSum pauli_decompose(const Mat& m);

// u * p * u^dagger as a matrix.
Mat conjugate(const GateMatrix& u, const PauliString& p);

CorrectionTable correction_table(const GateMatrix& u);

// Smallest k <= k_max with u in the k-th level of the Clifford hierarchy,
// or nullopt if u sits above k_max.
std::optional<int> clifford_level(const GateMatrix& u, int k_max = 4);

struct CircuitGate {
  std::string gate;  // library gate name; "RZ"/"RX" carry an angle
  std::vector<int> targets;
  std::optional<double> angle;

  GateMatrix materialize() const;
};

struct CorrectionCircuit {
  int n_qubits = 0;
  std::vector<CircuitGate> gates;
  Mat target;  // unitary the gate list realizes, up to global phase

  Mat matrix() const;
};

// Circuit for exp(-i * theta * sum_j c_j P_j). Terms must pairwise commute
// and have real coefficients. Each term contributes a basis change, a CNOT
// ladder and an RZ through angle 2 * theta * c_j.
CorrectionCircuit pauli_exponential_circuit(const PauliSum& h, double theta);

// Executable form of one correction-table entry: plain Pauli gates for a
// signed Pauli, an exponential circuit at theta = pi/2 for a sum (the
// corrections are Hermitian unitaries C, and exp(-i*pi/2*C) = -iC).
CorrectionCircuit correction_circuit(const CorrectionEntry& entry);

std::string format_correction_table(const CorrectionTable& table);

}  // namespace tsim
