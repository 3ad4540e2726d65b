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

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

#include "tsim/error.hpp"

namespace tsim {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Measurement branches below this probability are considered unreachable.
inline constexpr double kBranchCutoff = 1e-12;

// Qubit 0 is the most significant bit of a basis-state index, so an n-qubit
// register reads |q0 q1 ... q_{n-1}> and X on qubit 0 of |00> gives |10>.

struct Statevector {
  int n_qubits = 0;
  Vec amp;

  static Statevector zero_state(int n_qubits);
  std::size_t dim() const { return static_cast<std::size_t>(amp.size()); }
};

struct DensityMatrix {
  int n_qubits = 0;
  Mat mat;

  static DensityMatrix zero_state(int n_qubits);
  static DensityMatrix from_statevector(const Statevector& psi);
  std::size_t dim() const { return static_cast<std::size_t>(mat.rows()); }
  double trace_real() const { return mat.trace().real(); }
};

struct GateMatrix {
  std::string name;
  int n_qubits = 0;
  Mat mat;

  GateMatrix adjoint() const;
};

struct MeasurementBranch {
  int outcome = 0;
  double probability = 0.0;
  bool valid = false;
  DensityMatrix post_state;  // empty when !valid
};

// Library gates: I, X, Y, Z, H, S, RZ(theta), RX(theta), CNOT, DCNOT, CZ,
// SWAP, TOFF. Names are case-insensitive; rotation angles are radians.
GateMatrix gate_by_name(const std::string& name);
GateMatrix make_rz(double theta);
GateMatrix make_rx(double theta);

void apply_gate(Statevector& psi, const GateMatrix& g, std::span<const int> targets);
void apply_gate(DensityMatrix& rho, const GateMatrix& g, std::span<const int> targets);
void apply_gate(Statevector& psi, const GateMatrix& g, std::initializer_list<int> targets);
void apply_gate(DensityMatrix& rho, const GateMatrix& g, std::initializer_list<int> targets);

// Full 2^n x 2^n matrix of g acting on `targets` inside an n-qubit register.
Mat embed(const GateMatrix& g, int n_qubits, std::span<const int> targets);

// Projective Z measurement of one qubit; branch order is outcome 0, 1.
std::array<MeasurementBranch, 2> measure_branches(const DensityMatrix& rho, int qubit);

// Reduced state over `keep`, whose order fixes the output qubit order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep);

// <psi| rho |psi>, clamped to [0, 1].
double fidelity_pure(const DensityMatrix& rho, const Statevector& psi);

Statevector tensor(const Statevector& a, const Statevector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

bool approx_equal(const Mat& a, const Mat& b, double tol);
bool equal_up_to_phase(const Mat& a, const Mat& b, double tol);
bool is_unitary(const Mat& m, double tol = 1e-9);

}  // namespace tsim
