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

#include "tsim/noise.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace tsim {

namespace {

// rho with the target qubits replaced by I/2^k, all other qubits untouched.
Mat replace_with_mixed(const DensityMatrix& rho, std::span<const int> targets) {
  const int n = rho.n_qubits;
  const int k = static_cast<int>(targets.size());
  const std::size_t dim = rho.dim();
  const std::size_t sub = std::size_t{1} << k;

  std::size_t mask = 0;
  std::vector<std::size_t> offset(sub, 0);
  for (int j = 0; j < k; ++j) mask |= std::size_t{1} << (n - 1 - targets[j]);
  for (std::size_t m = 0; m < sub; ++m) {
    for (int j = 0; j < k; ++j) {
      if ((m >> (k - 1 - j)) & 1) offset[m] |= std::size_t{1} << (n - 1 - targets[j]);
    }
  }

  Mat out = Mat::Zero(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    if (r & mask) continue;
    for (std::size_t c = 0; c < dim; ++c) {
      if (c & mask) continue;
      cx acc = 0;
      for (std::size_t t = 0; t < sub; ++t) acc += rho.mat(r | offset[t], c | offset[t]);
      acc /= static_cast<double>(sub);
      for (std::size_t t = 0; t < sub; ++t) out(r | offset[t], c | offset[t]) = acc;
    }
  }
  return out;
}

void depolarize_any_arity(DensityMatrix& rho, std::span<const int> targets, double p) {
  if (p == 0.0) return;
  const double paulis = std::pow(4.0, static_cast<double>(targets.size()));
  const double gamma = p * paulis / (paulis - 1.0);
  rho.mat = (1.0 - gamma) * rho.mat + gamma * replace_with_mixed(rho, targets);
}

void check_depol_args(const DensityMatrix& rho, std::span<const int> targets, double p,
                      std::size_t max_targets) {
  if (p < 0.0 || p > 1.0) {
    throw ValidationError("depolarizing probability " + std::to_string(p) + " outside [0, 1]");
  }
  if (targets.empty() || targets.size() > max_targets) {
    throw ValidationError("depolarize acts on 1 to " + std::to_string(max_targets) +
                          " qubits, got " + std::to_string(targets.size()));
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= rho.n_qubits) {
      throw ValidationError("depolarize target " + std::to_string(targets[i]) + " out of range");
    }
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (targets[i] == targets[j]) {
        throw ValidationError("duplicate depolarize target " + std::to_string(targets[i]));
      }
    }
  }
}

}  // namespace

DensityMatrix werner_epr(double fidelity) {
  if (fidelity < 0.25 || fidelity > 1.0) {
    throw ValidationError("Werner fidelity " + std::to_string(fidelity) + " outside [0.25, 1]");
  }
  const double p = (4.0 * fidelity - 1.0) / 3.0;

  Statevector phi_plus;
  phi_plus.n_qubits = 2;
  phi_plus.amp = Vec::Zero(4);
  phi_plus.amp(0) = phi_plus.amp(3) = 1.0 / std::sqrt(2.0);

  DensityMatrix rho = DensityMatrix::from_statevector(phi_plus);
  rho.mat = p * rho.mat + (1.0 - p) * 0.25 * Mat::Identity(4, 4);
  return rho;
}

void depolarize(DensityMatrix& rho, std::span<const int> targets, double p) {
  check_depol_args(rho, targets, p, 2);
  depolarize_any_arity(rho, targets, p);
}

void depolarize(DensityMatrix& rho, std::initializer_list<int> targets, double p) {
  depolarize(rho, std::span<const int>(targets.begin(), targets.size()), p);
}

void noisy_apply(DensityMatrix& rho, const GateMatrix& g, std::span<const int> targets,
                 const DeviceNoise& noise) {
  apply_gate(rho, g, targets);
  const double p = targets.size() == 1 ? noise.single_qubit_depol : noise.two_qubit_depol;
  if (p == 0.0) return;
  check_depol_args(rho, targets, p, 3);
  depolarize_any_arity(rho, targets, p);
}

}  // namespace tsim
