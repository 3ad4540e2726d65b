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

#include <span>

#include "tsim/qmath.hpp"

namespace tsim {

struct LinkNoise {
  double epr_fidelity = 1.0;  // Werner-state fidelity to |Phi+>, in [0.25, 1]
};

struct DeviceNoise {
  double single_qubit_depol = 0.0;
  double two_qubit_depol = 0.0;  // also used for wider gates
  double measurement_flip = 0.0;

  bool is_zero() const {
    return single_qubit_depol == 0.0 && two_qubit_depol == 0.0 && measurement_flip == 0.0;
  }
};

// Werner pair f*|Phi+><Phi+| + (1-f)/3 * (rest of the Bell basis), i.e.
// p*|Phi+><Phi+| + (1-p)*I/4 with p = (4f-1)/3.
DensityMatrix werner_epr(double fidelity);

// Uniform depolarizing channel on 1 or 2 target qubits: with probability p
// the targets are replaced by a uniformly random non-identity Pauli, which
// equals mixing toward the maximally mixed marginal with weight
// p * 4^k / (4^k - 1).
void depolarize(DensityMatrix& rho, std::span<const int> targets, double p);
void depolarize(DensityMatrix& rho, std::initializer_list<int> targets, double p);

// apply_gate followed by depolarization of the gate's targets at the
// arity-matching rate; gates on three qubits use the two-qubit rate.
void noisy_apply(DensityMatrix& rho, const GateMatrix& g, std::span<const int> targets,
                 const DeviceNoise& noise);

}  // namespace tsim
