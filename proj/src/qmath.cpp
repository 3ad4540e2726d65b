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

#include "tsim/qmath.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <vector>

namespace tsim {

namespace {

constexpr int kMaxGateQubits = 3;

// Position of qubit q's bit inside a basis index of an n-qubit register.
inline int bit_shift(int n_qubits, int q) { return n_qubits - 1 - q; }

void check_targets(int n_qubits, const GateMatrix& g, std::span<const int> targets) {
  if (static_cast<int>(targets.size()) != g.n_qubits) {
    throw ValidationError("gate '" + g.name + "' expects " + std::to_string(g.n_qubits) +
                          " target(s), got " + std::to_string(targets.size()));
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n_qubits) {
      throw ValidationError("target qubit " + std::to_string(targets[i]) +
                            " out of range for a " + std::to_string(n_qubits) +
                            "-qubit register");
    }
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (targets[i] == targets[j]) {
        throw ValidationError("duplicate target qubit " + std::to_string(targets[i]));
      }
    }
  }
}

// Applies g (or its entrywise conjugate) to one strided amplitude span.
// Strides let the same kernel run over statevectors, density-matrix columns
// (stride 1) and density-matrix rows (stride = dim).
void apply_to_span(cx* data, std::ptrdiff_t stride, int n_qubits, const Mat& g,
                   std::span<const int> targets, bool conjugate_entries) {
  const int k = static_cast<int>(targets.size());
  const std::size_t dim = std::size_t{1} << n_qubits;
  const int sub = 1 << k;

  std::size_t mask = 0;
  std::array<std::size_t, 1 << kMaxGateQubits> offset{};
  for (int j = 0; j < k; ++j) mask |= std::size_t{1} << bit_shift(n_qubits, targets[j]);
  for (int m = 0; m < sub; ++m) {
    std::size_t off = 0;
    for (int j = 0; j < k; ++j) {
      if ((m >> (k - 1 - j)) & 1) off |= std::size_t{1} << bit_shift(n_qubits, targets[j]);
    }
    offset[m] = off;
  }

  std::array<cx, 1 << kMaxGateQubits> in{};
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (int m = 0; m < sub; ++m) in[m] = data[static_cast<std::ptrdiff_t>(base | offset[m]) * stride];
    for (int r = 0; r < sub; ++r) {
      cx acc = 0;
      for (int c = 0; c < sub; ++c) {
        const cx e = g(r, c);
        acc += (conjugate_entries ? std::conj(e) : e) * in[c];
      }
      data[static_cast<std::ptrdiff_t>(base | offset[r]) * stride] = acc;
    }
  }
}

Mat mat2(cx a, cx b, cx c, cx d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

const Mat& pauli_i() { static const Mat m = Mat::Identity(2, 2); return m; }
const Mat& pauli_x() { static const Mat m = mat2(0, 1, 1, 0); return m; }
const Mat& pauli_y() { static const Mat m = mat2(0, cx(0, -1), cx(0, 1), 0); return m; }
const Mat& pauli_z() { static const Mat m = mat2(1, 0, 0, -1); return m; }

Mat hadamard() { return mat2(1, 1, 1, -1) / std::sqrt(2.0); }
Mat phase_s() { return mat2(1, 0, 0, cx(0, 1)); }

Mat cnot_mat() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 1; m(1, 1) = 1; m(2, 3) = 1; m(3, 2) = 1;
  return m;
}

// CNOT(0->1) followed by CNOT(1->0): |ab> -> |b, a xor b>.
Mat dcnot_mat() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 1; m(3, 1) = 1; m(1, 2) = 1; m(2, 3) = 1;
  return m;
}

Mat cz_mat() {
  Mat m = Mat::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}

Mat swap_mat() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 1; m(1, 2) = 1; m(2, 1) = 1; m(3, 3) = 1;
  return m;
}

Mat toffoli_mat() {
  Mat m = Mat::Identity(8, 8);
  m(6, 6) = 0; m(7, 7) = 0; m(6, 7) = 1; m(7, 6) = 1;
  return m;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

}  // namespace

Statevector Statevector::zero_state(int n_qubits) {
  if (n_qubits < 1) throw ValidationError("register needs at least one qubit");
  Statevector psi;
  psi.n_qubits = n_qubits;
  psi.amp = Vec::Zero(std::int64_t{1} << n_qubits);
  psi.amp(0) = 1.0;
  return psi;
}

DensityMatrix DensityMatrix::zero_state(int n_qubits) {
  return from_statevector(Statevector::zero_state(n_qubits));
}

DensityMatrix DensityMatrix::from_statevector(const Statevector& psi) {
  DensityMatrix rho;
  rho.n_qubits = psi.n_qubits;
  rho.mat = psi.amp * psi.amp.adjoint();
  return rho;
}

GateMatrix GateMatrix::adjoint() const {
  return GateMatrix{name + "'", n_qubits, mat.adjoint()};
}

GateMatrix make_rz(double theta) {
  const cx half(0, -theta / 2);
  return GateMatrix{"RZ(" + std::to_string(theta) + ")", 1,
                    mat2(std::exp(half), 0, 0, std::exp(-half))};
}

GateMatrix make_rx(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return GateMatrix{"RX(" + std::to_string(theta) + ")", 1,
                    mat2(c, cx(0, -s), cx(0, -s), c)};
}

GateMatrix gate_by_name(const std::string& name) {
  const std::string u = upper(name);
  if (u == "I") return {"I", 1, pauli_i()};
  if (u == "X") return {"X", 1, pauli_x()};
  if (u == "Y") return {"Y", 1, pauli_y()};
  if (u == "Z") return {"Z", 1, pauli_z()};
  if (u == "H") return {"H", 1, hadamard()};
  if (u == "S") return {"S", 1, phase_s()};
  if (u == "CNOT") return {"CNOT", 2, cnot_mat()};
  if (u == "DCNOT") return {"DCNOT", 2, dcnot_mat()};
  if (u == "CZ") return {"CZ", 2, cz_mat()};
  if (u == "SWAP") return {"SWAP", 2, swap_mat()};
  if (u == "TOFF") return {"TOFF", 3, toffoli_mat()};
  if ((u.rfind("RZ(", 0) == 0 || u.rfind("RX(", 0) == 0) && u.back() == ')') {
    const std::string arg = u.substr(3, u.size() - 4);
    std::size_t used = 0;
    double theta = 0;
    try {
      theta = std::stod(arg, &used);
    } catch (const std::exception&) {
      throw ValidationError("bad rotation angle in '" + name + "'");
    }
    if (used != arg.size()) throw ValidationError("bad rotation angle in '" + name + "'");
    return u[1] == 'Z' ? make_rz(theta) : make_rx(theta);
  }
  throw ValidationError("unknown gate name '" + name + "'");
}

void apply_gate(Statevector& psi, const GateMatrix& g, std::span<const int> targets) {
  check_targets(psi.n_qubits, g, targets);
  apply_to_span(psi.amp.data(), 1, psi.n_qubits, g.mat, targets, false);
}

void apply_gate(DensityMatrix& rho, const GateMatrix& g, std::span<const int> targets) {
  check_targets(rho.n_qubits, g, targets);
  const std::ptrdiff_t dim = rho.mat.rows();
  for (std::ptrdiff_t c = 0; c < dim; ++c) {
    apply_to_span(rho.mat.data() + c * dim, 1, rho.n_qubits, g.mat, targets, false);
  }
  for (std::ptrdiff_t r = 0; r < dim; ++r) {
    apply_to_span(rho.mat.data() + r, dim, rho.n_qubits, g.mat, targets, true);
  }
}

void apply_gate(Statevector& psi, const GateMatrix& g, std::initializer_list<int> targets) {
  apply_gate(psi, g, std::span<const int>(targets.begin(), targets.size()));
}

void apply_gate(DensityMatrix& rho, const GateMatrix& g, std::initializer_list<int> targets) {
  apply_gate(rho, g, std::span<const int>(targets.begin(), targets.size()));
}

Mat embed(const GateMatrix& g, int n_qubits, std::span<const int> targets) {
  check_targets(n_qubits, g, targets);
  const std::ptrdiff_t dim = std::ptrdiff_t{1} << n_qubits;
  Mat full = Mat::Identity(dim, dim);
  for (std::ptrdiff_t c = 0; c < dim; ++c) {
    apply_to_span(full.data() + c * dim, 1, n_qubits, g.mat, targets, false);
  }
  return full;
}

std::array<MeasurementBranch, 2> measure_branches(const DensityMatrix& rho, int qubit) {
  if (qubit < 0 || qubit >= rho.n_qubits) {
    throw ValidationError("measured qubit " + std::to_string(qubit) + " out of range");
  }
  const std::size_t dim = rho.dim();
  const std::size_t bit = std::size_t{1} << bit_shift(rho.n_qubits, qubit);

  std::array<MeasurementBranch, 2> branches;
  double prob[2] = {0, 0};
  for (std::size_t i = 0; i < dim; ++i) prob[(i & bit) ? 1 : 0] += rho.mat(i, i).real();

  for (int b = 0; b < 2; ++b) {
    MeasurementBranch& br = branches[b];
    br.outcome = b;
    br.probability = std::max(prob[b], 0.0);
    br.valid = br.probability >= kBranchCutoff;
    if (!br.valid) continue;
    br.post_state.n_qubits = rho.n_qubits;
    br.post_state.mat = Mat::Zero(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      if (((r & bit) != 0) != (b == 1)) continue;
      for (std::size_t c = 0; c < dim; ++c) {
        if (((c & bit) != 0) != (b == 1)) continue;
        br.post_state.mat(r, c) = rho.mat(r, c) / br.probability;
      }
    }
  }
  return branches;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  if (keep.empty()) throw ValidationError("partial_trace needs at least one kept qubit");
  const int n = rho.n_qubits;
  std::vector<bool> kept(n, false);
  for (int q : keep) {
    if (q < 0 || q >= n) throw ValidationError("kept qubit " + std::to_string(q) + " out of range");
    if (kept[q]) throw ValidationError("duplicate kept qubit " + std::to_string(q));
    kept[q] = true;
  }

  const int k = static_cast<int>(keep.size());
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!kept[q]) traced.push_back(q);
  }

  const std::size_t kdim = std::size_t{1} << k;
  const std::size_t tdim = std::size_t{1} << (n - k);

  // Bit j of a reduced index (j = 0 most significant) belongs to keep[j].
  std::vector<std::size_t> keep_base(kdim, 0), traced_base(tdim, 0);
  for (std::size_t a = 0; a < kdim; ++a) {
    for (int j = 0; j < k; ++j) {
      if ((a >> (k - 1 - j)) & 1) keep_base[a] |= std::size_t{1} << bit_shift(n, keep[j]);
    }
  }
  for (std::size_t t = 0; t < tdim; ++t) {
    for (int j = 0; j < n - k; ++j) {
      if ((t >> (n - k - 1 - j)) & 1) traced_base[t] |= std::size_t{1} << bit_shift(n, traced[j]);
    }
  }

  DensityMatrix out;
  out.n_qubits = k;
  out.mat = Mat::Zero(kdim, kdim);
  for (std::size_t a = 0; a < kdim; ++a) {
    for (std::size_t b = 0; b < kdim; ++b) {
      cx acc = 0;
      for (std::size_t t = 0; t < tdim; ++t) {
        acc += rho.mat(keep_base[a] | traced_base[t], keep_base[b] | traced_base[t]);
      }
      out.mat(a, b) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

double fidelity_pure(const DensityMatrix& rho, const Statevector& psi) {
  if (rho.dim() != psi.dim()) {
    throw ValidationError("fidelity_pure dimension mismatch: " + std::to_string(rho.dim()) +
                          " vs " + std::to_string(psi.dim()));
  }
  const cx v = psi.amp.adjoint() * rho.mat * psi.amp;
  return std::clamp(v.real(), 0.0, 1.0);
}

Statevector tensor(const Statevector& a, const Statevector& b) {
  Statevector out;
  out.n_qubits = a.n_qubits + b.n_qubits;
  out.amp = Vec::Zero(static_cast<std::int64_t>(a.dim() * b.dim()));
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) out.amp(i * b.dim() + j) = a.amp(i) * b.amp(j);
  }
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  DensityMatrix out;
  out.n_qubits = a.n_qubits + b.n_qubits;
  const std::size_t da = a.dim(), db = b.dim();
  out.mat = Mat::Zero(da * db, da * db);
  for (std::size_t ra = 0; ra < da; ++ra) {
    for (std::size_t ca = 0; ca < da; ++ca) {
      out.mat.block(ra * db, ca * db, db, db) = a.mat(ra, ca) * b.mat;
    }
  }
  return out;
}

bool approx_equal(const Mat& a, const Mat& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

bool equal_up_to_phase(const Mat& a, const Mat& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  Eigen::Index r = 0, c = 0;
  const double mag = b.cwiseAbs().maxCoeff(&r, &c);
  if (mag <= tol) return approx_equal(a, b, tol);
  const cx ratio = a(r, c) / b(r, c);
  if (std::abs(std::abs(ratio) - 1.0) > tol) return false;
  return approx_equal(a, (ratio / std::abs(ratio)) * b, tol);
}

bool is_unitary(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m.adjoint() * m - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace tsim
