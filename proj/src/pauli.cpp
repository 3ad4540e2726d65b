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

#include "tsim/pauli.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace tsim {

namespace {

constexpr double kRealTol = 1e-12;

int qubit_count_for_dim(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows != cols || rows < 2) throw ValidationError(std::string(what) + ": matrix must be square with dimension >= 2");
  int n = 0;
  Eigen::Index d = rows;
  while (d > 1) {
    if (d & 1) throw ValidationError(std::string(what) + ": dimension is not a power of two");
    d >>= 1;
    ++n;
  }
  return n;
}

// Nonzero entries of a Pauli pattern P sit at (row(c), c). Walking columns
// once gives Tr(P m) = sum_c P(row(c), c) * m(c, row(c)) without building P.
cx pattern_trace(const std::vector<Pauli>& factors, const Mat& m) {
  const int n = static_cast<int>(factors.size());
  const std::size_t dim = std::size_t{1} << n;
  cx total = 0;
  for (std::size_t c = 0; c < dim; ++c) {
    std::size_t r = c;
    cx phase = 1.0;
    for (int q = 0; q < n; ++q) {
      const std::size_t bit = std::size_t{1} << (n - 1 - q);
      const bool set = (c & bit) != 0;
      switch (factors[q]) {
        case Pauli::I: break;
        case Pauli::X: r ^= bit; break;
        case Pauli::Y: r ^= bit; phase *= set ? cx(0, -1) : cx(0, 1); break;
        case Pauli::Z: if (set) phase = -phase; break;
      }
    }
    total += phase * m(c, r);
  }
  return total;
}

std::string format_coefficient(cx c) {
  char buf[64];
  if (std::abs(c.imag()) <= kRealTol) {
    if (std::abs(c.real() - 1.0) <= kRealTol) return "";
    if (std::abs(c.real() + 1.0) <= kRealTol) return "-";
    std::snprintf(buf, sizeof buf, "%g*", c.real());
    return buf;
  }
  if (std::abs(c.real()) <= kRealTol) {
    if (std::abs(c.imag() - 1.0) <= kRealTol) return "i*";
    if (std::abs(c.imag() + 1.0) <= kRealTol) return "-i*";
    std::snprintf(buf, sizeof buf, "%gi*", c.imag());
    return buf;
  }
  std::snprintf(buf, sizeof buf, "(%g%+gi)*", c.real(), c.imag());
  return buf;
}

bool is_signed_pauli(const Mat& m) {
  const PauliSum s = pauli_decompose(m);
  return s.terms.size() == 1 && std::abs(std::abs(s.terms.front().coefficient) - 1.0) <= 1e-9;
}

bool in_level(const Mat& m, int k, const std::vector<PauliString>& basis) {
  if (k <= 1) return is_signed_pauli(m);
  for (const PauliString& sigma : basis) {
    const Mat conj = m * sigma.matrix() * m.adjoint();
    if (!in_level(conj, k - 1, basis)) return false;
  }
  return true;
}

}  // namespace

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

PauliString PauliString::from_pattern(const std::string& pattern, cx coefficient) {
  PauliString p;
  p.coefficient = coefficient;
  p.factors.reserve(pattern.size());
  for (char c : pattern) {
    switch (c) {
      case 'I': p.factors.push_back(Pauli::I); break;
      case 'X': p.factors.push_back(Pauli::X); break;
      case 'Y': p.factors.push_back(Pauli::Y); break;
      case 'Z': p.factors.push_back(Pauli::Z); break;
      default: throw ValidationError(std::string("bad Pauli letter '") + c + "' in pattern '" + pattern + "'");
    }
  }
  if (p.factors.empty()) throw ValidationError("empty Pauli pattern");
  return p;
}

bool PauliString::is_identity() const {
  for (Pauli f : factors) {
    if (f != Pauli::I) return false;
  }
  return true;
}

std::string PauliString::pattern() const {
  std::string s;
  s.reserve(factors.size());
  for (Pauli f : factors) s.push_back(pauli_char(f));
  return s;
}

std::string PauliString::to_string() const { return format_coefficient(coefficient) + pattern(); }

Mat PauliString::matrix() const {
  if (factors.empty()) throw ValidationError("empty Pauli string");
  static const Mat singles[4] = {
      gate_by_name("I").mat, gate_by_name("X").mat, gate_by_name("Y").mat, gate_by_name("Z").mat};
  Mat m = singles[static_cast<int>(factors[0])];
  for (std::size_t q = 1; q < factors.size(); ++q) {
    const Mat& f = singles[static_cast<int>(factors[q])];
    Mat next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) next.block(r * 2, c * 2, 2, 2) = m(r, c) * f;
    }
    m = std::move(next);
  }
  return coefficient * m;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (factors.size() != other.factors.size()) {
    throw ValidationError("commutes_with: qubit-count mismatch");
  }
  int anti = 0;
  for (std::size_t q = 0; q < factors.size(); ++q) {
    const Pauli a = factors[q], b = other.factors[q];
    if (a != Pauli::I && b != Pauli::I && a != b) ++anti;
  }
  return anti % 2 == 0;
}

Mat PauliSum::matrix() const {
  if (terms.empty()) throw ValidationError("empty Pauli sum");
  Mat m = terms.front().matrix();
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i].n_qubits() != terms.front().n_qubits()) {
      throw ValidationError("Pauli sum mixes qubit counts");
    }
    m += terms[i].matrix();
  }
  return m;
}

std::string PauliSum::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const PauliString& t = terms[i];
    if (i == 0) {
      s = t.to_string();
      continue;
    }
    if (std::abs(t.coefficient.imag()) <= kRealTol && t.coefficient.real() < 0) {
      PauliString flipped = t;
      flipped.coefficient = -t.coefficient;
      s += " - " + flipped.to_string();
    } else {
      s += " + " + t.to_string();
    }
  }
  return s;
}

Mat correction_matrix(const Correction& c) {
  return std::visit([](const auto& v) { return v.matrix(); }, c);
}

std::string correction_to_string(const Correction& c) {
  return std::visit([](const auto& v) { return v.to_string(); }, c);
}

std::vector<PauliString> teleport_basis(int n_qubits) {
  if (n_qubits < 1) throw ValidationError("teleport_basis needs at least one qubit");
  std::vector<PauliString> basis;
  basis.reserve(2 * n_qubits);
  for (int q = 0; q < n_qubits; ++q) {
    for (Pauli p : {Pauli::X, Pauli::Z}) {
      PauliString s;
      s.factors.assign(n_qubits, Pauli::I);
      s.factors[q] = p;
      basis.push_back(std::move(s));
    }
  }
  return basis;
}

PauliSum pauli_decompose(const Mat& m) {
  const int n = qubit_count_for_dim(m.rows(), m.cols(), "pauli_decompose");
  const double norm = static_cast<double>(std::size_t{1} << n);

  PauliSum sum;
  std::vector<Pauli> factors(n, Pauli::I);
  const std::size_t patterns = std::size_t{1} << (2 * n);
  for (std::size_t code = 0; code < patterns; ++code) {
    for (int q = 0; q < n; ++q) {
      factors[q] = static_cast<Pauli>((code >> (2 * (n - 1 - q))) & 3);
    }
    const cx coeff = pattern_trace(factors, m) / norm;
    if (std::abs(coeff) > kDecomposeCutoff) {
      sum.terms.push_back(PauliString{coeff, factors});
    }
  }
  return sum;
}

Mat conjugate(const GateMatrix& u, const PauliString& p) {
  if (!is_unitary(u.mat)) throw ValidationError("conjugate: gate '" + u.name + "' is not unitary");
  if (p.n_qubits() != u.n_qubits) {
    throw ValidationError("conjugate: Pauli string acts on " + std::to_string(p.n_qubits()) +
                          " qubit(s), gate '" + u.name + "' on " + std::to_string(u.n_qubits));
  }
  return u.mat * p.matrix() * u.mat.adjoint();
}

CorrectionTable correction_table(const GateMatrix& u) {
  if (!is_unitary(u.mat)) throw ValidationError("correction_table: gate '" + u.name + "' is not unitary");
  if (u.n_qubits < 1 || u.n_qubits > 3) {
    throw ValidationError("correction_table supports 1 to 3 qubits, gate '" + u.name + "' has " +
                          std::to_string(u.n_qubits));
  }

  CorrectionTable table;
  table.gate_name = u.name;
  table.n_qubits = u.n_qubits;
  for (PauliString& basis : teleport_basis(u.n_qubits)) {
    PauliSum sum = pauli_decompose(conjugate(u, basis));
    CorrectionEntry entry;
    entry.basis = std::move(basis);
    if (sum.terms.size() == 1) {
      entry.correction = std::move(sum.terms.front());
    } else {
      entry.correction = std::move(sum);
    }
    table.entries.push_back(std::move(entry));
  }
  return table;
}

std::optional<int> clifford_level(const GateMatrix& u, int k_max) {
  if (!is_unitary(u.mat)) throw ValidationError("clifford_level: gate '" + u.name + "' is not unitary");
  if (k_max < 1) throw ValidationError("clifford_level: k_max must be positive");

  const std::vector<PauliString> basis = teleport_basis(u.n_qubits);
  for (int k = 1; k <= k_max; ++k) {
    if (k == 1 ? is_signed_pauli(u.mat) : in_level(u.mat, k, basis)) return k;
  }
  return std::nullopt;
}

GateMatrix CircuitGate::materialize() const {
  if (angle) return gate == "RX" ? make_rx(*angle) : make_rz(*angle);
  return gate_by_name(gate);
}

Mat CorrectionCircuit::matrix() const {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Mat m = Mat::Identity(dim, dim);
  for (const CircuitGate& g : gates) {
    m = embed(g.materialize(), n_qubits, g.targets) * m;
  }
  return m;
}

CorrectionCircuit pauli_exponential_circuit(const PauliSum& h, double theta) {
  if (h.terms.empty()) throw ValidationError("pauli_exponential_circuit: empty sum");
  const int n = h.n_qubits();
  for (const PauliString& t : h.terms) {
    if (t.n_qubits() != n) throw ValidationError("pauli_exponential_circuit: qubit-count mismatch");
    if (std::abs(t.coefficient.imag()) > 1e-9) {
      throw ValidationError("pauli_exponential_circuit: non-real coefficient on term '" + t.pattern() + "'");
    }
  }
  for (std::size_t i = 0; i < h.terms.size(); ++i) {
    for (std::size_t j = i + 1; j < h.terms.size(); ++j) {
      if (!h.terms[i].commutes_with(h.terms[j])) {
        throw ValidationError("pauli_exponential_circuit: non-commuting terms '" +
                              h.terms[i].pattern() + "' and '" + h.terms[j].pattern() + "'");
      }
    }
  }

  constexpr double kHalfPi = std::numbers::pi / 2;
  CorrectionCircuit circuit;
  circuit.n_qubits = n;
  for (const PauliString& t : h.terms) {
    std::vector<int> support;
    for (int q = 0; q < n; ++q) {
      if (t.factors[q] != Pauli::I) support.push_back(q);
    }
    if (support.empty()) continue;  // identity term: global phase only

    std::vector<CircuitGate> enter;
    for (int q : support) {
      if (t.factors[q] == Pauli::X) enter.push_back({"H", {q}, std::nullopt});
      if (t.factors[q] == Pauli::Y) enter.push_back({"RX", {q}, kHalfPi});
    }
    for (const CircuitGate& g : enter) circuit.gates.push_back(g);
    for (std::size_t i = 0; i + 1 < support.size(); ++i) {
      circuit.gates.push_back({"CNOT", {support[i], support[i + 1]}, std::nullopt});
    }
    circuit.gates.push_back({"RZ", {support.back()}, 2 * theta * t.coefficient.real()});
    for (std::size_t i = support.size() - 1; i-- > 0;) {
      circuit.gates.push_back({"CNOT", {support[i], support[i + 1]}, std::nullopt});
    }
    for (auto it = enter.rbegin(); it != enter.rend(); ++it) {
      CircuitGate g = *it;
      if (g.angle) g.angle = -*g.angle;
      circuit.gates.push_back(std::move(g));
    }
  }

  // Commuting involutions give exp(-i a P) = cos(a) I - i sin(a) P per term.
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat target = Mat::Identity(dim, dim);
  for (const PauliString& t : h.terms) {
    PauliString bare = t;
    bare.coefficient = 1.0;
    const double a = theta * t.coefficient.real();
    target = (std::cos(a) * Mat::Identity(dim, dim) - cx(0, 1) * std::sin(a) * bare.matrix()) * target;
  }
  circuit.target = std::move(target);

  if (!equal_up_to_phase(circuit.matrix(), circuit.target, 1e-9)) {
    throw SimulationError("pauli_exponential_circuit: synthesized circuit does not match its target");
  }
  return circuit;
}

CorrectionCircuit correction_circuit(const CorrectionEntry& entry) {
  if (const auto* single = std::get_if<PauliString>(&entry.correction)) {
    CorrectionCircuit circuit;
    circuit.n_qubits = single->n_qubits();
    for (int q = 0; q < single->n_qubits(); ++q) {
      const Pauli f = single->factors[q];
      if (f != Pauli::I) circuit.gates.push_back({std::string(1, pauli_char(f)), {q}, std::nullopt});
    }
    circuit.target = single->matrix();
    if (!equal_up_to_phase(circuit.matrix(), circuit.target, 1e-9)) {
      throw SimulationError("correction_circuit: Pauli gate list does not match its target");
    }
    return circuit;
  }
  const PauliSum& sum = std::get<PauliSum>(entry.correction);
  CorrectionCircuit circuit = pauli_exponential_circuit(sum, std::numbers::pi / 2);
  circuit.target = sum.matrix();
  if (!equal_up_to_phase(circuit.matrix(), circuit.target, 1e-9)) {
    throw SimulationError("correction_circuit: exponential does not realize the correction");
  }
  return circuit;
}

std::string format_correction_table(const CorrectionTable& table) {
  std::string out = "gate " + table.gate_name + " (" + std::to_string(table.n_qubits) + " qubits)\n";
  for (const CorrectionEntry& e : table.entries) {
    out += "  " + e.basis.pattern() + " -> " + correction_to_string(e.correction) + "\n";
  }
  return out;
}

}  // namespace tsim
