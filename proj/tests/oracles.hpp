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

// Brute-force reference implementations the tests compare the library
// against. Everything here goes through full matrices and standard Eigen
// solvers, deliberately sharing no shortcuts with the production code.

#pragma once

#include <complex>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Mat pauli_1q(char c) {
  Mat m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cx(0, -1), cx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::runtime_error("oracle: bad pauli char");
  }
  return m;
}

// Pauli string matrix from a pattern like "XZI", qubit 0 leftmost.
inline Mat pauli_matrix(const std::string& pattern) {
  Mat m = pauli_1q(pattern.at(0));
  for (std::size_t i = 1; i < pattern.size(); ++i) m = kron(m, pauli_1q(pattern[i]));
  return m;
}

inline std::string pattern_of(std::size_t code, int n) {
  static const char kChars[] = "IXYZ";
  std::string s(n, 'I');
  for (int q = n - 1; q >= 0; --q) {
    s[q] = kChars[code & 3];
    code >>= 2;
  }
  return s;
}

// Full Pauli expansion via explicit trace products, pattern -> coefficient.
inline std::map<std::string, cx> decompose(const Mat& m, double cutoff = 1e-10) {
  const int n = [&] {
    int k = 0;
    while ((Eigen::Index(1) << k) < m.rows()) ++k;
    return k;
  }();
  std::map<std::string, cx> terms;
  const std::size_t count = std::size_t(1) << (2 * n);
  for (std::size_t code = 0; code < count; ++code) {
    const std::string pattern = pattern_of(code, n);
    const Mat p = pauli_matrix(pattern);
    const cx c = (p.adjoint() * m).trace() / static_cast<double>(m.rows());
    if (std::abs(c) > cutoff) terms[pattern] = c;
  }
  return terms;
}

inline Mat conjugate(const Mat& u, const Mat& p) { return u * p * u.adjoint(); }

// Single-qubit operator embedded at `qubit` in an n-qubit register.
inline Mat embed_1q(const Mat& op, int qubit, int n) {
  Mat full = qubit == 0 ? op : Mat(Mat::Identity(2, 2));
  for (int q = 1; q < n; ++q) full = kron(full, q == qubit ? op : Mat(Mat::Identity(2, 2)));
  return n == 1 ? op : full;
}

// Kraus-sum depolarizing channel on arbitrary targets: with probability p
// the targets are hit by a uniformly random non-identity Pauli.
inline Mat depolarize(const Mat& rho, const std::vector<int>& targets, double p, int n) {
  const std::size_t combos = std::size_t(1) << (2 * targets.size());
  Mat out = (1.0 - p) * rho;
  const double w = p / static_cast<double>(combos - 1);
  for (std::size_t code = 1; code < combos; ++code) {
    Mat op = Mat::Identity(rho.rows(), rho.cols());
    std::size_t c = code;
    for (auto it = targets.rbegin(); it != targets.rend(); ++it) {
      op = embed_1q(pauli_1q("IXYZ"[c & 3]), *it, n) * op;
      c >>= 2;
    }
    out += w * op * rho * op.adjoint();
  }
  return out;
}

// exp(-i * theta * h) for Hermitian h, via eigendecomposition.
inline Mat expm_i(const Mat& h, double theta) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases[k] = std::exp(cx(0, -theta * es.eigenvalues()[k]));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline Eigen::VectorXcd random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(Eigen::Index(1) << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cx(g(rng), g(rng));
  return v / v.norm();
}

inline Mat random_density(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  const Eigen::Index dim = Eigen::Index(1) << n;
  Mat a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = cx(g(rng), g(rng));
  }
  Mat rho = a * a.adjoint();
  return rho / rho.trace();
}

inline Mat random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g;
  Mat a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = cx(g(rng), g(rng));
  }
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

inline double max_abs_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline bool same_up_to_phase(const Mat& a, const Mat& b, double tol) {
  Eigen::Index r = 0, c = 0;
  double best = 0;
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      if (std::abs(b(i, j)) > best) {
        best = std::abs(b(i, j));
        r = i;
        c = j;
      }
    }
  }
  if (best < tol) return max_abs_diff(a, b) < tol;
  const cx phase = a(r, c) / b(r, c);
  if (std::abs(std::abs(phase) - 1.0) > tol) return false;
  return max_abs_diff(a, phase * b) < tol;
}

}  // namespace oracle
