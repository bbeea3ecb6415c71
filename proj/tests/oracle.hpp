// Copyright 2026 The schwinger-cvqe Authors
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

// Dense reference matrices built from Kronecker products. Shared by the
// unit and acceptance tests as an oracle that does not go through the
// Pauli-string machinery.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace scvqe::testing {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using C = std::complex<double>;

inline Mat pauli_matrix(char p) {
  Mat m(2, 2);
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m = Mat::Identity(2, 2);
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Single-qubit operator on qubit q of n; qubit 0 is the least significant.
inline Mat on_qubit(const Mat& op, std::size_t q, std::size_t n) {
  Mat out = Mat::Identity(1, 1);
  for (std::size_t k = n; k-- > 0;) out = kron(out, k == q ? op : Mat::Identity(2, 2));
  return out;
}

inline double sgn(std::size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; }

inline Mat link_dense(std::size_t n, double l, std::size_t link) {
  const auto dim = Eigen::Index{1} << n;
  Mat out = l * Mat::Identity(dim, dim);
  for (std::size_t k = 0; k <= link; ++k) {
    out += 0.5 * (on_qubit(pauli_matrix('Z'), k, n) + sgn(k) * Mat::Identity(dim, dim));
  }
  return out;
}

inline Mat schwinger_dense(std::size_t n, double x, double m, double l, double lambda) {
  const auto dim = Eigen::Index{1} << n;
  const Mat id = Mat::Identity(dim, dim);
  const double mu = 2.0 * m * std::sqrt(x);
  Mat h = Mat::Zero(dim, dim);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h += 0.5 * x *
         (on_qubit(pauli_matrix('X'), k, n) * on_qubit(pauli_matrix('X'), k + 1, n) +
          on_qubit(pauli_matrix('Y'), k, n) * on_qubit(pauli_matrix('Y'), k + 1, n));
    const Mat lk = link_dense(n, l, k);
    h += lk * lk;
  }
  Mat q = Mat::Zero(dim, dim);
  for (std::size_t k = 0; k < n; ++k) {
    h += 0.5 * mu * (id + sgn(k) * on_qubit(pauli_matrix('Z'), k, n));
    q += on_qubit(pauli_matrix('Z'), k, n);
  }
  return h + lambda * q * q;
}

inline Mat condensate_dense(std::size_t n, double x) {
  const auto dim = Eigen::Index{1} << n;
  Mat out = Mat::Zero(dim, dim);
  for (std::size_t k = 0; k < n; ++k) {
    out += sgn(k) * (Mat::Identity(dim, dim) + on_qubit(pauli_matrix('Z'), k, n));
  }
  return out * (std::sqrt(x) / (2.0 * static_cast<double>(n)));
}

/// O_p = -i x sum (s-_n Z_{n+1} s+_{n+2} - h.c.); the sign of O_p depends
/// on the s+- convention but O_p^2 does not.
inline Mat momentum_dense(std::size_t n, double x) {
  Mat sp(2, 2), sm(2, 2);
  sp << 0, 1, 0, 0;
  sm << 0, 0, 1, 0;
  const auto dim = Eigen::Index{1} << n;
  Mat out = Mat::Zero(dim, dim);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const Mat fwd = on_qubit(sm, k, n) * on_qubit(pauli_matrix('Z'), k + 1, n) * on_qubit(sp, k + 2, n);
    out += C(0, -x) * (fwd - fwd.adjoint());
  }
  return out;
}

/// Lowest eigenpairs restricted to basis states with popcount n/2.
struct DenseSpectrum {
  std::vector<double> energies;
  std::vector<Vec> states;  // full register
};

inline DenseSpectrum zero_sector_spectrum(const Mat& h, std::size_t n, std::size_t k) {
  std::vector<Eigen::Index> basis;
  for (Eigen::Index b = 0; b < h.rows(); ++b) {
    if (static_cast<std::size_t>(__builtin_popcountll(static_cast<unsigned long long>(b))) == n / 2) {
      basis.push_back(b);
    }
  }
  const auto d = static_cast<Eigen::Index>(basis.size());
  Mat sub(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) sub(i, j) = h(basis[i], basis[j]);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(sub);
  DenseSpectrum out;
  for (std::size_t i = 0; i < k; ++i) {
    out.energies.push_back(es.eigenvalues()(static_cast<Eigen::Index>(i)));
    Vec v = Vec::Zero(h.rows());
    for (Eigen::Index j = 0; j < d; ++j) v(basis[j]) = es.eigenvectors()(j, static_cast<Eigen::Index>(i));
    out.states.push_back(v);
  }
  return out;
}

inline double expect(const Mat& op, const Vec& v) { return (v.adjoint() * op * v)(0, 0).real(); }

inline Vec random_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vec v(Eigen::Index{1} << n);
  for (auto& a : v) a = {g(rng), g(rng)};
  return v.normalized();
}

}  // namespace scvqe::testing
