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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace scvqe {

using cplx = std::complex<double>;

enum class Pauli : std::uint8_t { I, X, Y, Z };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// A weighted tensor product of single-qubit Pauli operators.
///
/// Stored in symplectic form: bit q of `x_mask` / `z_mask` marks an X / Z
/// component on qubit q, Y being both. The operator is
/// coefficient * i^{|x & z|} * X^x Z^z, so every string with a real
/// coefficient is Hermitian. Up to 64 qubits.
class PauliString {
 public:
  PauliString() = default;
  PauliString(cplx coefficient, std::uint64_t x_mask, std::uint64_t z_mask)
      : coefficient_(coefficient), x_(x_mask), z_(z_mask) {}

  static PauliString single(Pauli p, std::size_t qubit, cplx coefficient = 1.0);
  static PauliString from_factors(cplx coefficient,
                                  const std::map<std::size_t, Pauli>& factors);

  cplx coefficient() const { return coefficient_; }
  void set_coefficient(cplx c) { coefficient_ = c; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  Pauli factor(std::size_t qubit) const;
  std::map<std::size_t, Pauli> factors() const;
  std::size_t weight() const;
  bool is_identity() const { return (x_ | z_) == 0; }
  bool is_diagonal() const { return x_ == 0; }
  /// One past the highest qubit with a non-identity factor.
  std::size_t support_size() const;

  /// Coefficient times i^{|x & z|}: the amplitude factor picked up by
  /// |b> -> (-1)^{|b & z|} |b ^ x>.
  cplx basis_factor() const;

  /// P|b> = phase * |image>.
  std::pair<cplx, std::uint64_t> apply_to_basis(std::uint64_t basis) const;

  bool commutes_with(const PauliString& other) const;
  bool same_factors(const PauliString& other) const {
    return x_ == other.x_ && z_ == other.z_;
  }

  friend PauliString operator*(const PauliString& a, const PauliString& b);

 private:
  cplx coefficient_{1.0, 0.0};
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// Sum of Pauli strings on a fixed register of n qubits.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(std::size_t n_qubits);
  PauliSum(std::size_t n_qubits, std::vector<PauliString> terms);

  static PauliSum identity(std::size_t n_qubits, cplx coefficient = 1.0);
  static PauliSum single(std::size_t n_qubits, Pauli p, std::size_t qubit,
                         cplx coefficient = 1.0);

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<PauliString>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add_term(const PauliString& term);

  /// Merges strings with equal factor maps and drops coefficients whose
  /// magnitude is at most `drop_tolerance`. Terms end up sorted by
  /// (x_mask, z_mask).
  PauliSum& normalize(double drop_tolerance = 1e-14);

  /// True when every coefficient is real to `tolerance` (after merging).
  bool is_hermitian(double tolerance = 1e-12) const;
  PauliSum adjoint() const;

  /// The same operator on a register of `n_total` qubits, shifted up by
  /// `offset` qubits.
  PauliSum embedded(std::size_t n_total, std::size_t offset = 0) const;

  /// Tensor product this (low qubits) with `high` (next qubits).
  PauliSum tensor(const PauliSum& high) const;

  cplx identity_coefficient() const;
  double max_abs_coefficient() const;

  Eigen::MatrixXcd to_matrix() const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(cplx scalar);

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
  friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

 private:
  std::size_t n_qubits_ = 0;
  std::vector<PauliString> terms_;
};

PauliSum commutator(const PauliSum& a, const PauliSum& b);

/// One term per line: "coeff_re coeff_im P0P1...P(n-1)".
std::string to_text(const PauliSum& op);
PauliSum pauli_sum_from_text(std::string_view text);

/// A PauliSum laid out for repeated application to dense vectors.
///
/// Diagonal strings are folded into one vector over the operator's own
/// qubits; off-diagonal strings are grouped by their flip mask. The operator
/// may be applied to a larger register, in which case it acts on the low
/// `n_qubits()` qubits and as identity on the rest.
class CompiledOperator {
 public:
  CompiledOperator() = default;
  explicit CompiledOperator(const PauliSum& op);

  std::size_t n_qubits() const { return n_qubits_; }

  /// out = O in.  Both spans have the same power-of-two size >= 2^n_qubits.
  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  /// out = Re(O) in.  For a real vector and Hermitian O this is exact for
  /// quadratic forms, since Im(O) is antisymmetric.
  void apply_real(std::span<const double> in, std::span<double> out) const;

  cplx expectation(std::span<const cplx> state) const;
  double expectation_real(std::span<const double> state) const;

 private:
  struct FlipGroup {
    std::uint64_t x = 0;
    std::vector<std::uint64_t> z;
    std::vector<cplx> factor;
  };

  std::size_t n_qubits_ = 0;
  std::vector<cplx> diagonal_;
  std::vector<double> diagonal_real_;
  std::vector<FlipGroup> groups_;
};

}  // namespace scvqe
