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
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scvqe/model.hpp"
#include "scvqe/pauli.hpp"

namespace scvqe {

/// Dense amplitude vector over 2^n basis states. Qubit 0 is the least
/// significant bit of the basis index and |0> is the +1 eigenstate of Z.
class QuantumState {
 public:
  QuantumState() = default;
  /// |0...0> on n qubits.
  explicit QuantumState(std::size_t n_qubits);
  /// Takes ownership of `amplitudes`; the size must be a power of two.
  explicit QuantumState(std::vector<cplx> amplitudes);

  static QuantumState basis(std::size_t n_qubits, std::uint64_t index);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  std::span<cplx> amplitudes() { return amplitudes_; }
  cplx operator[](std::size_t i) const { return amplitudes_[i]; }
  cplx& operator[](std::size_t i) { return amplitudes_[i]; }

  double norm() const;
  void normalize();

 private:
  std::size_t n_qubits_ = 0;
  std::vector<cplx> amplitudes_;
};

/// A unitary on k in {1, 2, 3} distinct qubits. In the local matrix index,
/// targets[0] is the most significant bit, so CNOT(c, t) is the textbook
/// matrix with targets {c, t}.
class GateOp {
 public:
  GateOp(Eigen::MatrixXcd matrix, std::vector<std::size_t> targets, std::string label,
         std::vector<double> params = {});

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const std::vector<std::size_t>& targets() const { return targets_; }
  const std::string& label() const { return label_; }
  /// Free parameters the gate was built from (for serialization only).
  const std::vector<double>& params() const { return params_; }
  std::size_t arity() const { return targets_.size(); }

  GateOp adjoint() const;

 private:
  Eigen::MatrixXcd matrix_;
  std::vector<std::size_t> targets_;
  std::string label_;
  std::vector<double> params_;
};

/// Ordered gate list on a fixed register.
struct Circuit {
  std::size_t n_qubits = 0;
  std::vector<GateOp> gates;

  Circuit& append(const Circuit& other);
  Circuit adjoint() const;
  std::size_t count(const std::string& label) const;
};

// Common fixed gates.
namespace gates {
GateOp hadamard(std::size_t q);
GateOp pauli_x(std::size_t q);
GateOp phase_s(std::size_t q);
GateOp phase_sdg(std::size_t q);
GateOp rx(std::size_t q, double angle);
GateOp rz(std::size_t q, double angle);
GateOp cnot(std::size_t control, std::size_t target);
}  // namespace gates

/// In-place application of `gate` to `state`.
void apply_gate(QuantumState& state, const GateOp& gate);
/// Copying form of apply_gate.
QuantumState applied(const QuantumState& state, const GateOp& gate);
void apply_circuit(QuantumState& state, const Circuit& circuit);

/// Applies a 2^k x 2^k matrix to a raw amplitude span with the GateOp target
/// convention. No unitarity check.
void apply_matrix(std::span<cplx> amplitudes, const Eigen::MatrixXcd& matrix,
                  std::span<const std::size_t> targets);

/// Applies a real 2^k x 2^k matrix to a real amplitude vector; the same
/// target convention as GateOp. Used by the variational engine.
void apply_real_matrix(std::span<double> amplitudes, const double* matrix,
                       std::span<const std::size_t> targets);

/// out[r * 2^k + c] += sum over the untouched qubits of left_r * right_c, the
/// local outer product behind adjoint-mode gradients.
void accumulate_real_outer(std::span<const double> left, std::span<const double> right,
                           std::span<const std::size_t> targets, double* out);

/// <psi|O|psi>. For Hermitian O the imaginary part is exactly zero.
cplx expectation(const QuantumState& state, const PauliSum& op);
cplx expectation(const QuantumState& state, const BasisPermutation& op);
cplx expectation(const QuantumState& state, const Observable& op);

/// O|psi> for O acting on the low qubits of the state's register.
QuantumState apply_operator(const QuantumState& state, const PauliSum& op);

/// <O^2> - <O>^2, computed as ||O psi||^2 - <O>^2.
double variance(const QuantumState& state, const PauliSum& op);

/// |<a|b>|^2.
double fidelity(const QuantumState& a, const QuantumState& b);
cplx inner_product(const QuantumState& a, const QuantumState& b);

/// Multinomial draw of `shots` computational-basis outcomes.
std::map<std::uint64_t, std::uint64_t> sample_counts(const QuantumState& state,
                                                     std::uint64_t shots, std::uint64_t seed);

/// Raw little-endian layout: u64 qubit count, then 2^n (re, im) doubles.
void save_state(const QuantumState& state, const std::filesystem::path& path);
QuantumState load_state(const std::filesystem::path& path);

}  // namespace scvqe
