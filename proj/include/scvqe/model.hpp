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
#include <span>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "scvqe/pauli.hpp"

namespace scvqe {

/// Dimensionless lattice configuration. Lengths and couplings enter only
/// through x = 1/(g a)^2 and the ratio m_lat/g.
struct LatticeParams {
  std::size_t n_sites = 2;
  double x = 0.0;
  double mass_lat = 0.0;          // m_lat / g
  double bg_field = 0.0;          // l = theta / (2 pi)
  double penalty_strength = 0.0;  // lambda of the total-charge penalty

  /// mu = 2 (m_lat/g) sqrt(x).
  double mu() const;
  /// Throws InvalidArgument unless n_sites is even and >= 2 and every
  /// parameter is finite with x, lambda >= 0.
  void validate() const;
};

// Hamiltonian pieces on n_sites qubits (qubit n = staggered site n).
PauliSum hopping_term(const LatticeParams& p);
PauliSum mass_term(const LatticeParams& p);
PauliSum electric_term(const LatticeParams& p);
PauliSum penalty_term(const LatticeParams& p);

/// W + lambda (sum_n Z_n)^2, including the constant mu N / 2. The penalty
/// is present only when penalty_strength > 0.
PauliSum build_hamiltonian(const LatticeParams& p);

/// Charge-conjugation proxy S_R = (prod_n X_n) T, with T the cyclic shift by
/// one site. A permutation of the computational basis, so it is stored as the
/// index map rather than as a matrix.
class BasisPermutation {
 public:
  explicit BasisPermutation(std::size_t n_qubits);

  std::size_t n_qubits() const { return n_qubits_; }
  std::uint64_t image(std::uint64_t basis) const;

  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  /// <psi|S|psi> on the low n_qubits() qubits of a possibly larger register.
  cplx expectation(std::span<const cplx> state) const;
  Eigen::MatrixXcd to_dense() const;

 private:
  std::size_t n_qubits_;
  std::uint64_t flip_mask_ = 0;
};

enum class ObservableKind {
  momentum_sq,
  spin_transform,
  chiral_condensate,
  link_field,
  efd,
  total_charge,
  total_charge_sq,
};

ObservableKind observable_kind_from_string(const std::string& name);
std::string to_string(ObservableKind kind);

using Observable = std::variant<PauliSum, BasisPermutation>;

/// `index` is the link n for link_field and the half-width r for efd;
/// ignored otherwise.
Observable build_observable(ObservableKind kind, const LatticeParams& p, int index = 0);

// Direct builders behind build_observable.
PauliSum momentum_operator(const LatticeParams& p);  // O_p
PauliSum momentum_squared(const LatticeParams& p);   // O_p^2
PauliSum chiral_condensate(const LatticeParams& p);  // Sigma / g
PauliSum link_field(const LatticeParams& p, int link);
PauliSum electric_field_density(const LatticeParams& p, int r);  // F_av
PauliSum total_charge(std::size_t n_sites);                      // sum_n Z_n
/// Index of the link in the middle of the chain, N/2 - 1.
int central_link(const LatticeParams& p);

enum class Branch { scalar, vector };
std::string to_string(Branch b);

/// Scalar when |arg <S_R>| < pi/2, vector otherwise. Throws NumericalError
/// when |<S_R>| is below `floor`, since the phase is then meaningless.
Branch phase_classify(cplx sr_expectation, double floor = 1e-6);

}  // namespace scvqe
