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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scvqe/model.hpp"
#include "scvqe/pauli.hpp"
#include "scvqe/simulator.hpp"

namespace scvqe {

enum class ChargeSector { zero, all };
std::string to_string(ChargeSector s);
ChargeSector charge_sector_from_string(const std::string& name);

struct SpectrumResult {
  std::vector<double> energies;      // ascending
  std::vector<QuantumState> states;  // full register, orthonormal
  ChargeSector sector = ChargeSector::zero;
};

/// Basis indices of the sector; the zero sector keeps popcount n/2.
std::vector<std::uint64_t> sector_basis(std::size_t n_qubits, ChargeSector sector);

/// Lowest k eigenpairs inside the sector. Dense below a few thousand
/// states, Lanczos above (real Hamiltonians only).
SpectrumResult exact_spectrum(const PauliSum& hamiltonian, std::size_t k,
                              ChargeSector sector = ChargeSector::zero);

/// State i is the ground state of H + sum_{j<i} omega |psi_j><psi_j| with
/// omega = (E_max - E_0 estimate) + omega_margin.
SpectrumResult deflated_excited_states(const PauliSum& hamiltonian, std::size_t k,
                                       double omega_margin = 1.0,
                                       ChargeSector sector = ChargeSector::zero);

struct LanczosResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns
  std::size_t steps = 0;
};

/// Lowest k eigenpairs of a real symmetric operator, with full
/// reorthogonalization. Converged when every residual is below
/// tolerance * max(1, |value|).
LanczosResult lanczos_lowest(const std::function<void(const double*, double*)>& matvec,
                             std::size_t dim, std::size_t k, double tolerance = 1e-10,
                             std::uint64_t seed = 12345);

/// One row of the spectrum table.
struct SpectrumRow {
  std::size_t index = 0;
  double energy = 0.0;
  double momentum_sq_over_x2 = 0.0;  // NaN when x = 0
  cplx sr{0.0, 0.0};
  std::string branch;  // "scalar", "vector" or "undetermined"
  double condensate = 0.0;
  double central_link = 0.0;
  double efd = 0.0;  // F_av with r = min(2, N/2)
};

std::vector<SpectrumRow> spectrum_observables(const std::vector<QuantumState>& states,
                                              const std::vector<double>& energies,
                                              const LatticeParams& params);

}  // namespace scvqe
