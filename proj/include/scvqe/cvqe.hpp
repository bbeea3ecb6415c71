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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scvqe/ansatz.hpp"
#include "scvqe/lbfgs.hpp"
#include "scvqe/model.hpp"
#include "scvqe/pauli.hpp"
#include "scvqe/reference.hpp"
#include "scvqe/simulator.hpp"

namespace scvqe {

/// One optimization stage. penalty_scale multiplies the problem's penalty
/// strength for the duration of the stage.
struct Stage {
  int iterations = 1000;
  bool translation_symmetric = false;
  double penalty_scale = 1.0;
};

struct CvqeProblem {
  LatticeParams params;
  /// translation_symmetric here only affects cost() and gradient(); optimize
  /// takes the parameter structure from each stage.
  CircuitLayout layout;
  /// build_hamiltonian(params); the stages rebuild it with scaled penalty.
  PauliSum hamiltonian;
  std::size_t n_eigenstates = 2;
  int seeds = 11;
  std::vector<Stage> stages{Stage{}};
  std::uint64_t rng_seed = 1;
  /// Fresh parameters are drawn uniformly from [-init_scale, init_scale].
  double init_scale = 0.1;
  /// Uniform noise amplitude added when shared parameters are expanded.
  double warm_noise = 1e-3;
  double gradient_tolerance = 1e-6;
  std::size_t threads = 1;

  static CvqeProblem make(const LatticeParams& params, const CircuitLayout& layout);
  void validate() const;
};

/// Real-arithmetic evaluator of the purified cost and its adjoint-mode
/// gradient. All gates and the Hamiltonian are real, so the state stays
/// real throughout.
class CvqeEngine {
 public:
  CvqeEngine(const CircuitLayout& layout, const PauliSum& hamiltonian);

  const CircuitLayout& layout() const { return layout_; }
  double cost(std::span<const double> params) const;
  double cost_and_gradient(std::span<const double> params, std::span<double> grad) const;
  /// U(params) applied to the purified state.
  std::vector<double> final_state(std::span<const double> params) const;

 private:
  CircuitLayout layout_;
  CompiledOperator hamiltonian_;
  std::vector<double> initial_;
  std::vector<std::vector<std::size_t>> targets_;
};

/// Mean branch energy (1/K) sum_m <psi_m|H|psi_m>.
double cost(const CvqeProblem& problem, std::span<const double> params);
/// Central differences with step h, one coordinate at a time.
std::vector<double> gradient(const CvqeProblem& problem, std::span<const double> params,
                             double h = 1e-5);
/// Exact gradient by reverse-mode differentiation through the circuit.
std::vector<double> adjoint_gradient(const CvqeProblem& problem, std::span<const double> params);

struct StateDiagnostics {
  double energy = 0.0;
  double variance = 0.0;
  double total_charge = 0.0;
  cplx sr{0.0, 0.0};
  std::string branch;
  double momentum_sq_over_x2 = 0.0;
  double condensate = 0.0;
  double central_link = 0.0;
  // filled by compare_to_reference
  double exact_energy = 0.0;
  double fidelity = -1.0;
};

struct SeedOutcome {
  std::uint64_t seed_index = 0;
  double final_cost = 0.0;
  bool failed = false;
  std::vector<std::string> stage_status;
};

struct CvqeResult {
  CircuitLayout layout;  // as used by the final stage
  std::vector<double> best_params;
  std::size_t best_seed = 0;
  double final_cost = 0.0;
  Eigen::MatrixXcd subspace_h;
  Eigen::MatrixXcd rotation;
  std::vector<double> energies;
  std::vector<QuantumState> eigen_states;  // physical register
  std::vector<StateDiagnostics> diagnostics;
  /// (cumulative iteration, cost) for the selected seed.
  std::vector<std::pair<int, double>> cost_trace;
  std::vector<SeedOutcome> seeds;
};

CvqeResult optimize(const CvqeProblem& problem);

/// Rebuilds subspace_h, V, eigenstates and diagnostics for fixed
/// parameters; `layout` must match the parameter vector.
CvqeResult assemble_result(const CvqeProblem& problem, const CircuitLayout& layout,
                           std::vector<double> params);

/// Fills exact_energy and fidelity from a reference spectrum of at least K
/// states.
void compare_to_reference(CvqeResult& result, const SpectrumResult& reference);

/// H_mn = <psi_m|H|psi_n> from <H (x) P> over all ancilla Pauli strings P.
Eigen::MatrixXcd subspace_hamiltonian(const QuantumState& state, const PauliSum& hamiltonian,
                                      std::size_t n_ancilla);
/// Same matrix from sum_P e_P P^T, given the ancilla Pauli expectations in
/// the order of ancilla_paulis().
Eigen::MatrixXcd reconstruct_subspace(std::span<const cplx> pauli_expectations,
                                      std::size_t n_ancilla);
/// All 4^n ancilla Pauli strings, index i holding factor (i >> 2q) & 3 on
/// qubit q in the order I, X, Y, Z.
std::vector<PauliString> ancilla_paulis(std::size_t n_ancilla);

/// Direct oracle: sqrt(K) times the ancilla-projected components.
std::vector<QuantumState> branch_states(const QuantumState& state, std::size_t n_ancilla);

struct SubspaceEigen {
  Eigen::MatrixXcd rotation;  // columns are eigenvectors
  std::vector<double> energies;
};
SubspaceEigen diagonalize_subspace(const Eigen::MatrixXcd& subspace_h);

struct RotatedStates {
  std::vector<QuantumState> states;  // physical register
  std::vector<double> energies;      // <H> of each state
};
/// Applies V^T on the ancillas, projects each ancilla outcome and
/// renormalizes the physical branch.
RotatedStates rotate_to_eigenstates(const QuantumState& state, const Eigen::MatrixXcd& rotation,
                                    const PauliSum& hamiltonian);

/// Ancilla-free preparation of eigenstate j: basis state |j>, the gate V on
/// the low qubits, then the parametric circuit.
Circuit inference_circuit(const CircuitLayout& layout, std::span<const double> params,
                          const Eigen::MatrixXcd& rotation, std::size_t state_index);

}  // namespace scvqe
