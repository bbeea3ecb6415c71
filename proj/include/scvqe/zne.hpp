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
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scvqe/ansatz.hpp"
#include "scvqe/model.hpp"
#include "scvqe/pauli.hpp"
#include "scvqe/simulator.hpp"

namespace scvqe {

inline constexpr std::size_t kMaxDensityQubits = 8;

/// Mixed state of at most kMaxDensityQubits qubits.
class DensityState {
 public:
  explicit DensityState(std::size_t n_qubits);  // |0...0><0...0|
  static DensityState from_pure(const QuantumState& state);

  std::size_t n_qubits() const { return n_qubits_; }
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  Eigen::MatrixXcd& matrix() { return rho_; }

  double trace() const;
  double min_eigenvalue() const;
  /// U rho U^dagger.
  void apply_unitary(const GateOp& gate);
  /// (1 - p) rho + p Tr_T(rho) (x) I / 2^k on the targets T.
  void depolarize(std::span<const std::size_t> targets, double p);
  cplx expectation(const PauliString& term) const;
  cplx expectation(const PauliSum& op) const;

 private:
  std::size_t n_qubits_;
  Eigen::MatrixXcd rho_;
};

struct NoiseModel {
  double p1 = 5e-4;  // after every one-qubit gate
  double p2 = 5e-3;  // after every multi-qubit gate
  void validate() const;
};

/// U (U^dagger U)^((level-1)/2) as a flat gate list.
Circuit fold_circuit(const Circuit& circuit, int level);

DensityState run_noisy(const Circuit& circuit, const NoiseModel& noise, DensityState initial);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Each non-identity term is measured `shots` times; the +-1 outcomes are
/// drawn as one binomial from the exact mean.
Estimate sample_expectation(const DensityState& rho, const PauliSum& op, std::uint64_t shots,
                            std::mt19937_64& rng);

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};
LineFit zne_fit(std::span<const std::pair<double, double>> levels_and_values);
/// Intercept at level 0.
double zne_extrapolate(std::span<const std::pair<double, double>> levels_and_values);

enum class InferenceMode { ancilla_free, ancilla };
std::string to_string(InferenceMode mode);
InferenceMode inference_mode_from_string(const std::string& name);

struct NamedObservable {
  std::string name;
  PauliSum op;  // on the physical register
};

/// energy (W without penalty), link (central link), condensate and charge.
std::vector<NamedObservable> standard_observables(const LatticeParams& params);

struct InferenceOptions {
  NoiseModel noise;
  std::uint64_t shots = 100000;
  /// Skip sampling and use exact expectations.
  bool exact_expectations = false;
  std::vector<int> levels{1, 3, 5};
  InferenceMode mode = InferenceMode::ancilla_free;
  /// Run SO(4)/SO(8) blocks as CNOT + rotation sequences so the noise acts
  /// per elementary gate.
  bool decompose = true;
  std::uint64_t seed = 1;
  void validate() const;
};

struct QuantityResult {
  std::string name;
  std::size_t state = 0;
  std::vector<int> levels;
  std::vector<double> values;
  std::vector<double> std_errors;
  double slope = 0.0;
  double intercept = 0.0;
};

std::vector<QuantityResult> inference_run(const CircuitLayout& layout,
                                          std::span<const double> params,
                                          const Eigen::MatrixXcd& rotation,
                                          const std::vector<NamedObservable>& observables,
                                          const InferenceOptions& options);

}  // namespace scvqe
