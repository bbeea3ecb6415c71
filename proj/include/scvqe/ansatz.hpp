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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scvqe/simulator.hpp"

namespace scvqe {

/// Generator entries of an SO(dim) gate U = exp(A - A^T); `entries` fills
/// the strict upper triangle of A row by row.
struct SoGateParams {
  int dim = 4;
  std::vector<double> entries;

  static std::size_t entry_count(int dim);
  void validate() const;
};

/// U = exp(A - A^T) together with what is needed to pull a matrix-valued
/// derivative back onto the generator entries.
class SoExponential {
 public:
  SoExponential(int dim, std::span<const double> entries);

  int dim() const { return dim_; }
  const Eigen::MatrixXd& matrix() const { return u_; }

  /// grad += d/d(entries) of sum_ij m_ij U_ij.
  void pullback(const Eigen::MatrixXd& m, std::span<double> grad) const;

 private:
  int dim_;
  Eigen::MatrixXd u_;
  Eigen::MatrixXcd q_;
  Eigen::MatrixXcd phi_conj_;
};

Eigen::MatrixXd so_matrix(const SoGateParams& params);
/// dim 4 acts on two targets, dim 8 on three.
GateOp so_gate(const SoGateParams& params, std::vector<std::size_t> targets);

enum class LayoutKind { brickwall_so4, ladder_so4, ladder_so8 };
std::string to_string(LayoutKind kind);
LayoutKind layout_kind_from_string(const std::string& name);

/// Placement of the parametric gates. Gate g acts on targets
/// {q, q+1[, q+2]} with q the lowest physical qubit of the gate.
struct CircuitLayout {
  LayoutKind kind = LayoutKind::brickwall_so4;
  std::size_t n_physical = 2;
  std::size_t n_ancilla = 0;
  std::size_t n_layers = 1;
  /// One parameter set shared by every gate of a layer.
  bool translation_symmetric = false;

  void validate() const;
  std::size_t n_qubits() const { return n_physical + n_ancilla; }
  int gate_dim() const;
  std::size_t params_per_gate() const;
  std::size_t gates_per_layer() const;
  std::size_t gate_count() const { return gates_per_layer() * n_layers; }
  std::size_t parameter_count() const;
  /// Lowest target of every gate, layer by layer.
  std::vector<std::size_t> gate_origins() const;
  std::vector<std::size_t> gate_targets(std::size_t gate) const;
  /// Where gate g reads its parameters.
  std::size_t param_offset(std::size_t gate) const;
  CircuitLayout with_symmetry(bool symmetric) const;
};

/// Parametric layers only; see prepare_purified for the entangling stage.
Circuit build_circuit(const CircuitLayout& layout, std::span<const double> params);

/// Per-gate copy of translation-symmetric parameters.
std::vector<double> expand_symmetric(const CircuitLayout& symmetric_layout,
                                     std::span<const double> params);

/// H on ancilla N+i followed by CNOT(N+i -> i), for every ancilla i.
Circuit purification_circuit(std::size_t n_physical, std::size_t n_ancilla);
QuantumState prepare_purified(std::size_t n_physical, std::size_t n_ancilla);

/// Two-CNOT realization of an SO(4) gate up to global phase, built from
/// S, H, CNOT and RX RZ RX rotations. `targets` as for GateOp.
std::vector<GateOp> decompose_so4(const Eigen::Matrix4d& u,
                                  std::array<std::size_t, 2> targets = {0, 1});

struct So8Decomposition {
  /// Ladder gates, alternating local pairs (0,1) and (1,2).
  std::vector<SoGateParams> gates;
  std::size_t layers = 0;
  /// Squared Frobenius distance to the target.
  double distance = 0.0;
  bool below_threshold = false;
};

/// 8x8 product of an SO(4) ladder in the local three-qubit frame.
Eigen::MatrixXd so4_ladder_matrix(const std::vector<SoGateParams>& gates);

struct So8Options {
  std::size_t max_layers = 4;
  double threshold = 1e-10;
  int restarts = 8;
  int max_iterations = 3000;
  std::uint64_t seed = 7;
};

So8Decomposition decompose_so8(const Eigen::MatrixXd& u, const So8Options& options = {});

/// Expands SO(4) gates through decompose_so4 and SO(8) gates through
/// decompose_so8; everything else passes through unchanged.
Circuit to_elementary(const Circuit& circuit, const So8Options& options = {});

}  // namespace scvqe
