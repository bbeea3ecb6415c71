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

#include "scvqe/simulator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "binary_io.hpp"
#include "scvqe/error.hpp"

namespace scvqe {
namespace {

constexpr double kUnitaryTolerance = 1e-10;

// Spreads the bits of `compact` so that zeros sit at `sorted_positions`.
inline std::uint64_t insert_zero_bits(std::uint64_t compact,
                                      std::span<const std::size_t> sorted_positions) {
  for (const std::size_t pos : sorted_positions) {
    const std::uint64_t low = compact & ((std::uint64_t{1} << pos) - 1);
    compact = ((compact >> pos) << (pos + 1)) | low;
  }
  return compact;
}

struct TargetLayout {
  std::array<std::size_t, 3> sorted{};
  std::array<std::uint64_t, 8> offsets{};
  std::size_t k = 0;
};

TargetLayout make_layout(std::span<const std::size_t> targets) {
  TargetLayout layout;
  layout.k = targets.size();
  std::copy(targets.begin(), targets.end(), layout.sorted.begin());
  std::sort(layout.sorted.begin(), layout.sorted.begin() + static_cast<long>(layout.k));
  const std::size_t dim = std::size_t{1} << layout.k;
  for (std::size_t local = 0; local < dim; ++local) {
    std::uint64_t off = 0;
    for (std::size_t j = 0; j < layout.k; ++j) {
      if ((local >> (layout.k - 1 - j)) & 1U) off |= std::uint64_t{1} << targets[j];
    }
    layout.offsets[local] = off;
  }
  return layout;
}

void check_targets(std::span<const std::size_t> targets, std::size_t n_qubits) {
  if (targets.empty() || targets.size() > 3) {
    throw InvalidArgument("gate must act on 1 to 3 qubits");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] >= n_qubits) throw InvalidArgument("gate target out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw InvalidArgument("gate targets must be distinct");
    }
  }
}

}  // namespace

QuantumState::QuantumState(std::size_t n_qubits) : n_qubits_(n_qubits) {
  detail::require(n_qubits >= 1 && n_qubits <= 30, "QuantumState: n_qubits must be in [1, 30]");
  amplitudes_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
  amplitudes_[0] = 1.0;
}

QuantumState::QuantumState(std::vector<cplx> amplitudes) : amplitudes_(std::move(amplitudes)) {
  detail::require(amplitudes_.size() >= 2 && std::has_single_bit(amplitudes_.size()),
                  "QuantumState: amplitude count must be a power of two >= 2");
  n_qubits_ = static_cast<std::size_t>(std::countr_zero(amplitudes_.size()));
}

QuantumState QuantumState::basis(std::size_t n_qubits, std::uint64_t index) {
  QuantumState s(n_qubits);
  detail::require(index < s.dim(), "QuantumState::basis: index out of range");
  s.amplitudes_[0] = 0.0;
  s.amplitudes_[index] = 1.0;
  return s;
}

double QuantumState::norm() const {
  double acc = 0.0;
  for (const auto& a : amplitudes_) acc += std::norm(a);
  return std::sqrt(acc);
}

void QuantumState::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw NumericalError("QuantumState::normalize: zero vector");
  for (auto& a : amplitudes_) a /= n;
}

// ---------------------------------------------------------------------------

GateOp::GateOp(Eigen::MatrixXcd matrix, std::vector<std::size_t> targets, std::string label,
               std::vector<double> params)
    : matrix_(std::move(matrix)),
      targets_(std::move(targets)),
      label_(std::move(label)),
      params_(std::move(params)) {
  check_targets(targets_, 64);
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << targets_.size());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw InvalidArgument("GateOp '" + label_ + "': matrix dimension does not match targets");
  }
  const double err =
      (matrix_ * matrix_.adjoint() - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (!(err <= kUnitaryTolerance)) {
    throw InvalidArgument("GateOp '" + label_ + "': matrix is not unitary");
  }
}

GateOp GateOp::adjoint() const {
  return GateOp(matrix_.adjoint(), targets_, label_ + "^dag", params_);
}

Circuit& Circuit::append(const Circuit& other) {
  detail::require(other.n_qubits == n_qubits, "Circuit::append: register size mismatch");
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  return *this;
}

Circuit Circuit::adjoint() const {
  Circuit out{n_qubits, {}};
  out.gates.reserve(gates.size());
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) out.gates.push_back(it->adjoint());
  return out;
}

std::size_t Circuit::count(const std::string& label) const {
  return static_cast<std::size_t>(std::count_if(
      gates.begin(), gates.end(), [&](const GateOp& g) { return g.label() == label; }));
}

namespace gates {

GateOp hadamard(std::size_t q) {
  const double r = (1.0 / std::numbers::sqrt2);
  Eigen::MatrixXcd m(2, 2);
  m << r, r, r, -r;
  return GateOp(m, {q}, "H");
}

GateOp pauli_x(std::size_t q) {
  Eigen::MatrixXcd m(2, 2);
  m << 0, 1, 1, 0;
  return GateOp(m, {q}, "X");
}

GateOp phase_s(std::size_t q) {
  Eigen::MatrixXcd m(2, 2);
  m << 1, 0, 0, cplx(0, 1);
  return GateOp(m, {q}, "S");
}

GateOp phase_sdg(std::size_t q) {
  Eigen::MatrixXcd m(2, 2);
  m << 1, 0, 0, cplx(0, -1);
  return GateOp(m, {q}, "Sdg");
}

GateOp rx(std::size_t q, double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Eigen::MatrixXcd m(2, 2);
  m << c, cplx(0, -s), cplx(0, -s), c;
  return GateOp(m, {q}, "RX", {angle});
}

GateOp rz(std::size_t q, double angle) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -angle / 2);
  m(1, 1) = std::polar(1.0, angle / 2);
  return GateOp(m, {q}, "RZ", {angle});
}

GateOp cnot(std::size_t control, std::size_t target) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return GateOp(m, {control, target}, "CNOT");
}

}  // namespace gates

void apply_matrix(std::span<cplx> amps, const Eigen::MatrixXcd& u,
                  std::span<const std::size_t> targets) {
  detail::require(amps.size() >= 2 && std::has_single_bit(amps.size()),
                  "apply_matrix: amplitude count must be a power of two");
  const auto n = static_cast<std::size_t>(std::countr_zero(amps.size()));
  check_targets(targets, n);
  const TargetLayout layout = make_layout(targets);
  const std::size_t k = layout.k;
  const std::size_t local_dim = std::size_t{1} << k;
  detail::require(u.rows() == static_cast<Eigen::Index>(local_dim) && u.cols() == u.rows(),
                  "apply_matrix: matrix dimension does not match targets");
  const std::span<const std::size_t> sorted(layout.sorted.data(), k);
  const std::uint64_t blocks = std::uint64_t{1} << (n - k);
  std::array<cplx, 8> in{};
  for (std::uint64_t blk = 0; blk < blocks; ++blk) {
    const std::uint64_t base = insert_zero_bits(blk, sorted);
    for (std::size_t l = 0; l < local_dim; ++l) in[l] = amps[base | layout.offsets[l]];
    for (std::size_t r = 0; r < local_dim; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < local_dim; ++c) {
        acc += u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
      }
      amps[base | layout.offsets[r]] = acc;
    }
  }
}

void apply_gate(QuantumState& state, const GateOp& gate) {
  apply_matrix(state.amplitudes(), gate.matrix(), gate.targets());
}

QuantumState applied(const QuantumState& state, const GateOp& gate) {
  QuantumState out = state;
  apply_gate(out, gate);
  return out;
}

void apply_circuit(QuantumState& state, const Circuit& circuit) {
  detail::require(circuit.n_qubits == state.n_qubits(),
                  "apply_circuit: circuit and state register sizes differ");
  for (const auto& g : circuit.gates) apply_gate(state, g);
}

void apply_real_matrix(std::span<double> amplitudes, const double* matrix,
                       std::span<const std::size_t> targets) {
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(amplitudes.size()));
  const TargetLayout layout = make_layout(targets);
  const std::size_t k = layout.k;
  const std::size_t local_dim = std::size_t{1} << k;
  const std::span<const std::size_t> sorted(layout.sorted.data(), k);
  const std::uint64_t blocks = std::uint64_t{1} << (n - k);
  std::array<double, 8> in{};
  // row-major matrix
  for (std::uint64_t blk = 0; blk < blocks; ++blk) {
    const std::uint64_t base = insert_zero_bits(blk, sorted);
    for (std::size_t l = 0; l < local_dim; ++l) in[l] = amplitudes[base | layout.offsets[l]];
    for (std::size_t r = 0; r < local_dim; ++r) {
      const double* row = matrix + r * local_dim;
      double acc = 0.0;
      for (std::size_t c = 0; c < local_dim; ++c) acc += row[c] * in[c];
      amplitudes[base | layout.offsets[r]] = acc;
    }
  }
}

void accumulate_real_outer(std::span<const double> left, std::span<const double> right,
                           std::span<const std::size_t> targets, double* out) {
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(left.size()));
  const TargetLayout layout = make_layout(targets);
  const std::size_t k = layout.k;
  const std::size_t local_dim = std::size_t{1} << k;
  const std::span<const std::size_t> sorted(layout.sorted.data(), k);
  const std::uint64_t blocks = std::uint64_t{1} << (n - k);
  std::array<double, 8> a{};
  std::array<double, 8> b{};
  for (std::uint64_t blk = 0; blk < blocks; ++blk) {
    const std::uint64_t base = insert_zero_bits(blk, sorted);
    for (std::size_t l = 0; l < local_dim; ++l) {
      a[l] = left[base | layout.offsets[l]];
      b[l] = right[base | layout.offsets[l]];
    }
    for (std::size_t r = 0; r < local_dim; ++r) {
      double* row = out + r * local_dim;
      for (std::size_t c = 0; c < local_dim; ++c) row[c] += a[r] * b[c];
    }
  }
}

// ---------------------------------------------------------------------------

cplx expectation(const QuantumState& state, const PauliSum& op) {
  detail::require(op.n_qubits() <= state.n_qubits(),
                  "expectation: operator acts on more qubits than the state has");
  const CompiledOperator compiled(op);
  cplx value = compiled.expectation(state.amplitudes());
  if (op.is_hermitian()) value.imag(0.0);
  return value;
}

cplx expectation(const QuantumState& state, const BasisPermutation& op) {
  detail::require(op.n_qubits() <= state.n_qubits(),
                  "expectation: operator acts on more qubits than the state has");
  return op.expectation(state.amplitudes());
}

cplx expectation(const QuantumState& state, const Observable& op) {
  return std::visit([&](const auto& o) { return expectation(state, o); }, op);
}

QuantumState apply_operator(const QuantumState& state, const PauliSum& op) {
  detail::require(op.n_qubits() <= state.n_qubits(),
                  "apply_operator: operator acts on more qubits than the state has");
  std::vector<cplx> out(state.dim());
  CompiledOperator(op).apply(state.amplitudes(), out);
  return QuantumState(std::move(out));
}

double variance(const QuantumState& state, const PauliSum& op) {
  if (!op.is_hermitian()) throw InvalidArgument("variance: operator is not Hermitian");
  const QuantumState applied_state = apply_operator(state, op);
  double second = 0.0;
  cplx first = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    second += std::norm(applied_state[i]);
    first += std::conj(state[i]) * applied_state[i];
  }
  return std::max(0.0, second - first.real() * first.real());
}

cplx inner_product(const QuantumState& a, const QuantumState& b) {
  detail::require(a.dim() == b.dim(), "inner_product: dimension mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  return std::min(1.0, std::norm(inner_product(a, b)));
}

std::map<std::uint64_t, std::uint64_t> sample_counts(const QuantumState& state,
                                                     std::uint64_t shots, std::uint64_t seed) {
  detail::require(shots >= 1, "sample_counts: shots must be >= 1");
  // sequential conditional binomials: deterministic and O(dim) per call
  std::mt19937_64 rng(seed);
  std::map<std::uint64_t, std::uint64_t> counts;
  double remaining_mass = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) remaining_mass += std::norm(state[i]);
  std::uint64_t remaining = shots;
  for (std::size_t i = 0; i < state.dim() && remaining > 0; ++i) {
    const double p = std::norm(state[i]);
    if (p <= 0.0) continue;
    const double q = std::clamp(p / remaining_mass, 0.0, 1.0);
    std::uint64_t c = remaining;
    if (q < 1.0) {
      std::binomial_distribution<std::uint64_t> dist(remaining, q);
      c = dist(rng);
    }
    if (c > 0) counts[i] = c;
    remaining -= c;
    remaining_mass -= p;
    if (remaining_mass <= 0.0) break;
  }
  if (remaining > 0) {
    // only reachable through rounding in the tail; attach to the last
    // outcome with nonzero weight
    for (std::size_t i = state.dim(); i-- > 0;) {
      if (std::norm(state[i]) > 0.0) {
        counts[i] += remaining;
        break;
      }
    }
  }
  return counts;
}


void save_state(const QuantumState& state, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  detail::write_le<std::uint64_t>(os, state.n_qubits());
  for (const auto& a : state.amplitudes()) {
    detail::write_le<double>(os, a.real());
    detail::write_le<double>(os, a.imag());
  }
}

QuantumState load_state(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  const auto n = detail::read_le<std::uint64_t>(is, "state file");
  if (n < 1 || n > 30) throw FormatError("state file: invalid qubit count");
  std::vector<cplx> amps(std::size_t{1} << n);
  for (auto& a : amps) {
    const double re = detail::read_le<double>(is, "state file");
    const double im = detail::read_le<double>(is, "state file");
    a = {re, im};
  }
  return QuantumState(std::move(amps));
}

}  // namespace scvqe
