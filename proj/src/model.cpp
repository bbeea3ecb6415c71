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

#include "scvqe/model.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "scvqe/error.hpp"

namespace scvqe {
namespace {

PauliSum z_op(std::size_t n, std::size_t q) { return PauliSum::single(n, Pauli::Z, q); }

PauliSum sigma_plus(std::size_t n, std::size_t q) {
  return PauliSum::single(n, Pauli::X, q, 0.5) + PauliSum::single(n, Pauli::Y, q, {0.0, 0.5});
}

PauliSum sigma_minus(std::size_t n, std::size_t q) {
  return PauliSum::single(n, Pauli::X, q, 0.5) + PauliSum::single(n, Pauli::Y, q, {0.0, -0.5});
}

double alternating(std::size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

double LatticeParams::mu() const { return 2.0 * mass_lat * std::sqrt(x); }

void LatticeParams::validate() const {
  if (n_sites < 2 || n_sites % 2 != 0) {
    throw InvalidArgument("LatticeParams: n_sites must be even and >= 2, got " +
                          std::to_string(n_sites));
  }
  if (n_sites > 30) throw InvalidArgument("LatticeParams: n_sites must be <= 30");
  if (!std::isfinite(x) || !std::isfinite(mass_lat) || !std::isfinite(bg_field) ||
      !std::isfinite(penalty_strength)) {
    throw InvalidArgument("LatticeParams: parameters must be finite");
  }
  if (x < 0.0) throw InvalidArgument("LatticeParams: x must be nonnegative");
  if (penalty_strength < 0.0) {
    throw InvalidArgument("LatticeParams: penalty_strength must be nonnegative");
  }
}

PauliSum hopping_term(const LatticeParams& p) {
  const std::size_t n = p.n_sites;
  PauliSum out(n);
  for (std::size_t site = 0; site + 1 < n; ++site) {
    // s+ s- + s- s+ = (XX + YY) / 2
    out.add_term(PauliString::from_factors(0.5 * p.x, {{site, Pauli::X}, {site + 1, Pauli::X}}));
    out.add_term(PauliString::from_factors(0.5 * p.x, {{site, Pauli::Y}, {site + 1, Pauli::Y}}));
  }
  return out.normalize();
}

PauliSum mass_term(const LatticeParams& p) {
  const std::size_t n = p.n_sites;
  const double half_mu = 0.5 * p.mu();
  PauliSum out = PauliSum::identity(n, half_mu * static_cast<double>(n));
  for (std::size_t site = 0; site < n; ++site) {
    out += z_op(n, site) * cplx{half_mu * alternating(site), 0.0};
  }
  return out;
}

PauliSum link_field(const LatticeParams& p, int link) {
  const std::size_t n = p.n_sites;
  if (link < 0 || static_cast<std::size_t>(link) + 2 > n) {
    throw InvalidArgument("link_field: link index must be in [0, N-2], got " +
                          std::to_string(link));
  }
  double constant = p.bg_field;
  PauliSum out(n);
  for (std::size_t k = 0; k <= static_cast<std::size_t>(link); ++k) {
    constant += 0.5 * alternating(k);
    out.add_term(PauliString::single(Pauli::Z, k, 0.5));
  }
  out.add_term(PauliString(constant, 0, 0));
  return out.normalize();
}

PauliSum electric_term(const LatticeParams& p) {
  PauliSum out(p.n_sites);
  for (std::size_t link = 0; link + 1 < p.n_sites; ++link) {
    const PauliSum l = link_field(p, static_cast<int>(link));
    out += l * l;
  }
  return out;
}

PauliSum total_charge(std::size_t n_sites) {
  PauliSum out(n_sites);
  for (std::size_t q = 0; q < n_sites; ++q) out.add_term(PauliString::single(Pauli::Z, q));
  return out.normalize();
}

PauliSum penalty_term(const LatticeParams& p) {
  const PauliSum q = total_charge(p.n_sites);
  return (q * q) * cplx{p.penalty_strength, 0.0};
}

PauliSum build_hamiltonian(const LatticeParams& p) {
  p.validate();
  PauliSum h = hopping_term(p) + mass_term(p) + electric_term(p);
  if (p.penalty_strength > 0.0) h += penalty_term(p);
  return h;
}

// ---------------------------------------------------------------------------

BasisPermutation::BasisPermutation(std::size_t n_qubits) : n_qubits_(n_qubits) {
  detail::require(n_qubits >= 2 && n_qubits <= 30 && n_qubits % 2 == 0,
                  "BasisPermutation: n_qubits must be even and in [2, 30]");
  flip_mask_ = (std::uint64_t{1} << n_qubits) - 1;
}

std::uint64_t BasisPermutation::image(std::uint64_t basis) const {
  const std::uint64_t full = (std::uint64_t{1} << n_qubits_) - 1;
  const std::uint64_t low = basis & full;
  // site n -> n + 1, the last site wraps to 0, then every spin flips
  const std::uint64_t shifted = ((low << 1) | (low >> (n_qubits_ - 1))) & full;
  return (basis & ~full) | (shifted ^ flip_mask_);
}

void BasisPermutation::apply(std::span<const cplx> in, std::span<cplx> out) const {
  detail::require(in.size() == out.size() && in.size() >= (std::size_t{1} << n_qubits_),
                  "BasisPermutation: vector size mismatch");
  for (std::size_t b = 0; b < in.size(); ++b) out[image(b)] = in[b];
}

cplx BasisPermutation::expectation(std::span<const cplx> state) const {
  detail::require(std::has_single_bit(state.size()) &&
                      state.size() >= (std::size_t{1} << n_qubits_),
                  "BasisPermutation: vector size mismatch");
  cplx total = 0.0;
  for (std::size_t b = 0; b < state.size(); ++b) total += std::conj(state[image(b)]) * state[b];
  return total;
}

Eigen::MatrixXcd BasisPermutation::to_dense() const {
  detail::require(n_qubits_ <= 14, "BasisPermutation::to_dense: register too large");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits_);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    m(static_cast<Eigen::Index>(image(static_cast<std::uint64_t>(b))), b) = 1.0;
  }
  return m;
}

// ---------------------------------------------------------------------------

PauliSum momentum_operator(const LatticeParams& p) {
  const std::size_t n = p.n_sites;
  PauliSum out(n);
  for (std::size_t site = 0; site + 2 < n; ++site) {
    const PauliSum forward = sigma_minus(n, site) * z_op(n, site + 1) * sigma_plus(n, site + 2);
    const PauliSum backward = sigma_plus(n, site) * z_op(n, site + 1) * sigma_minus(n, site + 2);
    out += (forward - backward) * cplx{0.0, -p.x};
  }
  return out;
}

PauliSum momentum_squared(const LatticeParams& p) {
  const PauliSum op = momentum_operator(p);
  return op * op;
}

PauliSum chiral_condensate(const LatticeParams& p) {
  const std::size_t n = p.n_sites;
  const double scale = std::sqrt(p.x) / (2.0 * static_cast<double>(n));
  PauliSum out(n);
  for (std::size_t site = 0; site < n; ++site) {
    // (-1)^n (1 + Z_n); the identity parts cancel for even N but stay explicit
    out.add_term(PauliString(scale * alternating(site), 0, 0));
    out.add_term(PauliString::single(Pauli::Z, site, scale * alternating(site)));
  }
  return out.normalize();
}

int central_link(const LatticeParams& p) { return static_cast<int>(p.n_sites / 2) - 1; }

PauliSum electric_field_density(const LatticeParams& p, int r) {
  const int n = static_cast<int>(p.n_sites);
  if (r < 1 || 2 * r > n) {
    throw InvalidArgument("electric_field_density: r must be in [1, N/2], got " +
                          std::to_string(r));
  }
  PauliSum out(p.n_sites);
  for (int k = 0; k < r; ++k) {
    const int left = n / 2 - k - 1;
    const int right = n / 2 + k;
    out += link_field(p, left);
    // the link right of the last site does not exist; L_{N-1} is fixed by
    // Gauss law to l + total charge / 2, which is l in the zero sector
    if (right <= n - 2) {
      out += link_field(p, right);
    } else {
      out += PauliSum::identity(p.n_sites, p.bg_field) + total_charge(p.n_sites) * cplx{0.5, 0.0};
    }
  }
  return out * cplx{1.0 / (2.0 * r), 0.0};
}

ObservableKind observable_kind_from_string(const std::string& name) {
  if (name == "momentum_sq") return ObservableKind::momentum_sq;
  if (name == "spin_transform") return ObservableKind::spin_transform;
  if (name == "chiral_condensate") return ObservableKind::chiral_condensate;
  if (name == "link_field") return ObservableKind::link_field;
  if (name == "efd") return ObservableKind::efd;
  if (name == "total_charge") return ObservableKind::total_charge;
  if (name == "total_charge_sq") return ObservableKind::total_charge_sq;
  throw InvalidArgument("unknown observable kind '" + name + "'");
}

std::string to_string(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::momentum_sq: return "momentum_sq";
    case ObservableKind::spin_transform: return "spin_transform";
    case ObservableKind::chiral_condensate: return "chiral_condensate";
    case ObservableKind::link_field: return "link_field";
    case ObservableKind::efd: return "efd";
    case ObservableKind::total_charge: return "total_charge";
    case ObservableKind::total_charge_sq: return "total_charge_sq";
  }
  return "unknown";
}

Observable build_observable(ObservableKind kind, const LatticeParams& p, int index) {
  p.validate();
  switch (kind) {
    case ObservableKind::momentum_sq: return momentum_squared(p);
    case ObservableKind::spin_transform: return BasisPermutation(p.n_sites);
    case ObservableKind::chiral_condensate: return chiral_condensate(p);
    case ObservableKind::link_field: return link_field(p, index);
    case ObservableKind::efd: return electric_field_density(p, index);
    case ObservableKind::total_charge: return total_charge(p.n_sites);
    case ObservableKind::total_charge_sq: {
      const PauliSum q = total_charge(p.n_sites);
      return q * q;
    }
  }
  throw InvalidArgument("build_observable: unknown kind");
}

std::string to_string(Branch b) { return b == Branch::scalar ? "scalar" : "vector"; }

Branch phase_classify(cplx sr_expectation, double floor) {
  if (!(std::abs(sr_expectation) > floor)) {
    throw NumericalError("phase_classify: |<S_R>| below floor, classification undetermined");
  }
  return std::abs(std::arg(sr_expectation)) < std::numbers::pi / 2 ? Branch::scalar
                                                                   : Branch::vector;
}

}  // namespace scvqe
