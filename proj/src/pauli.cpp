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

#include "scvqe/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "scvqe/error.hpp"

namespace scvqe {
namespace {

// i^k for k taken mod 4.
cplx i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

int popcount(std::uint64_t v) { return std::popcount(v); }

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw FormatError(std::string("unknown Pauli factor '") + c + "'");
  }
}

PauliString PauliString::single(Pauli p, std::size_t qubit, cplx coefficient) {
  detail::require(qubit < 64, "PauliString: qubit index must be < 64");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (p) {
    case Pauli::I: return {coefficient, 0, 0};
    case Pauli::X: return {coefficient, bit, 0};
    case Pauli::Y: return {coefficient, bit, bit};
    case Pauli::Z: return {coefficient, 0, bit};
  }
  return {};
}

PauliString PauliString::from_factors(cplx coefficient,
                                      const std::map<std::size_t, Pauli>& factors) {
  PauliString out(coefficient, 0, 0);
  for (const auto& [q, p] : factors) {
    const PauliString s = single(p, q);
    out.x_ |= s.x_;
    out.z_ |= s.z_;
  }
  return out;
}

Pauli PauliString::factor(std::size_t qubit) const {
  if (qubit >= 64) return Pauli::I;
  const bool x = (x_ >> qubit) & 1U;
  const bool z = (z_ >> qubit) & 1U;
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

std::map<std::size_t, Pauli> PauliString::factors() const {
  std::map<std::size_t, Pauli> out;
  std::uint64_t support = x_ | z_;
  while (support != 0) {
    const auto q = static_cast<std::size_t>(std::countr_zero(support));
    out.emplace(q, factor(q));
    support &= support - 1;
  }
  return out;
}

std::size_t PauliString::weight() const {
  return static_cast<std::size_t>(popcount(x_ | z_));
}

std::size_t PauliString::support_size() const {
  const std::uint64_t support = x_ | z_;
  return support == 0 ? 0 : 64 - static_cast<std::size_t>(std::countl_zero(support));
}

cplx PauliString::basis_factor() const {
  return coefficient_ * i_power(popcount(x_ & z_));
}

std::pair<cplx, std::uint64_t> PauliString::apply_to_basis(std::uint64_t basis) const {
  cplx phase = basis_factor();
  if (popcount(basis & z_) & 1) phase = -phase;
  return {phase, basis ^ x_};
}

bool PauliString::commutes_with(const PauliString& other) const {
  return ((popcount(x_ & other.z_) + popcount(z_ & other.x_)) & 1) == 0;
}

PauliString operator*(const PauliString& a, const PauliString& b) {
  const std::uint64_t x = a.x_ ^ b.x_;
  const std::uint64_t z = a.z_ ^ b.z_;
  const int k = popcount(a.x_ & a.z_) + popcount(b.x_ & b.z_) - popcount(x & z) +
                2 * popcount(a.z_ & b.x_);
  return {a.coefficient_ * b.coefficient_ * i_power(k), x, z};
}

// ---------------------------------------------------------------------------

PauliSum::PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {
  detail::require(n_qubits >= 1 && n_qubits <= 64, "PauliSum: n_qubits must be in [1, 64]");
}

PauliSum::PauliSum(std::size_t n_qubits, std::vector<PauliString> terms)
    : PauliSum(n_qubits) {
  for (const auto& t : terms) add_term(t);
  normalize();
}

PauliSum PauliSum::identity(std::size_t n_qubits, cplx coefficient) {
  PauliSum out(n_qubits);
  out.add_term(PauliString(coefficient, 0, 0));
  return out;
}

PauliSum PauliSum::single(std::size_t n_qubits, Pauli p, std::size_t qubit,
                          cplx coefficient) {
  PauliSum out(n_qubits);
  out.add_term(PauliString::single(p, qubit, coefficient));
  return out;
}

void PauliSum::add_term(const PauliString& term) {
  if (term.support_size() > n_qubits_) {
    throw InvalidArgument("PauliSum: term acts outside the register of " +
                          std::to_string(n_qubits_) + " qubits");
  }
  terms_.push_back(term);
}

PauliSum& PauliSum::normalize(double drop_tolerance) {
  std::sort(terms_.begin(), terms_.end(), [](const PauliString& a, const PauliString& b) {
    return a.x_mask() != b.x_mask() ? a.x_mask() < b.x_mask() : a.z_mask() < b.z_mask();
  });
  std::vector<PauliString> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().same_factors(t)) {
      merged.back().set_coefficient(merged.back().coefficient() + t.coefficient());
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [&](const PauliString& t) {
    return std::abs(t.coefficient()) <= drop_tolerance;
  });
  terms_ = std::move(merged);
  return *this;
}

bool PauliSum::is_hermitian(double tolerance) const {
  PauliSum copy = *this;
  copy.normalize(0.0);
  return std::all_of(copy.terms_.begin(), copy.terms_.end(), [&](const PauliString& t) {
    return std::abs(t.coefficient().imag()) <= tolerance;
  });
}

PauliSum PauliSum::adjoint() const {
  PauliSum out = *this;
  for (auto& t : out.terms_) t.set_coefficient(std::conj(t.coefficient()));
  return out;
}

PauliSum PauliSum::embedded(std::size_t n_total, std::size_t offset) const {
  detail::require(n_total >= n_qubits_ + offset && n_total <= 64,
                  "PauliSum::embedded: target register too small");
  PauliSum out(n_total);
  for (const auto& t : terms_) {
    out.terms_.emplace_back(t.coefficient(), t.x_mask() << offset, t.z_mask() << offset);
  }
  return out;
}

PauliSum PauliSum::tensor(const PauliSum& high) const {
  const std::size_t n = n_qubits_ + high.n_qubits_;
  return embedded(n) * high.embedded(n, n_qubits_);
}

cplx PauliSum::identity_coefficient() const {
  cplx c = 0.0;
  for (const auto& t : terms_) {
    if (t.is_identity()) c += t.coefficient();
  }
  return c;
}

double PauliSum::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coefficient()));
  return m;
}

Eigen::MatrixXcd PauliSum::to_matrix() const {
  detail::require(n_qubits_ <= 14, "PauliSum::to_matrix: register too large for a dense matrix");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (const auto& t : terms_) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      const auto [phase, image] = t.apply_to_basis(b);
      m(static_cast<Eigen::Index>(image), static_cast<Eigen::Index>(b)) += phase;
    }
  }
  return m;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  detail::require(other.n_qubits_ == n_qubits_, "PauliSum: register size mismatch");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return normalize();
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  return *this += other * cplx{-1.0, 0.0};
}

PauliSum& PauliSum::operator*=(cplx scalar) {
  for (auto& t : terms_) t.set_coefficient(t.coefficient() * scalar);
  return normalize();
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  detail::require(a.n_qubits_ == b.n_qubits_, "PauliSum: register size mismatch");
  PauliSum out(a.n_qubits_);
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) out.terms_.push_back(ta * tb);
  }
  out.normalize();
  return out;
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) { return a * b - b * a; }

std::string to_text(const PauliSum& op) {
  std::ostringstream os;
  char buf[64];
  for (const auto& t : op.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g ", t.coefficient().real(),
                  t.coefficient().imag());
    os << buf;
    for (std::size_t q = 0; q < op.n_qubits(); ++q) os << to_char(t.factor(q));
    os << '\n';
  }
  return os.str();
}

PauliSum pauli_sum_from_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  std::vector<PauliString> terms;
  std::size_t n_qubits = 0;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    double re = 0.0, im = 0.0;
    std::string factors;
    if (!(ls >> re >> im >> factors)) {
      throw FormatError("Pauli text: malformed line " + std::to_string(line_no));
    }
    if (n_qubits == 0) n_qubits = factors.size();
    if (factors.size() != n_qubits || n_qubits > 64) {
      throw FormatError("Pauli text: inconsistent string length on line " +
                        std::to_string(line_no));
    }
    std::map<std::size_t, Pauli> map;
    for (std::size_t q = 0; q < factors.size(); ++q) {
      const Pauli p = pauli_from_char(factors[q]);
      if (p != Pauli::I) map.emplace(q, p);
    }
    terms.push_back(PauliString::from_factors({re, im}, map));
  }
  if (n_qubits == 0) throw FormatError("Pauli text: no terms");
  PauliSum out(n_qubits);
  for (const auto& t : terms) out.add_term(t);
  out.normalize(0.0);
  return out;
}

// ---------------------------------------------------------------------------

CompiledOperator::CompiledOperator(const PauliSum& op) : n_qubits_(op.n_qubits()) {
  detail::require(n_qubits_ <= 30, "CompiledOperator: register too large");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  diagonal_.assign(dim, cplx{0.0, 0.0});
  bool any_diagonal = false;
  for (const auto& t : op.terms()) {
    if (t.is_diagonal()) {
      any_diagonal = true;
      for (std::uint64_t b = 0; b < dim; ++b) diagonal_[b] += t.apply_to_basis(b).first;
      continue;
    }
    auto it = std::find_if(groups_.begin(), groups_.end(),
                           [&](const FlipGroup& g) { return g.x == t.x_mask(); });
    if (it == groups_.end()) {
      groups_.push_back(FlipGroup{t.x_mask(), {}, {}});
      it = std::prev(groups_.end());
    }
    it->z.push_back(t.z_mask());
    it->factor.push_back(t.basis_factor());
  }
  if (!any_diagonal) diagonal_.clear();
  diagonal_real_.resize(diagonal_.size());
  for (std::size_t i = 0; i < diagonal_.size(); ++i) diagonal_real_[i] = diagonal_[i].real();
}

namespace {
void check_size(std::size_t size, std::size_t n_qubits) {
  if (size < (std::size_t{1} << n_qubits) || !std::has_single_bit(size)) {
    throw InvalidArgument("CompiledOperator: vector size does not match operator register");
  }
}
}  // namespace

void CompiledOperator::apply(std::span<const cplx> in, std::span<cplx> out) const {
  check_size(in.size(), n_qubits_);
  detail::require(out.size() == in.size(), "CompiledOperator: output size mismatch");
  const std::uint64_t low = (std::uint64_t{1} << n_qubits_) - 1;
  const std::size_t dim = in.size();
  if (diagonal_.empty()) {
    std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
  } else {
    for (std::size_t b = 0; b < dim; ++b) out[b] = diagonal_[b & low] * in[b];
  }
  for (const auto& g : groups_) {
    for (std::size_t b = 0; b < dim; ++b) {
      cplx acc = 0.0;
      for (std::size_t t = 0; t < g.z.size(); ++t) {
        acc += (std::popcount(b & g.z[t]) & 1) ? -g.factor[t] : g.factor[t];
      }
      out[b ^ g.x] += acc * in[b];
    }
  }
}

void CompiledOperator::apply_real(std::span<const double> in, std::span<double> out) const {
  check_size(in.size(), n_qubits_);
  detail::require(out.size() == in.size(), "CompiledOperator: output size mismatch");
  const std::uint64_t low = (std::uint64_t{1} << n_qubits_) - 1;
  const std::size_t dim = in.size();
  if (diagonal_real_.empty()) {
    std::fill(out.begin(), out.end(), 0.0);
  } else {
    for (std::size_t b = 0; b < dim; ++b) out[b] = diagonal_real_[b & low] * in[b];
  }
  for (const auto& g : groups_) {
    for (std::size_t b = 0; b < dim; ++b) {
      double acc = 0.0;
      for (std::size_t t = 0; t < g.z.size(); ++t) {
        const double f = g.factor[t].real();
        acc += (std::popcount(b & g.z[t]) & 1) ? -f : f;
      }
      out[b ^ g.x] += acc * in[b];
    }
  }
}

cplx CompiledOperator::expectation(std::span<const cplx> state) const {
  check_size(state.size(), n_qubits_);
  const std::uint64_t low = (std::uint64_t{1} << n_qubits_) - 1;
  cplx total = 0.0;
  if (!diagonal_.empty()) {
    for (std::size_t b = 0; b < state.size(); ++b) {
      total += diagonal_[b & low] * std::norm(state[b]);
    }
  }
  for (const auto& g : groups_) {
    for (std::size_t b = 0; b < state.size(); ++b) {
      cplx acc = 0.0;
      for (std::size_t t = 0; t < g.z.size(); ++t) {
        acc += (std::popcount(b & g.z[t]) & 1) ? -g.factor[t] : g.factor[t];
      }
      total += std::conj(state[b ^ g.x]) * acc * state[b];
    }
  }
  return total;
}

double CompiledOperator::expectation_real(std::span<const double> state) const {
  check_size(state.size(), n_qubits_);
  const std::uint64_t low = (std::uint64_t{1} << n_qubits_) - 1;
  double total = 0.0;
  if (!diagonal_real_.empty()) {
    for (std::size_t b = 0; b < state.size(); ++b) {
      total += diagonal_real_[b & low] * state[b] * state[b];
    }
  }
  for (const auto& g : groups_) {
    for (std::size_t b = 0; b < state.size(); ++b) {
      double acc = 0.0;
      for (std::size_t t = 0; t < g.z.size(); ++t) {
        const double f = g.factor[t].real();
        acc += (std::popcount(b & g.z[t]) & 1) ? -f : f;
      }
      total += state[b ^ g.x] * acc * state[b];
    }
  }
  return total;
}

}  // namespace scvqe
