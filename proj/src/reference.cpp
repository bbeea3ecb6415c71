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

#include "scvqe/reference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "scvqe/error.hpp"

namespace scvqe {
namespace {

constexpr std::size_t kDenseLimit = 2500;

// Sector-restricted sparse matrix in CSR form.
struct SectorMatrix {
  std::vector<std::uint64_t> basis;
  std::vector<std::size_t> row_start;
  std::vector<std::size_t> cols;
  std::vector<cplx> values;
  bool real = true;

  std::size_t dim() const { return basis.size(); }

  void multiply(const double* in, double* out) const {
    for (std::size_t r = 0; r < dim(); ++r) {
      double acc = 0.0;
      for (std::size_t e = row_start[r]; e < row_start[r + 1]; ++e) acc += values[e].real() * in[cols[e]];
      out[r] = acc;
    }
  }

  Eigen::MatrixXcd dense() const {
    const auto n = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t r = 0; r < dim(); ++r) {
      for (std::size_t e = row_start[r]; e < row_start[r + 1]; ++e) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols[e])) += values[e];
      }
    }
    return m;
  }
};

SectorMatrix build_sector_matrix(const PauliSum& h, ChargeSector sector) {
  const std::size_t n = h.n_qubits();
  detail::require(n >= 1 && n <= 20, "exact_spectrum: at most 20 qubits are supported");
  if (!h.is_hermitian()) throw InvalidArgument("exact_spectrum: Hamiltonian is not Hermitian");
  SectorMatrix m;
  m.basis = sector_basis(n, sector);
  if (m.basis.empty()) throw InvalidArgument("exact_spectrum: sector is empty");
  std::vector<std::int64_t> lookup(std::size_t{1} << n, -1);
  for (std::size_t i = 0; i < m.basis.size(); ++i) lookup[m.basis[i]] = static_cast<std::int64_t>(i);

  m.row_start.push_back(0);
  std::vector<std::pair<std::uint64_t, cplx>> row;
  // H is Hermitian, so row r of H is read off by applying H to |b_r>
  // (column r) and conjugating.
  for (const std::uint64_t b : m.basis) {
    row.clear();
    for (const PauliString& t : h.terms()) {
      const auto [phase, image] = t.apply_to_basis(b);
      row.emplace_back(image, std::conj(phase));
    }
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b2) { return a.first < b2.first; });
    for (std::size_t i = 0; i < row.size();) {
      cplx acc = 0.0;
      const std::uint64_t image = row[i].first;
      for (; i < row.size() && row[i].first == image; ++i) acc += row[i].second;
      if (std::abs(acc) <= 1e-14) continue;
      const std::int64_t col = lookup[image];
      if (col < 0) throw InvalidArgument("exact_spectrum: Hamiltonian mixes charge sectors");
      if (std::abs(acc.imag()) > 1e-14) m.real = false;
      m.cols.push_back(static_cast<std::size_t>(col));
      m.values.push_back(acc);
    }
    m.row_start.push_back(m.cols.size());
  }
  return m;
}

QuantumState embed(const SectorMatrix& m, std::size_t n_qubits, const Eigen::VectorXcd& v) {
  std::vector<cplx> amps(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < m.dim(); ++i) amps[m.basis[i]] = v(static_cast<Eigen::Index>(i));
  QuantumState s(std::move(amps));
  s.normalize();
  return s;
}

// Real-valued eigenvectors carry an arbitrary sign; fix it so that the
// largest-magnitude amplitude is positive.
void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v(idx) < 0) v = -v;
}

}  // namespace

std::string to_string(ChargeSector s) { return s == ChargeSector::zero ? "zero" : "all"; }

ChargeSector charge_sector_from_string(const std::string& name) {
  if (name == "zero") return ChargeSector::zero;
  if (name == "all") return ChargeSector::all;
  throw InvalidArgument("unknown charge sector '" + name + "' (expected zero or all)");
}

std::vector<std::uint64_t> sector_basis(std::size_t n_qubits, ChargeSector sector) {
  detail::require(n_qubits >= 1 && n_qubits <= 30, "sector_basis: bad qubit count");
  std::vector<std::uint64_t> out;
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (sector == ChargeSector::all || 2 * static_cast<std::size_t>(std::popcount(b)) == n_qubits) {
      out.push_back(b);
    }
  }
  return out;
}

LanczosResult lanczos_lowest(const std::function<void(const double*, double*)>& matvec,
                             std::size_t dim, std::size_t k, double tolerance,
                             std::uint64_t seed) {
  detail::require(k >= 1 && k <= dim, "lanczos: need 1 <= k <= dim");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(dim);

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;  // beta[j] couples j and j+1
  auto random_orthogonal = [&]() {
    for (int attempt = 0; attempt < 5; ++attempt) {
      Eigen::VectorXd v(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) v -= q.dot(v) * q;
      const double nv = v.norm();
      if (nv > 1e-8) return Eigen::VectorXd(v / nv);
    }
    return Eigen::VectorXd();
  };

  Eigen::VectorXd w(n);
  basis.push_back(random_orthogonal());
  LanczosResult out;
  const std::size_t check_every = 10;
  while (true) {
    const std::size_t j = basis.size() - 1;
    matvec(basis[j].data(), w.data());
    const double a = basis[j].dot(w);
    alpha.push_back(a);
    // full reorthogonalization, twice for stability
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q.dot(w) * q;
    double b = w.norm();
    const std::size_t m = basis.size();
    const bool exhausted = m == dim;

    if (exhausted || m % check_every == 0 || b < 1e-10) {
      const auto mm = static_cast<Eigen::Index>(m);
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), mm);
      Eigen::VectorXd off(std::max<Eigen::Index>(mm - 1, 0));
      for (Eigen::Index i = 0; i + 1 < mm; ++i) off(i) = beta[static_cast<std::size_t>(i)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
      if (m >= k) {
        bool converged = true;
        for (std::size_t i = 0; i < k && converged; ++i) {
          const double theta = tri.eigenvalues()(static_cast<Eigen::Index>(i));
          const double res = b * std::abs(tri.eigenvectors()(mm - 1, static_cast<Eigen::Index>(i)));
          converged = res < tolerance * std::max(1.0, std::abs(theta));
        }
        // an invariant subspace only counts once nothing else is reachable
        if (b < 1e-10 && !exhausted) converged = false;
        if (converged || exhausted) {
          out.values = tri.eigenvalues().head(static_cast<Eigen::Index>(k));
          out.vectors.resize(n, static_cast<Eigen::Index>(k));
          for (std::size_t i = 0; i < k; ++i) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
            for (std::size_t r = 0; r < m; ++r) {
              v += tri.eigenvectors()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) *
                   basis[r];
            }
            v.normalize();
            out.vectors.col(static_cast<Eigen::Index>(i)) = v;
          }
          out.steps = m;
          return out;
        }
      }
    }
    if (b < 1e-10) {
      // invariant subspace: continue from a fresh orthogonal direction
      Eigen::VectorXd v = random_orthogonal();
      if (v.size() == 0) throw NumericalError("lanczos: could not extend the Krylov basis");
      beta.push_back(0.0);
      basis.push_back(std::move(v));
    } else {
      beta.push_back(b);
      basis.push_back(w / b);
    }
  }
}

SpectrumResult exact_spectrum(const PauliSum& hamiltonian, std::size_t k, ChargeSector sector) {
  const SectorMatrix m = build_sector_matrix(hamiltonian, sector);
  if (k < 1 || k > m.dim()) {
    throw InvalidArgument("exact_spectrum: k must be in [1, " + std::to_string(m.dim()) + "]");
  }
  SpectrumResult out;
  out.sector = sector;
  const std::size_t n = hamiltonian.n_qubits();
  if (m.dim() <= kDenseLimit) {
    const Eigen::MatrixXcd dense = m.dense();
    if (m.real) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense.real());
      for (std::size_t i = 0; i < k; ++i) {
        const auto c = static_cast<Eigen::Index>(i);
        Eigen::VectorXd v = es.eigenvectors().col(c);
        fix_sign(v);
        out.energies.push_back(es.eigenvalues()(c));
        out.states.push_back(embed(m, n, v.cast<cplx>()));
      }
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
      for (std::size_t i = 0; i < k; ++i) {
        const auto c = static_cast<Eigen::Index>(i);
        out.energies.push_back(es.eigenvalues()(c));
        out.states.push_back(embed(m, n, es.eigenvectors().col(c)));
      }
    }
    return out;
  }
  if (!m.real) throw InvalidArgument("exact_spectrum: large sectors need a real Hamiltonian");
  const LanczosResult lr = lanczos_lowest(
      [&m](const double* in, double* o) { m.multiply(in, o); }, m.dim(), k, 1e-11);
  for (std::size_t i = 0; i < k; ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    Eigen::VectorXd v = lr.vectors.col(c);
    fix_sign(v);
    out.energies.push_back(lr.values(c));
    out.states.push_back(embed(m, n, v.cast<cplx>()));
  }
  return out;
}

SpectrumResult deflated_excited_states(const PauliSum& hamiltonian, std::size_t k,
                                       double omega_margin, ChargeSector sector) {
  detail::require(omega_margin > 0.0 && std::isfinite(omega_margin),
                  "deflated_excited_states: omega_margin must be positive");
  const SectorMatrix m = build_sector_matrix(hamiltonian, sector);
  if (!m.real) throw InvalidArgument("deflated_excited_states: Hamiltonian must be real");
  if (k < 1 || k > m.dim()) {
    throw InvalidArgument("deflated_excited_states: k must be in [1, " + std::to_string(m.dim()) +
                          "]");
  }
  const auto dim = static_cast<Eigen::Index>(m.dim());

  // coarse spectral range from a short Lanczos run on +H and -H
  const auto low = lanczos_lowest([&m](const double* in, double* o) { m.multiply(in, o); },
                                  m.dim(), 1, 1e-4, 99);
  const auto high = lanczos_lowest(
      [&m, dim](const double* in, double* o) {
        m.multiply(in, o);
        Eigen::Map<Eigen::VectorXd>(o, dim) *= -1.0;
      },
      m.dim(), 1, 1e-4, 98);
  const double omega = (-high.values(0) - low.values(0)) + omega_margin;

  std::vector<Eigen::VectorXd> found;
  SpectrumResult out;
  out.sector = sector;
  for (std::size_t i = 0; i < k; ++i) {
    const auto op = [&](const double* in, double* o) {
      m.multiply(in, o);
      const Eigen::Map<const Eigen::VectorXd> x(in, dim);
      Eigen::Map<Eigen::VectorXd> y(o, dim);
      for (const auto& psi : found) y += omega * psi.dot(x) * psi;
    };
    const LanczosResult lr = lanczos_lowest(op, m.dim(), 1, 1e-12, 1000 + i);
    Eigen::VectorXd v = lr.vectors.col(0);
    fix_sign(v);
    Eigen::VectorXd hv(dim);
    m.multiply(v.data(), hv.data());
    out.energies.push_back(v.dot(hv));
    out.states.push_back(embed(m, hamiltonian.n_qubits(), v.cast<cplx>()));
    found.push_back(std::move(v));
  }
  // deflation yields states in energy order as long as omega is large enough
  for (std::size_t i = 1; i < k; ++i) {
    if (out.energies[i] < out.energies[i - 1] - 1e-9) {
      throw NumericalError("deflated_excited_states: deflation weight too small");
    }
  }
  return out;
}

std::vector<SpectrumRow> spectrum_observables(const std::vector<QuantumState>& states,
                                              const std::vector<double>& energies,
                                              const LatticeParams& params) {
  detail::require(states.size() == energies.size(), "spectrum_observables: size mismatch");
  params.validate();
  const PauliSum op2 = params.x > 0.0 ? momentum_squared(params) : PauliSum();
  const PauliSum cond = chiral_condensate(params);
  const PauliSum link = link_field(params, central_link(params));
  const int r = std::min<int>(2, static_cast<int>(params.n_sites / 2));
  const PauliSum efd = electric_field_density(params, r);
  const BasisPermutation sr(params.n_sites);
  std::vector<SpectrumRow> rows;
  for (std::size_t i = 0; i < states.size(); ++i) {
    SpectrumRow row;
    row.index = i;
    row.energy = energies[i];
    row.momentum_sq_over_x2 = params.x > 0.0
                                  ? expectation(states[i], op2).real() / (params.x * params.x)
                                  : std::numeric_limits<double>::quiet_NaN();
    row.sr = expectation(states[i], sr);
    try {
      row.branch = to_string(phase_classify(row.sr));
    } catch (const NumericalError&) {
      row.branch = "undetermined";
    }
    row.condensate = expectation(states[i], cond).real();
    row.central_link = expectation(states[i], link).real();
    row.efd = expectation(states[i], efd).real();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace scvqe
