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

#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "scvqe/error.hpp"
#include "scvqe/model.hpp"
#include "scvqe/reference.hpp"

namespace scvqe {
namespace {

LatticeParams lattice(std::size_t n, double x, double m, double l, double lambda = 0.0) {
  LatticeParams p;
  p.n_sites = n;
  p.x = x;
  p.mass_lat = m;
  p.bg_field = l;
  p.penalty_strength = lambda;
  return p;
}

double state_fidelity(const QuantumState& a, const Eigen::VectorXcd& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b(static_cast<Eigen::Index>(i));
  return std::norm(s);
}

TEST(Reference, MatchesDenseOracle) {
  for (auto p : {lattice(4, 0.16, 0.333, 0.5), lattice(6, 0.64, 0.125, 0.125, 2.0),
                 lattice(8, 0.64, 0.125, 0.0, 8.0)}) {
    const auto ref = testing::zero_sector_spectrum(
        testing::schwinger_dense(p.n_sites, p.x, p.mass_lat, p.bg_field, p.penalty_strength),
        p.n_sites, 3);
    const SpectrumResult s = exact_spectrum(build_hamiltonian(p), 3);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(s.energies[i], ref.energies[i], 1e-10);
      EXPECT_NEAR(state_fidelity(s.states[i], ref.states[i]), 1.0, 1e-9);
    }
  }
}

TEST(Reference, Table2Energies) {
  const SpectrumResult s = exact_spectrum(build_hamiltonian(lattice(4, 0.16, 0.333, 0.5)), 2);
  EXPECT_NEAR(s.energies[0], 0.6872150210, 1e-9);
  EXPECT_NEAR(s.energies[1], 1.3253490258, 1e-9);
}

TEST(Reference, StaticLimitIsDiagonal) {
  const LatticeParams p = lattice(6, 0.0, 0.3, 0.2);
  const PauliSum h = build_hamiltonian(p);
  std::vector<double> diag;
  for (auto b : sector_basis(6, ChargeSector::zero)) {
    diag.push_back(expectation(QuantumState::basis(6, b), h).real());
  }
  std::sort(diag.begin(), diag.end());
  const SpectrumResult s = exact_spectrum(h, 4);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.energies[i], diag[i], 1e-12);
}

TEST(Reference, PenaltyLeavesZeroSectorUnchanged) {
  const SpectrumResult a = exact_spectrum(build_hamiltonian(lattice(6, 0.64, 0.125, 0.0)), 4);
  for (double lambda : {1.0, 8.0, 6.0}) {
    const SpectrumResult b = exact_spectrum(build_hamiltonian(lattice(6, 0.64, 0.125, 0.0, lambda)), 4);
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(a.energies[i], b.energies[i], 1e-10);
      EXPECT_NEAR(fidelity(a.states[i], b.states[i]), 1.0, 1e-10);
    }
  }
}

TEST(Reference, LanczosPathMatchesDense) {
  // N = 14 has 3432 zero-sector states, beyond the dense cutoff.
  const LatticeParams p = lattice(14, 1.0, 0.1, 0.0);
  const PauliSum h = build_hamiltonian(p);
  const SpectrumResult s = exact_spectrum(h, 2);
  for (int i = 0; i < 2; ++i) {
    EXPECT_LT(variance(s.states[i], h), 1e-9);
    EXPECT_NEAR(expectation(s.states[i], h).real(), s.energies[i], 1e-9);
  }
  EXPECT_LT(std::abs(inner_product(s.states[0], s.states[1])), 1e-8);
  // The all-sector ground state is below or equal to the zero-sector one.
  const SpectrumResult all = exact_spectrum(build_hamiltonian(lattice(8, 1.0, 0.1, 0.0)), 1,
                                            ChargeSector::all);
  const SpectrumResult zero = exact_spectrum(build_hamiltonian(lattice(8, 1.0, 0.1, 0.0)), 1);
  EXPECT_LE(all.energies[0], zero.energies[0] + 1e-12);
}

TEST(Reference, DeflationAgreesWithDirectSolve) {
  const PauliSum h = build_hamiltonian(lattice(8, 0.64, 0.125, 0.0));
  const SpectrumResult a = exact_spectrum(h, 4);
  const SpectrumResult b = deflated_excited_states(h, 4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(a.energies[i], b.energies[i], 1e-8);
    EXPECT_GT(fidelity(a.states[i], b.states[i]), 1.0 - 1e-8);
    for (int j = 0; j < i; ++j) EXPECT_LT(std::abs(inner_product(b.states[i], b.states[j])), 1e-8);
  }
  const SpectrumResult one = deflated_excited_states(h, 1);
  EXPECT_NEAR(one.energies[0], a.energies[0], 1e-8);
}

TEST(Reference, SpectrumRowsCarryObservables) {
  const LatticeParams p = lattice(4, 0.16, 0.333, 0.5);
  const SpectrumResult s = exact_spectrum(build_hamiltonian(p), 2);
  const auto rows = spectrum_observables(s.states, s.energies, p);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0].momentum_sq_over_x2, 0.1335730366, 1e-9);
  EXPECT_NEAR(rows[1].central_link, -0.4331160521, 1e-9);
  EXPECT_NEAR(rows[1].condensate, -0.0131974491, 1e-9);
}

TEST(Reference, RejectsBadRequests) {
  const PauliSum h = build_hamiltonian(lattice(4, 0.16, 0.333, 0.5));
  EXPECT_THROW(exact_spectrum(h, 0), InvalidArgument);
  EXPECT_THROW(exact_spectrum(h, 7), InvalidArgument);
}

}  // namespace
}  // namespace scvqe
