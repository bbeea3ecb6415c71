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
#include "scvqe/cvqe.hpp"
#include "scvqe/error.hpp"

namespace scvqe {
namespace {

LatticeParams table2() {
  LatticeParams p;
  p.n_sites = 4;
  p.x = 0.16;
  p.mass_lat = 0.333;
  p.bg_field = 0.5;
  p.penalty_strength = 4.0;
  return p;
}

CvqeProblem table2_problem() {
  CvqeProblem p = CvqeProblem::make(table2(), {LayoutKind::brickwall_so4, 4, 1, 2, false});
  p.stages = {Stage{2000, false, 1.0}};
  p.seeds = 11;
  return p;
}

std::vector<double> random_params(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

const CvqeResult& table2_result() {
  static const CvqeResult r = [] {
    CvqeResult res = optimize(table2_problem());
    LatticeParams p = table2();
    p.penalty_strength = 0.0;
    compare_to_reference(res, exact_spectrum(build_hamiltonian(p), 2));
    return res;
  }();
  return r;
}

TEST(Cvqe, IdentityCircuitCostIsMeanOfBasisEnergies) {
  const CvqeProblem p = table2_problem();
  const std::vector<double> zero(p.layout.parameter_count(), 0.0);
  const auto h = testing::schwinger_dense(4, 0.16, 0.333, 0.5, 4.0);
  EXPECT_NEAR(cost(p, zero), 0.5 * (h(0, 0).real() + h(1, 1).real()), 1e-12);
}

TEST(Cvqe, CostIsInvariantUnderAncillaRotations) {
  const CvqeProblem p = table2_problem();
  const auto params = random_params(p.layout.parameter_count(), 2);
  QuantumState s = prepare_purified(4, 1);
  apply_circuit(s, build_circuit(p.layout, params));
  const PauliSum h = p.hamiltonian.embedded(5);
  const double before = expectation(s, h).real();
  EXPECT_NEAR(before, cost(p, params), 1e-12);
  apply_gate(s, gates::rx(4, 0.7));
  apply_gate(s, gates::rz(4, -1.3));
  EXPECT_NEAR(expectation(s, h).real(), before, 1e-12);
}

TEST(Cvqe, AdjointGradientMatchesFiniteDifferences) {
  for (LayoutKind kind : {LayoutKind::brickwall_so4, LayoutKind::ladder_so8}) {
    CvqeProblem p = CvqeProblem::make(table2(), {kind, 4, 1, 2, false});
    const auto x = random_params(p.layout.parameter_count(), 4);
    const auto g = adjoint_gradient(p, x);
    const auto fd = gradient(p, x);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(g[i], fd[i], 1e-7 * (1.0 + std::abs(fd[i])));
    // Forward differences as a second, independent oracle.
    const double h = 1e-7, f0 = cost(p, x);
    for (std::size_t i = 0; i < x.size(); i += 7) {
      auto xp = x;
      xp[i] += h;
      const double fwd = (cost(p, xp) - f0) / h;
      EXPECT_NEAR(g[i], fwd, 1e-3 * std::max(1.0, std::abs(fwd)));
    }
  }
}

TEST(Cvqe, SymmetricGradientMatchesFiniteDifferences) {
  CvqeProblem p = CvqeProblem::make(table2(), {LayoutKind::brickwall_so4, 4, 1, 3, true});
  const auto x = random_params(p.layout.parameter_count(), 6);
  const auto g = adjoint_gradient(p, x);
  const auto fd = gradient(p, x);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(g[i], fd[i], 1e-7 * (1.0 + std::abs(fd[i])));
}

TEST(Cvqe, Table3Reconstruction) {
  const std::vector<cplx> e{1.0062822018, 0.1405063727, 4.3e-17, 0.2864640921};
  const Eigen::MatrixXcd h = reconstruct_subspace(e, 1);
  EXPECT_NEAR(h(0, 0).real(), 1.2927462939, 1e-10);
  EXPECT_NEAR(h(0, 1).real(), 0.1405063727, 1e-10);
  EXPECT_NEAR(h(1, 1).real(), 0.7198181097, 1e-10);
  const SubspaceEigen d = diagonalize_subspace(h);
  EXPECT_NEAR(d.energies[0], 0.6872150210, 2e-5);
  EXPECT_NEAR(d.energies[1], 1.3253490258, 2e-5);
}

TEST(Cvqe, IdentityCircuitGivesBasisMatrixElements) {
  const LatticeParams p = table2();
  const PauliSum h = build_hamiltonian(p);
  const QuantumState s = prepare_purified(4, 2);
  const Eigen::MatrixXcd sub = subspace_hamiltonian(s, h, 2);
  const Eigen::MatrixXcd dense = testing::schwinger_dense(4, 0.16, 0.333, 0.5, 4.0);
  for (Eigen::Index m = 0; m < 4; ++m) {
    for (Eigen::Index n = 0; n < 4; ++n) EXPECT_LT(std::abs(sub(m, n) - dense(m, n)), 1e-12);
  }
}

TEST(Cvqe, SubspaceMatchesBranchProjection) {
  const LatticeParams p = table2();
  const PauliSum h = build_hamiltonian(p);
  const CircuitLayout layout{LayoutKind::brickwall_so4, 4, 2, 3, false};
  QuantumState s = prepare_purified(4, 2);
  apply_circuit(s, build_circuit(layout, random_params(layout.parameter_count(), 8)));
  const Eigen::MatrixXcd sub = subspace_hamiltonian(s, h, 2);
  const auto branches = branch_states(s, 2);
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t n = 0; n < 4; ++n) {
      // H_mn = <psi_m|H|psi_n>
      const cplx direct = inner_product(branches[m], apply_operator(branches[n], h));
      EXPECT_LT(std::abs(sub(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) - direct), 1e-10);
    }
  }
}

TEST(Cvqe, Table2OptimizationReachesEigenstates) {
  const CvqeResult& r = table2_result();
  ASSERT_EQ(r.diagnostics.size(), 2u);
  for (const auto& d : r.diagnostics) {
    EXPECT_GT(d.fidelity, 0.9999);
    EXPECT_NEAR(d.energy, d.exact_energy, 1e-4);
    EXPECT_LT(std::abs(d.total_charge), 1e-4);
  }
  EXPECT_NEAR(r.final_cost, 0.5 * (0.6872150210 + 1.3253490258), 1e-4);
  EXPECT_LT(std::abs(inner_product(r.eigen_states[0], r.eigen_states[1])), 1e-6);
  const auto g = adjoint_gradient(table2_problem(), r.best_params);
  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v));
  EXPECT_LT(gmax, 1e-4);
}

TEST(Cvqe, InferenceCircuitPreparesRotatedStates) {
  const CvqeResult& r = table2_result();
  for (std::size_t j = 0; j < 2; ++j) {
    QuantumState s(4);
    apply_circuit(s, inference_circuit(r.layout, r.best_params, r.rotation, j));
    EXPECT_GT(fidelity(s, r.eigen_states[j]), 1.0 - 1e-10);
  }
}

TEST(Cvqe, RotationWithIdentityKeepsBranches) {
  const LatticeParams p = table2();
  const PauliSum h = build_hamiltonian(p);
  const CircuitLayout layout{LayoutKind::brickwall_so4, 4, 1, 1, false};
  QuantumState s = prepare_purified(4, 1);
  apply_circuit(s, build_circuit(layout, random_params(layout.parameter_count(), 12)));
  const RotatedStates rs = rotate_to_eigenstates(s, Eigen::MatrixXcd::Identity(2, 2), h);
  const auto branches = branch_states(s, 1);
  for (std::size_t j = 0; j < 2; ++j) EXPECT_GT(fidelity(rs.states[j], branches[j]), 1.0 - 1e-12);
}

TEST(Cvqe, DeterministicAcrossThreadCounts) {
  CvqeProblem p = table2_problem();
  p.seeds = 4;
  p.stages = {Stage{200, true, 0.5}, Stage{200, false, 1.0}};
  p.threads = 1;
  const CvqeResult a = optimize(p);
  p.threads = 4;
  const CvqeResult b = optimize(p);
  EXPECT_EQ(a.best_params, b.best_params);
  EXPECT_EQ(a.best_seed, b.best_seed);
  EXPECT_EQ(a.cost_trace, b.cost_trace);
}

TEST(Cvqe, ValidatesProblem) {
  CvqeProblem p = table2_problem();
  p.seeds = 0;
  EXPECT_THROW(optimize(p), InvalidArgument);
  p = table2_problem();
  p.layout.n_physical = 6;
  EXPECT_THROW(optimize(p), InvalidArgument);
  p = table2_problem();
  EXPECT_THROW(cost(p, std::vector<double>(3, 0.0)), InvalidArgument);
}

}  // namespace
}  // namespace scvqe
