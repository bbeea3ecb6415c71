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
#include <numbers>

#include "oracle.hpp"
#include "scvqe/ansatz.hpp"
#include "scvqe/error.hpp"

namespace scvqe {
namespace {

std::vector<double> random_entries(std::size_t n, std::uint64_t seed, double scale = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

Eigen::Matrix4cd gate_product(const std::vector<GateOp>& gates) {
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
  for (int col = 0; col < 4; ++col) {
    QuantumState s = QuantumState::basis(2, static_cast<std::uint64_t>(col));
    for (const auto& g : gates) apply_gate(s, g);
    for (int row = 0; row < 4; ++row) u(row, col) = s[static_cast<std::size_t>(row)];
  }
  return u;
}

TEST(SoGate, ZeroEntriesGiveIdentity) {
  EXPECT_LT((so_matrix({4, std::vector<double>(6, 0.0)}) - Eigen::Matrix4d::Identity()).norm(), 1e-15);
  EXPECT_LT((so_matrix({8, std::vector<double>(28, 0.0)}) - Eigen::MatrixXd::Identity(8, 8)).norm(),
            1e-15);
}

TEST(SoGate, SingleGeneratorIsGivensRotation) {
  std::vector<double> e(6, 0.0);
  e[0] = std::numbers::pi / 2;
  const Eigen::MatrixXd u = so_matrix({4, e});
  // exp(theta (E01 - E10)) maps e0 to -e1 at theta = pi/2.
  EXPECT_NEAR(u(1, 0), -1.0, 1e-12);
  EXPECT_NEAR(u(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(u(2, 2), 1.0, 1e-12);
}

TEST(SoGate, OrthogonalWithUnitDeterminant) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int dim = seed % 2 ? 8 : 4;
    const auto u = so_matrix({dim, random_entries(SoGateParams::entry_count(dim), seed, 3.0)});
    EXPECT_LT((u * u.transpose() - Eigen::MatrixXd::Identity(dim, dim)).norm(), 1e-10);
    EXPECT_NEAR(u.determinant(), 1.0, 1e-10);
  }
}

TEST(SoGate, PullbackMatchesFiniteDifferences) {
  for (int dim : {4, 8}) {
    const auto n = SoGateParams::entry_count(dim);
    const auto e = random_entries(n, 17 + static_cast<std::uint64_t>(dim));
    const Eigen::MatrixXd m = Eigen::MatrixXd::Random(dim, dim);
    std::vector<double> grad(n, 0.0);
    SoExponential(dim, e).pullback(m, grad);
    const double h = 1e-6;
    for (std::size_t i = 0; i < n; ++i) {
      auto ep = e, em = e;
      ep[i] += h;
      em[i] -= h;
      const double fd = ((so_matrix({dim, ep}) - so_matrix({dim, em})).cwiseProduct(m)).sum() / (2 * h);
      EXPECT_NEAR(grad[i], fd, 1e-7);
    }
  }
}

TEST(Layout, GateAndParameterCounts) {
  CircuitLayout b{LayoutKind::brickwall_so4, 8, 0, 1, false};
  EXPECT_EQ(b.gate_count(), 7u);
  EXPECT_EQ(b.parameter_count(), 42u);
  EXPECT_EQ(b.gate_origins(), (std::vector<std::size_t>{0, 2, 4, 6, 1, 3, 5}));
  CircuitLayout l{LayoutKind::ladder_so4, 20, 0, 8, true};
  EXPECT_EQ(l.parameter_count(), 48u);
  CircuitLayout s{LayoutKind::ladder_so8, 16, 0, 8, false};
  EXPECT_EQ(s.gates_per_layer(), 14u);
  EXPECT_EQ(s.parameter_count(), 14u * 8u * 28u);
  EXPECT_THROW((CircuitLayout{LayoutKind::ladder_so8, 2, 0, 1, false}.validate()), InvalidArgument);
}

TEST(Layout, SymmetricExpansionReproducesCircuit) {
  CircuitLayout sym{LayoutKind::brickwall_so4, 6, 1, 3, true};
  const auto p = random_entries(sym.parameter_count(), 5);
  const auto full = expand_symmetric(sym, p);
  const CircuitLayout free = sym.with_symmetry(false);
  ASSERT_EQ(full.size(), free.parameter_count());
  QuantumState a = prepare_purified(6, 1), b = a;
  apply_circuit(a, build_circuit(sym, p));
  apply_circuit(b, build_circuit(free, full));
  EXPECT_NEAR(fidelity(a, b), 1.0, 1e-12);
}

TEST(Purification, InitialStates) {
  const QuantumState s = prepare_purified(4, 1);
  EXPECT_NEAR(std::abs(s[0]), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(std::abs(s[0b10001]), 1.0 / std::numbers::sqrt2, 1e-15);
  const QuantumState z = prepare_purified(4, 0);
  EXPECT_EQ(z[0], cplx(1.0));
  // n_ancilla = 3: maximally mixed ancilla marginal, entropy 3 ln 2.
  const QuantumState t = prepare_purified(8, 3);
  Eigen::Matrix<cplx, 8, 8> rho = Eigen::Matrix<cplx, 8, 8>::Zero();
  for (std::size_t i = 0; i < t.dim(); ++i) {
    for (std::size_t j = 0; j < t.dim(); ++j) {
      if ((i & 0xFF) == (j & 0xFF)) rho(static_cast<int>(i >> 8), static_cast<int>(j >> 8)) += t[i] * std::conj(t[j]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cplx, 8, 8>> es(rho);
  double entropy = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double w = es.eigenvalues()(i);
    if (w > 1e-15) entropy -= w * std::log(w);
  }
  EXPECT_NEAR(entropy, 3.0 * std::log(2.0), 1e-12);
}

TEST(Decompose, So4RoundTrip) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Eigen::Matrix4d u = so_matrix({4, random_entries(6, seed, 3.0)});
    const auto gates = decompose_so4(u, {0, 1});
    std::size_t cnots = 0;
    for (const auto& g : gates) cnots += g.label() == "CNOT";
    ASSERT_EQ(cnots, 2u);
    const Eigen::Matrix4cd ref = gate_product({GateOp(u.cast<cplx>(), {0, 1}, "SO4")});
    const Eigen::Matrix4cd w = gate_product(gates);
    const cplx overlap = (ref.adjoint() * w).trace();
    const cplx phase = overlap / std::abs(overlap);
    EXPECT_LT((w - phase * ref).cwiseAbs().maxCoeff(), 1e-8) << "seed " << seed;
  }
}

TEST(Decompose, So4IdentityHasTrivialRotations) {
  const auto gates = decompose_so4(Eigen::Matrix4d::Identity(), {0, 1});
  const Eigen::Matrix4cd w = gate_product(gates);
  EXPECT_NEAR(std::abs(w.trace()) / 4.0, 1.0, 1e-12);
}

TEST(Decompose, So8LadderRoundTrip) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::vector<SoGateParams> ladder;
    for (int k = 0; k < 8; ++k) ladder.push_back({4, random_entries(6, 100 * seed + static_cast<std::uint64_t>(k))});
    const Eigen::MatrixXd target = so4_ladder_matrix(ladder);
    const So8Decomposition d = decompose_so8(target);
    EXPECT_TRUE(d.below_threshold) << "seed " << seed << " distance " << d.distance;
    EXPECT_LE(d.layers, 4u);
    EXPECT_LT((so4_ladder_matrix(d.gates) - target).squaredNorm(), 1e-10);
  }
  const So8Decomposition id = decompose_so8(Eigen::MatrixXd::Identity(8, 8));
  EXPECT_LT(id.distance, 1e-20);
}

TEST(Decompose, ElementaryCircuitPreservesState) {
  const CircuitLayout layout{LayoutKind::brickwall_so4, 4, 1, 2, false};
  const auto p = random_entries(layout.parameter_count(), 3);
  Circuit c = purification_circuit(4, 1);
  c.append(build_circuit(layout, p));
  const Circuit e = to_elementary(c);
  QuantumState a(5), b(5);
  apply_circuit(a, c);
  apply_circuit(b, e);
  EXPECT_NEAR(fidelity(a, b), 1.0, 1e-10);
  EXPECT_EQ(e.count("CNOT"), 1u + 2u * layout.gate_count());
}

}  // namespace
}  // namespace scvqe
