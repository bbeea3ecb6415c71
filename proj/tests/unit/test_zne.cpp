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
#include "scvqe/zne.hpp"

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

const CvqeResult& table2_result() {
  static const CvqeResult r = [] {
    CvqeProblem p = CvqeProblem::make(table2(), {LayoutKind::brickwall_so4, 4, 1, 2, false});
    p.stages = {Stage{2000, false, 1.0}};
    return optimize(p);
  }();
  return r;
}

Circuit ground_state_circuit() {
  const auto& r = table2_result();
  return to_elementary(inference_circuit(r.layout, r.best_params, r.rotation, 0));
}

TEST(Zne, FoldingCountsAndSemantics) {
  const Circuit base = ground_state_circuit();
  EXPECT_EQ(fold_circuit(base, 1).gates.size(), base.gates.size());
  EXPECT_EQ(fold_circuit(base, 3).gates.size(), 3 * base.gates.size());
  QuantumState a(4), b(4);
  apply_circuit(a, base);
  apply_circuit(b, fold_circuit(base, 5));
  for (std::size_t i = 0; i < a.dim(); ++i) EXPECT_LT(std::abs(a[i] - b[i]), 1e-10);
  EXPECT_THROW(fold_circuit(base, 2), InvalidArgument);
  EXPECT_THROW(fold_circuit(base, 0), InvalidArgument);
}

TEST(Zne, NoiselessRunIsPure) {
  const Circuit base = ground_state_circuit();
  const DensityState rho = run_noisy(base, {0.0, 0.0}, DensityState(4));
  QuantumState s(4);
  apply_circuit(s, base);
  const Eigen::Map<const Eigen::VectorXcd> v(s.amplitudes().data(), 16);
  EXPECT_LT((rho.matrix() - v * v.adjoint()).norm(), 1e-12);
}

TEST(Zne, SingleQubitDepolarizingChannel) {
  const double p1 = 0.1;
  QuantumState s(1);
  apply_gate(s, gates::rx(0, 0.9));
  const DensityState start = DensityState::from_pure(s);
  Circuit c{1, {GateOp(Eigen::MatrixXcd::Identity(2, 2), {0}, "I")}};
  const DensityState out = run_noisy(c, {p1, 0.0}, start);
  const Eigen::MatrixXcd want = (1 - p1) * start.matrix() + p1 * 0.5 * Eigen::MatrixXcd::Identity(2, 2);
  EXPECT_LT((out.matrix() - want).norm(), 1e-14);
}

TEST(Zne, TwoQubitChannelMatchesPauliTwirl) {
  // (1 - p) rho + p Tr_T(rho) (x) I/4 equals the 16-Pauli average form.
  const auto v = testing::random_state(3, 5);
  DensityState d(3);
  d.matrix() = v * v.adjoint();
  const double p = 0.3;
  DensityState out = d;
  const std::vector<std::size_t> t{0, 2};
  out.depolarize(t, p);
  Eigen::MatrixXcd twirl = Eigen::MatrixXcd::Zero(8, 8);
  for (char a : {'I', 'X', 'Y', 'Z'}) {
    for (char b : {'I', 'X', 'Y', 'Z'}) {
      const Eigen::MatrixXcd pa = testing::on_qubit(testing::pauli_matrix(a), 0, 3) *
                                  testing::on_qubit(testing::pauli_matrix(b), 2, 3);
      twirl += pa * d.matrix() * pa.adjoint() / 16.0;
    }
  }
  EXPECT_LT((out.matrix() - ((1 - p) * d.matrix() + p * twirl)).norm(), 1e-13);
  EXPECT_NEAR(out.trace(), 1.0, 1e-12);
  EXPECT_GT(out.min_eigenvalue(), -1e-8);
}

TEST(Zne, NoisyEnergyGrowsWithFoldLevel) {
  const Circuit base = ground_state_circuit();
  LatticeParams p = table2();
  p.penalty_strength = 0.0;
  const PauliSum w = build_hamiltonian(p);
  double previous = -1e9;
  for (int level : {1, 3, 5}) {
    const DensityState rho = run_noisy(fold_circuit(base, level), {5e-4, 2e-3}, DensityState(4));
    EXPECT_NEAR(rho.trace(), 1.0, 1e-10);
    EXPECT_GT(rho.min_eigenvalue(), -1e-8);
    const double e = rho.expectation(w).real();
    EXPECT_GT(e, previous);
    previous = e;
  }
}

TEST(Zne, LinearExtrapolation) {
  const std::vector<std::pair<double, double>> flat{{1, 0.4}, {3, 0.4}, {5, 0.4}};
  EXPECT_NEAR(zne_extrapolate(flat), 0.4, 1e-14);
  const std::vector<std::pair<double, double>> line{{1, 2.3}, {3, 2.9}, {5, 3.5}};
  EXPECT_NEAR(zne_extrapolate(line), 2.0, 1e-12);
  const std::vector<std::pair<double, double>> bad{{3, 1.0}, {3, 2.0}};
  EXPECT_THROW(zne_extrapolate(bad), InvalidArgument);
}

TEST(Zne, ShotSamplingStatistics) {
  QuantumState s(1);
  apply_gate(s, gates::rx(0, 1.1));
  const DensityState rho = DensityState::from_pure(s);
  const PauliSum z = PauliSum::single(1, Pauli::Z, 0);
  const double exact = rho.expectation(z).real();
  std::mt19937_64 rng(3);
  int inside = 0;
  for (int i = 0; i < 200; ++i) {
    const Estimate e = sample_expectation(rho, z, 10000, rng);
    inside += std::abs(e.value - exact) < 3.0 * e.std_error;
  }
  EXPECT_GT(inside, 190);
  EXPECT_THROW(sample_expectation(rho, z, 0, rng), InvalidArgument);
}

TEST(Zne, NoiselessInferenceReproducesEigenstates) {
  const auto& r = table2_result();
  InferenceOptions o;
  o.noise = {0.0, 0.0};
  o.exact_expectations = true;
  const auto obs = standard_observables(table2());
  const auto free = inference_run(r.layout, r.best_params, r.rotation, obs, o);
  o.mode = InferenceMode::ancilla;
  const auto anc = inference_run(r.layout, r.best_params, r.rotation, obs, o);
  ASSERT_EQ(free.size(), anc.size());
  for (std::size_t i = 0; i < free.size(); ++i) {
    EXPECT_NEAR(free[i].intercept, anc[i].intercept, 1e-8) << free[i].name;
  }
  EXPECT_EQ(free[0].name, "energy");
  EXPECT_NEAR(free[0].intercept, 0.6872150210, 1e-4);
  EXPECT_NEAR(free[1].intercept, 1.3253490258, 1e-4);
  EXPECT_NEAR(free[0].intercept, r.energies[0], 1e-8);
}

TEST(Zne, ExtrapolationApproachesNoiselessValueAsNoiseVanishes) {
  const auto& r = table2_result();
  const auto obs = standard_observables(table2());
  InferenceOptions o;
  o.exact_expectations = true;
  double last_error = 1e9;
  for (double p : {1e-3, 1e-4}) {
    o.noise = {p / 4, p};
    const auto res = inference_run(r.layout, r.best_params, r.rotation, obs, o);
    const double err = std::abs(res[0].intercept - r.energies[0]);
    EXPECT_LT(err, last_error);
    last_error = err;
  }
  EXPECT_LT(last_error, 1e-4);
}

TEST(Zne, RejectsOversizedRegisters) {
  EXPECT_THROW(DensityState(9), InvalidArgument);
  InferenceOptions o;
  o.shots = 0;
  EXPECT_THROW(o.validate(), InvalidArgument);
}

}  // namespace
}  // namespace scvqe
