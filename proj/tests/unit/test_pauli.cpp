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

#include "oracle.hpp"
#include "scvqe/error.hpp"
#include "scvqe/pauli.hpp"

namespace scvqe {
namespace {

using testing::on_qubit;
using testing::pauli_matrix;

PauliSum random_sum(std::size_t n, std::size_t terms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 3);
  std::normal_distribution<double> g;
  PauliSum s(n);
  for (std::size_t t = 0; t < terms; ++t) {
    std::map<std::size_t, Pauli> f;
    for (std::size_t q = 0; q < n; ++q) f[q] = static_cast<Pauli>(pick(rng));
    s.add_term(PauliString::from_factors(g(rng), f));
  }
  return s;
}

Eigen::MatrixXcd dense(const PauliString& p, std::size_t n) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (std::size_t q = 0; q < n; ++q) m = m * on_qubit(pauli_matrix(to_char(p.factor(q))), q, n);
  return p.coefficient() * m;
}

TEST(PauliString, ProductPhases) {
  const auto x = PauliString::single(Pauli::X, 0);
  const auto y = PauliString::single(Pauli::Y, 0);
  const auto z = PauliString::single(Pauli::Z, 0);
  const auto xy = x * y;
  EXPECT_EQ(xy.factor(0), Pauli::Z);
  EXPECT_NEAR(std::abs(xy.coefficient() - cplx(0, 1)), 0.0, 1e-15);
  const auto zx = z * x;
  EXPECT_EQ(zx.factor(0), Pauli::Y);
  EXPECT_NEAR(std::abs(zx.coefficient() - cplx(0, 1)), 0.0, 1e-15);
  EXPECT_FALSE(x.commutes_with(z));
  EXPECT_TRUE((x * PauliString::single(Pauli::X, 1)).commutes_with(z * PauliString::single(Pauli::Z, 1)));
}

TEST(PauliString, MatchesDenseMatrices) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<std::size_t, Pauli> fa, fb;
    for (std::size_t q = 0; q < 3; ++q) {
      fa[q] = static_cast<Pauli>(pick(rng));
      fb[q] = static_cast<Pauli>(pick(rng));
    }
    const auto a = PauliString::from_factors(1.0, fa);
    const auto b = PauliString::from_factors(1.0, fb);
    EXPECT_LT((dense(a * b, 3) - dense(a, 3) * dense(b, 3)).norm(), 1e-12);
  }
}

TEST(PauliSum, ToMatrixAgreesWithKroneckerProducts) {
  const PauliSum s = random_sum(4, 12, 5);
  Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(16, 16);
  for (const auto& t : s.terms()) ref += dense(t, 4);
  EXPECT_LT((s.to_matrix() - ref).norm(), 1e-12);
}

TEST(PauliSum, NormalizeMergesAndDrops) {
  PauliSum s(2);
  s.add_term(PauliString::single(Pauli::Z, 0, 1.0));
  s.add_term(PauliString::single(Pauli::Z, 0, -1.0));
  s.add_term(PauliString::single(Pauli::X, 1, 2.0));
  s.normalize();
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.terms()[0].factor(1), Pauli::X);
}

TEST(PauliSum, ProductAndCommutator) {
  const PauliSum a = random_sum(3, 5, 11);
  const PauliSum b = random_sum(3, 5, 12);
  EXPECT_LT(((a * b).to_matrix() - a.to_matrix() * b.to_matrix()).norm(), 1e-11);
  const Eigen::MatrixXcd c = a.to_matrix() * b.to_matrix() - b.to_matrix() * a.to_matrix();
  EXPECT_LT((commutator(a, b).to_matrix() - c).norm(), 1e-11);
}

TEST(PauliSum, EmbeddingAndTensor) {
  const PauliSum a = random_sum(2, 3, 21);
  const PauliSum b = random_sum(1, 2, 22);
  EXPECT_LT((a.tensor(b).to_matrix() - testing::kron(b.to_matrix(), a.to_matrix())).norm(), 1e-12);
  const PauliSum e = a.embedded(3, 1);
  EXPECT_LT((e.to_matrix() - testing::kron(a.to_matrix(), Eigen::MatrixXcd::Identity(2, 2))).norm(),
            1e-12);
}

TEST(PauliSum, TextRoundTrip) {
  const PauliSum s = random_sum(4, 6, 31);
  const PauliSum r = pauli_sum_from_text(to_text(s));
  EXPECT_LT((s.to_matrix() - r.to_matrix()).norm(), 1e-12);
  EXPECT_THROW(pauli_sum_from_text("1 0 XQ"), FormatError);
}

TEST(PauliSum, Hermiticity) {
  EXPECT_TRUE(random_sum(3, 8, 41).is_hermitian());
  PauliSum s(1);
  s.add_term(PauliString::single(Pauli::X, 0, cplx(0, 1)));
  EXPECT_FALSE(s.is_hermitian());
}

TEST(CompiledOperator, ApplyMatchesDense) {
  const PauliSum s = random_sum(6, 20, 51);
  const CompiledOperator op(s);
  const auto v = testing::random_state(6, 7);
  std::vector<cplx> out(v.size());
  op.apply(std::span<const cplx>(v.data(), v.size()), out);
  const Eigen::VectorXcd ref = s.to_matrix() * v;
  for (Eigen::Index i = 0; i < v.size(); ++i) EXPECT_LT(std::abs(out[i] - ref(i)), 1e-10);
  EXPECT_NEAR(std::abs(op.expectation(std::span<const cplx>(v.data(), v.size())) -
                       (v.adjoint() * ref)(0, 0)),
              0.0, 1e-10);
}

TEST(CompiledOperator, RealQuadraticFormMatchesComplex) {
  const PauliSum s = random_sum(5, 15, 61);
  const CompiledOperator op(s);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::vector<double> v(32);
  for (auto& a : v) a = g(rng);
  std::vector<cplx> vc(v.begin(), v.end());
  EXPECT_NEAR(op.expectation_real(v), op.expectation(vc).real(), 1e-10);
}

}  // namespace
}  // namespace scvqe
