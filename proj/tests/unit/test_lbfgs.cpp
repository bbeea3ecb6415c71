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

#include "scvqe/lbfgs.hpp"

namespace scvqe {
namespace {

double rosenbrock(std::span<const double> x, std::span<double> g) {
  double f = 0.0;
  std::fill(g.begin(), g.end(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    f += 100.0 * a * a + b * b;
    g[i] += -400.0 * a * x[i] - 2.0 * b;
    g[i + 1] += 200.0 * a;
  }
  return f;
}

TEST(Lbfgs, SolvesRosenbrock) {
  LbfgsOptions o;
  o.max_iterations = 2000;
  o.gradient_tolerance = 1e-8;
  const auto r = lbfgs_minimize(rosenbrock, std::vector<double>(10, -1.2), o);
  EXPECT_EQ(r.status, LbfgsStatus::converged);
  for (double v : r.x) EXPECT_NEAR(v, 1.0, 1e-6);
  EXPECT_LT(r.f, 1e-12);
}

TEST(Lbfgs, IllConditionedQuadratic) {
  const std::vector<double> d{1.0, 10.0, 100.0, 1000.0, 1e4};
  auto f = [&](std::span<const double> x, std::span<double> g) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s += 0.5 * d[i] * (x[i] - 1.0) * (x[i] - 1.0);
      g[i] = d[i] * (x[i] - 1.0);
    }
    return s;
  };
  LbfgsOptions o;
  o.gradient_tolerance = 1e-10;
  const auto r = lbfgs_minimize(f, std::vector<double>(5, 0.0), o);
  EXPECT_EQ(r.status, LbfgsStatus::converged);
  for (double v : r.x) EXPECT_NEAR(v, 1.0, 1e-10);
}

TEST(Lbfgs, StopsAtTargetAndIterationCap) {
  LbfgsOptions o;
  o.f_target = 1.0;
  auto r = lbfgs_minimize(rosenbrock, std::vector<double>(4, -1.2), o);
  EXPECT_EQ(r.status, LbfgsStatus::target_reached);
  EXPECT_LE(r.f, 1.0);
  o = {};
  o.max_iterations = 3;
  r = lbfgs_minimize(rosenbrock, std::vector<double>(4, -1.2), o);
  EXPECT_EQ(r.status, LbfgsStatus::max_iterations);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_EQ(r.trace.front().first, 0);
}

TEST(Lbfgs, TraceIsMonotone) {
  const auto r = lbfgs_minimize(rosenbrock, std::vector<double>(6, 0.5));
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i].second, r.trace[i - 1].second);
}

TEST(Lbfgs, ReportsNonFiniteObjective) {
  auto f = [](std::span<const double>, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    return std::nan("");
  };
  EXPECT_EQ(lbfgs_minimize(f, {1.0}).status, LbfgsStatus::nonfinite);
}

}  // namespace
}  // namespace scvqe
