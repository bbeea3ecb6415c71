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

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scvqe {

/// f(x), writing the gradient into `grad`.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
  int max_iterations = 1000;
  int memory = 10;
  /// Stop once max |grad_i| falls below this.
  double gradient_tolerance = 1e-6;
  /// Stop as soon as f reaches this value.
  double f_target = -std::numeric_limits<double>::infinity();
  int max_line_search = 30;
  double c1 = 1e-4;
  double c2 = 0.9;
};

enum class LbfgsStatus { converged, target_reached, max_iterations, line_search_failed, nonfinite };
std::string to_string(LbfgsStatus status);

struct LbfgsResult {
  std::vector<double> x;
  double f = 0.0;
  std::vector<double> gradient;
  int iterations = 0;
  int evaluations = 0;
  LbfgsStatus status = LbfgsStatus::max_iterations;
  /// (iteration, f) after every accepted step, starting with iteration 0.
  std::vector<std::pair<int, double>> trace;
};

/// Limited-memory BFGS with a strong-Wolfe bracketing line search. The best
/// point seen is returned even when the search stalls.
LbfgsResult lbfgs_minimize(const Objective& objective, std::vector<double> x0,
                           const LbfgsOptions& options = {});

}  // namespace scvqe
