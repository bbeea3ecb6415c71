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
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "scvqe/ansatz.hpp"
#include "scvqe/cvqe.hpp"
#include "scvqe/model.hpp"

namespace scvqe {

/// Second-order estimate of the Schwinger boson mass M_S/g.
double boson_mass_perturbative(double m_over_g, double theta);

/// 1/sqrt(pi), the free boson mass.
double free_boson_mass();

enum class BackendKind { exact, cvqe };
std::string to_string(BackendKind kind);
BackendKind backend_kind_from_string(const std::string& name);

/// How energies are obtained. The cvqe backend runs a full optimization
/// per evaluation with the given circuit settings; n_ancilla must be >= 1.
struct GapBackend {
  BackendKind kind = BackendKind::exact;
  CircuitLayout layout;
  std::vector<Stage> stages{Stage{}};
  int seeds = 3;
  std::uint64_t rng_seed = 1;
  double init_scale = 0.1;
  std::size_t threads = 1;
};

/// Delta / (2 sqrt(x)) with Delta = E_1 - E_0 in the zero-charge sector.
double lattice_gap(const LatticeParams& params, const GapBackend& backend = {});

/// F_av(r) on the zero-charge ground state.
double ground_state_efd(const LatticeParams& params, int r, const GapBackend& backend = {});

enum class MassShiftMethod { gap, efd };
std::string to_string(MassShiftMethod m);
MassShiftMethod mass_shift_method_from_string(const std::string& name);

struct MassShiftRequest {
  LatticeParams params;  // mass_lat is overwritten during the search
  MassShiftMethod method = MassShiftMethod::gap;
  int efd_r = 2;
  double bracket_lo = -0.16;
  double bracket_hi = 0.0;
  double tolerance = 1e-8;
  GapBackend backend;
};

struct BisectionStep {
  int iteration = 0;
  double mass = 0.0;
  double objective = 0.0;
};

struct MassShiftResult {
  double mass_shift = 0.0;  // m_s/g = -root
  double root = 0.0;
  double interval = 0.0;  // final bracket length
  double root_objective = 0.0;  // objective evaluated at the root
  int iterations = 0;
  std::vector<BisectionStep> trace;
};

/// Bisection on a sign-changing objective. Throws NumericalError when the
/// bracket does not straddle a root.
MassShiftResult bisect(const std::function<double(double)>& objective, double lo, double hi,
                       double tolerance = 1e-8);

/// Gap method: Delta/(2 sqrt x) - 1/sqrt(pi); EFD method: F_av.
double mass_shift_objective(const MassShiftRequest& request, double mass_lat);

MassShiftResult mass_shift(const MassShiftRequest& request);

enum class FitModel { linear, cubic_poly };
std::string to_string(FitModel m);

struct FitResult {
  std::vector<double> coefficients;  // ascending powers
  double intercept = 0.0;
  double residual_norm = 0.0;
  double r_squared = 0.0;
};

/// Least-squares polynomial fit.
FitResult extrapolate(const std::vector<std::pair<double, double>>& points, FitModel model);

}  // namespace scvqe
