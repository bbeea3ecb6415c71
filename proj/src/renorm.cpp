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

#include "scvqe/renorm.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "scvqe/error.hpp"
#include "scvqe/reference.hpp"

namespace scvqe {
namespace {

constexpr double kEulerGamma = 0.5772156649;

struct LowStates {
  std::vector<double> energies;
  std::vector<QuantumState> states;
};

LowStates low_states(const LatticeParams& params, const GapBackend& backend) {
  params.validate();
  if (backend.kind == BackendKind::exact) {
    LatticeParams p = params;
    p.penalty_strength = 0.0;
    SpectrumResult s = exact_spectrum(build_hamiltonian(p), 2);
    return {std::move(s.energies), std::move(s.states)};
  }
  detail::require(backend.layout.n_ancilla >= 1, "cvqe backend needs at least one ancilla");
  CircuitLayout layout = backend.layout;
  layout.n_physical = params.n_sites;
  CvqeProblem problem = CvqeProblem::make(params, layout);
  problem.stages = backend.stages;
  problem.seeds = backend.seeds;
  problem.rng_seed = backend.rng_seed;
  problem.init_scale = backend.init_scale;
  problem.threads = backend.threads;
  CvqeResult r = optimize(problem);
  return {std::move(r.energies), std::move(r.eigen_states)};
}

}  // namespace

double free_boson_mass() { return 1.0 / std::sqrt(std::numbers::pi); }

double boson_mass_perturbative(double m_over_g, double theta) {
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const double eg = std::exp(kEulerGamma);
  const double radicand =
      1.0 + 2.0 * sqrt_pi * eg * m_over_g * std::cos(theta) +
      std::numbers::pi * eg * eg * m_over_g * m_over_g * (-0.6599 * std::cos(2.0 * theta) + 1.7277);
  // The quadratic has no real roots, so only non-finite input fails here.
  if (!(radicand >= 0.0)) throw NumericalError("boson_mass_perturbative: non-finite input");
  return std::sqrt(radicand) / sqrt_pi;
}

std::string to_string(BackendKind kind) { return kind == BackendKind::exact ? "exact" : "cvqe"; }

BackendKind backend_kind_from_string(const std::string& name) {
  if (name == "exact") return BackendKind::exact;
  if (name == "cvqe") return BackendKind::cvqe;
  throw InvalidArgument("unknown backend '" + name + "' (expected exact or cvqe)");
}

double lattice_gap(const LatticeParams& params, const GapBackend& backend) {
  detail::require(params.x > 0.0, "lattice_gap: x must be positive");
  const LowStates s = low_states(params, backend);
  return (s.energies[1] - s.energies[0]) / (2.0 * std::sqrt(params.x));
}

double ground_state_efd(const LatticeParams& params, int r, const GapBackend& backend) {
  const PauliSum f = electric_field_density(params, r);
  const LowStates s = low_states(params, backend);
  return expectation(s.states[0], f).real();
}

std::string to_string(MassShiftMethod m) { return m == MassShiftMethod::gap ? "gap" : "efd"; }

MassShiftMethod mass_shift_method_from_string(const std::string& name) {
  if (name == "gap") return MassShiftMethod::gap;
  if (name == "efd") return MassShiftMethod::efd;
  throw InvalidArgument("unknown mass-shift method '" + name + "' (expected gap or efd)");
}

MassShiftResult bisect(const std::function<double(double)>& objective, double lo, double hi,
                       double tolerance) {
  detail::require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
                  "bisect: need a finite bracket with lo < hi");
  detail::require(tolerance > 0.0, "bisect: tolerance must be positive");
  MassShiftResult r;
  double f_lo = objective(lo);
  double f_hi = objective(hi);
  r.trace.push_back({0, lo, f_lo});
  r.trace.push_back({0, hi, f_hi});
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi)) {
    throw NumericalError("bisect: objective is not finite at the bracket ends");
  }
  if (f_lo == 0.0 || f_hi == 0.0) {
    r.root = f_lo == 0.0 ? lo : hi;
    r.mass_shift = -r.root;
    return r;  // root_objective is already 0
  }
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw NumericalError("bisect: objective has the same sign at both ends (" +
                         std::to_string(f_lo) + ", " + std::to_string(f_hi) + ")");
  }
  while (hi - lo >= tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = objective(mid);
    ++r.iterations;
    r.trace.push_back({r.iterations, mid, f_mid});
    if (!std::isfinite(f_mid)) throw NumericalError("bisect: objective is not finite");
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  r.root = 0.5 * (lo + hi);
  r.interval = hi - lo;
  r.mass_shift = -r.root;
  r.root_objective = objective(r.root);
  return r;
}

double mass_shift_objective(const MassShiftRequest& request, double mass_lat) {
  LatticeParams p = request.params;
  p.mass_lat = mass_lat;
  if (request.method == MassShiftMethod::gap) {
    return lattice_gap(p, request.backend) - free_boson_mass();
  }
  return ground_state_efd(p, request.efd_r, request.backend);
}

MassShiftResult mass_shift(const MassShiftRequest& request) {
  request.params.validate();
  detail::require(request.params.x > 0.0, "mass_shift: x must be positive");
  if (request.method == MassShiftMethod::efd) {
    detail::require(request.efd_r >= 1 && 2 * request.efd_r <= static_cast<int>(request.params.n_sites),
                    "mass_shift: efd r must be in [1, N/2]");
  }
  return bisect([&](double m) { return mass_shift_objective(request, m); }, request.bracket_lo,
                request.bracket_hi, request.tolerance);
}

std::string to_string(FitModel m) { return m == FitModel::linear ? "linear" : "cubic_poly"; }

FitResult extrapolate(const std::vector<std::pair<double, double>>& points, FitModel model) {
  const int degree = model == FitModel::linear ? 1 : 3;
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n < degree + 1) {
    throw InvalidArgument("extrapolate: need at least " + std::to_string(degree + 1) + " points");
  }
  Eigen::MatrixXd a(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& [x, y] = points[static_cast<std::size_t>(i)];
    detail::require(std::isfinite(x) && std::isfinite(y), "extrapolate: points must be finite");
    double p = 1.0;
    for (int d = 0; d <= degree; ++d) {
      a(i, d) = p;
      p *= x;
    }
    b(i) = y;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-12);
  if (qr.rank() < degree + 1) throw NumericalError("extrapolate: rank-deficient design matrix");
  const Eigen::VectorXd c = qr.solve(b);
  FitResult r;
  r.coefficients.assign(c.data(), c.data() + c.size());
  r.intercept = c(0);
  const Eigen::VectorXd res = a * c - b;
  r.residual_norm = res.norm();
  const double ss_tot = (b.array() - b.mean()).square().sum();
  r.r_squared = ss_tot > 0.0 ? 1.0 - res.squaredNorm() / ss_tot : 1.0;
  return r;
}

}  // namespace scvqe
