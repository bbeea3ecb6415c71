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

#include "scvqe/zne.hpp"

#include <algorithm>
#include <cmath>

#include "scvqe/cvqe.hpp"
#include "scvqe/error.hpp"

namespace scvqe {

DensityState::DensityState(std::size_t n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits == 0 || n_qubits > kMaxDensityQubits) {
    throw InvalidArgument("DensityState: qubit count must be in [1, " +
                          std::to_string(kMaxDensityQubits) + "]");
  }
  const auto dim = Eigen::Index{1} << n_qubits;
  rho_ = Eigen::MatrixXcd::Zero(dim, dim);
  rho_(0, 0) = 1.0;
}

DensityState DensityState::from_pure(const QuantumState& state) {
  DensityState d(state.n_qubits());
  const auto a = state.amplitudes();
  const Eigen::Map<const Eigen::VectorXcd> v(a.data(), static_cast<Eigen::Index>(a.size()));
  d.rho_ = v * v.adjoint();
  return d;
}

double DensityState::trace() const { return rho_.trace().real(); }

double DensityState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void DensityState::apply_unitary(const GateOp& gate) {
  // Column-major storage puts rho(r, c) at r | c << n, so the row index is
  // the low register and the column index the high one.
  const auto& t = gate.targets();
  for (std::size_t q : t) {
    if (q >= n_qubits_) throw InvalidArgument("DensityState: gate target out of range");
  }
  std::span<cplx> flat(rho_.data(), static_cast<std::size_t>(rho_.size()));
  apply_matrix(flat, gate.matrix(), t);
  std::vector<std::size_t> cols(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) cols[i] = t[i] + n_qubits_;
  apply_matrix(flat, gate.matrix().conjugate(), cols);
}

void DensityState::depolarize(std::span<const std::size_t> targets, double p) {
  if (p == 0.0) return;
  std::uint64_t mask = 0;
  for (std::size_t q : targets) mask |= std::uint64_t{1} << q;
  const double share = p / static_cast<double>(std::uint64_t{1} << targets.size());
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  const Eigen::MatrixXcd old = rho_;
  rho_ *= (1.0 - p);
  for (std::uint64_t rb = 0; rb < dim; ++rb) {
    if (rb & mask) continue;
    for (std::uint64_t cb = 0; cb < dim; ++cb) {
      if (cb & mask) continue;
      cplx s = 0.0;
      std::uint64_t t = 0;
      do {
        s += old(static_cast<Eigen::Index>(rb | t), static_cast<Eigen::Index>(cb | t));
        t = (t - mask) & mask;
      } while (t != 0);
      s *= share;
      do {
        rho_(static_cast<Eigen::Index>(rb | t), static_cast<Eigen::Index>(cb | t)) += s;
        t = (t - mask) & mask;
      } while (t != 0);
    }
  }
}

cplx DensityState::expectation(const PauliString& term) const {
  // Tr(rho P) = sum_b phase(b) rho(b ^ x, b) with P|b> = phase(b)|b ^ x>.
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  cplx s = 0.0;
  for (std::uint64_t b = 0; b < dim; ++b) {
    const auto [phase, image] = term.apply_to_basis(b);
    s += phase * rho_(static_cast<Eigen::Index>(image), static_cast<Eigen::Index>(b));
  }
  return s;
}

cplx DensityState::expectation(const PauliSum& op) const {
  detail::require(op.n_qubits() == n_qubits_, "DensityState: operator size mismatch");
  cplx s = 0.0;
  for (const PauliString& t : op.terms()) s += expectation(t);
  return s;
}

void NoiseModel::validate() const {
  detail::require(p1 >= 0.0 && p1 < 1.0, "noise p1 must be in [0, 1)");
  detail::require(p2 >= 0.0 && p2 < 1.0, "noise p2 must be in [0, 1)");
}

Circuit fold_circuit(const Circuit& circuit, int level) {
  if (level < 1 || level % 2 == 0) {
    throw InvalidArgument("fold_circuit: level must be an odd positive integer");
  }
  Circuit out = circuit;
  const Circuit inverse = circuit.adjoint();
  for (int i = 0; i < (level - 1) / 2; ++i) {
    out.append(inverse);
    out.append(circuit);
  }
  return out;
}

DensityState run_noisy(const Circuit& circuit, const NoiseModel& noise, DensityState initial) {
  noise.validate();
  detail::require(circuit.n_qubits == initial.n_qubits(), "run_noisy: register size mismatch");
  for (const GateOp& g : circuit.gates) {
    initial.apply_unitary(g);
    initial.depolarize(g.targets(), g.arity() == 1 ? noise.p1 : noise.p2);
  }
  return initial;
}

Estimate sample_expectation(const DensityState& rho, const PauliSum& op, std::uint64_t shots,
                            std::mt19937_64& rng) {
  detail::require(shots >= 1, "sample_expectation: shots must be >= 1");
  Estimate e;
  double var = 0.0;
  for (const PauliString& t : op.terms()) {
    const double c = t.coefficient().real();
    if (t.is_identity()) {
      e.value += c;
      continue;
    }
    PauliString unit = t;
    unit.set_coefficient(1.0);
    const double mean = std::clamp(rho.expectation(unit).real(), -1.0, 1.0);
    std::binomial_distribution<std::uint64_t> draw(shots, 0.5 * (1.0 + mean));
    const double est = 2.0 * static_cast<double>(draw(rng)) / static_cast<double>(shots) - 1.0;
    e.value += c * est;
    var += c * c * (1.0 - est * est) / static_cast<double>(shots);
  }
  e.std_error = std::sqrt(var);
  return e;
}

LineFit zne_fit(std::span<const std::pair<double, double>> pts) {
  detail::require(pts.size() >= 2, "zne_extrapolate: need at least two points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 1e-300)) throw InvalidArgument("zne_extrapolate: levels must not all coincide");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

double zne_extrapolate(std::span<const std::pair<double, double>> pts) {
  return zne_fit(pts).intercept;
}

std::string to_string(InferenceMode mode) {
  return mode == InferenceMode::ancilla_free ? "ancilla_free" : "ancilla";
}

InferenceMode inference_mode_from_string(const std::string& name) {
  if (name == "ancilla_free") return InferenceMode::ancilla_free;
  if (name == "ancilla") return InferenceMode::ancilla;
  throw InvalidArgument("unknown inference mode '" + name + "' (expected ancilla_free or ancilla)");
}

std::vector<NamedObservable> standard_observables(const LatticeParams& params) {
  LatticeParams p = params;
  p.penalty_strength = 0.0;
  return {{"energy", build_hamiltonian(p)},
          {"link", link_field(p, central_link(p))},
          {"condensate", chiral_condensate(p)},
          {"charge", total_charge(p.n_sites)}};
}

void InferenceOptions::validate() const {
  noise.validate();
  detail::require(shots >= 1, "shots must be >= 1");
  detail::require(!levels.empty(), "at least one noise level is required");
  for (int l : levels) detail::require(l >= 1 && l % 2 == 1, "noise levels must be odd and positive");
}

namespace {

Estimate measure(const DensityState& rho, const PauliSum& op, const InferenceOptions& o,
                 std::mt19937_64& rng) {
  if (o.exact_expectations) return {rho.expectation(op).real(), 0.0};
  return sample_expectation(rho, op, o.shots, rng);
}

void finish_fit(QuantityResult& q) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < q.levels.size(); ++i) pts.emplace_back(q.levels[i], q.values[i]);
  if (pts.size() >= 2) {
    const LineFit f = zne_fit(pts);
    q.slope = f.slope;
    q.intercept = f.intercept;
  } else {
    q.intercept = q.values.front();
  }
}

}  // namespace

std::vector<QuantityResult> inference_run(const CircuitLayout& layout,
                                          std::span<const double> params,
                                          const Eigen::MatrixXcd& rotation,
                                          const std::vector<NamedObservable>& observables,
                                          const InferenceOptions& options) {
  options.validate();
  layout.validate();
  detail::require(params.size() == layout.parameter_count(), "inference_run: parameter count mismatch");
  const std::size_t k = static_cast<std::size_t>(rotation.rows());
  detail::require(k >= 1 && rotation.cols() == rotation.rows() && k == (std::size_t{1} << layout.n_ancilla),
                  "inference_run: rotation must be 2^n_ancilla square");
  for (const auto& o : observables) {
    detail::require(o.op.n_qubits() == layout.n_physical, "inference_run: observable size mismatch");
  }
  std::mt19937_64 rng(options.seed);
  const So8Options so8;
  auto prepare = [&](Circuit c) { return options.decompose ? to_elementary(c, so8) : c; };

  std::vector<QuantityResult> out;
  for (const auto& o : observables) {
    for (std::size_t j = 0; j < k; ++j) out.push_back({o.name, j, options.levels, {}, {}, 0.0, 0.0});
  }
  auto slot = [&](std::size_t obs, std::size_t state) -> QuantityResult& {
    return out[obs * k + state];
  };

  if (options.mode == InferenceMode::ancilla_free) {
    for (std::size_t j = 0; j < k; ++j) {
      const Circuit base = prepare(inference_circuit(layout, params, rotation, j));
      for (int level : options.levels) {
        const DensityState rho =
            run_noisy(fold_circuit(base, level), options.noise, DensityState(base.n_qubits));
        for (std::size_t oi = 0; oi < observables.size(); ++oi) {
          const Estimate e = measure(rho, observables[oi].op, options, rng);
          slot(oi, j).values.push_back(e.value);
          slot(oi, j).std_errors.push_back(e.std_error);
        }
      }
    }
  } else {
    const std::size_t na = layout.n_ancilla;
    const std::size_t n_total = layout.n_qubits();
    detail::require(na >= 1, "inference_run: ancilla mode needs at least one ancilla");
    Circuit base = purification_circuit(layout.n_physical, na);
    base.append(build_circuit(layout, params));
    base = prepare(base);
    const auto paulis = ancilla_paulis(na);
    // weights[p](j) = Re(V^dagger P^T V)_jj, the sensitivity of state j's
    // value to the expectation of O (x) P.
    std::vector<Eigen::VectorXd> weights;
    for (std::size_t p = 0; p < paulis.size(); ++p) {
      std::vector<cplx> unit(paulis.size(), 0.0);
      unit[p] = 1.0;
      const Eigen::MatrixXcd m = rotation.adjoint() * reconstruct_subspace(unit, na) * rotation;
      weights.push_back(m.diagonal().real());
    }
    for (int level : options.levels) {
      const DensityState rho = run_noisy(fold_circuit(base, level), options.noise, DensityState(n_total));
      for (std::size_t oi = 0; oi < observables.size(); ++oi) {
        Eigen::VectorXd value = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
        Eigen::VectorXd var = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
        for (std::size_t p = 0; p < paulis.size(); ++p) {
          const PauliSum joint = observables[oi].op.tensor(PauliSum(na, {paulis[p]}));
          const Estimate e = measure(rho, joint, options, rng);
          value += e.value * weights[p];
          var += (e.std_error * e.std_error) * weights[p].cwiseAbs2();
        }
        for (std::size_t j = 0; j < k; ++j) {
          slot(oi, j).values.push_back(value(static_cast<Eigen::Index>(j)));
          slot(oi, j).std_errors.push_back(std::sqrt(var(static_cast<Eigen::Index>(j))));
        }
      }
    }
  }
  for (auto& q : out) finish_fit(q);
  return out;
}

}  // namespace scvqe
