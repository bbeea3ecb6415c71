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

#include "scvqe/cvqe.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "scvqe/error.hpp"
#include "scvqe/parallel.hpp"

namespace scvqe {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t ancilla_count(std::size_t k) {
  detail::require(k >= 1 && std::has_single_bit(k), "rotation size must be a power of two");
  return static_cast<std::size_t>(std::countr_zero(k));
}

LatticeParams without_penalty(LatticeParams p) {
  p.penalty_strength = 0.0;
  return p;
}

// Parameter groups of a layout: one SoExponential per distinct offset.
struct GateSet {
  std::vector<SoExponential> exps;
  std::vector<RowMajor> forward;  // U in row-major order
  std::vector<std::size_t> group;  // gate -> exps index
  std::vector<std::size_t> offset;  // exps index -> parameter offset
};

GateSet make_gates(const CircuitLayout& layout, std::span<const double> params) {
  if (params.size() != layout.parameter_count()) {
    throw InvalidArgument("expected " + std::to_string(layout.parameter_count()) +
                          " parameters, got " + std::to_string(params.size()));
  }
  GateSet set;
  const std::size_t ppg = layout.params_per_gate();
  const std::size_t groups = params.size() / ppg;
  set.exps.reserve(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    set.exps.emplace_back(layout.gate_dim(), params.subspan(g * ppg, ppg));
    set.forward.emplace_back(set.exps.back().matrix());
    set.offset.push_back(g * ppg);
  }
  for (std::size_t gate = 0; gate < layout.gate_count(); ++gate) {
    set.group.push_back(layout.param_offset(gate) / ppg);
  }
  return set;
}

}  // namespace

CvqeProblem CvqeProblem::make(const LatticeParams& params, const CircuitLayout& layout) {
  CvqeProblem p;
  p.params = params;
  p.layout = layout;
  p.hamiltonian = build_hamiltonian(params);
  p.n_eigenstates = std::size_t{1} << layout.n_ancilla;
  return p;
}

void CvqeProblem::validate() const {
  params.validate();
  layout.validate();
  detail::require(layout.n_physical == params.n_sites,
                  "cvqe: layout.n_physical must equal n_sites");
  detail::require(hamiltonian.n_qubits() == params.n_sites,
                  "cvqe: Hamiltonian must act on the physical qubits only");
  detail::require(n_eigenstates >= 1 && n_eigenstates <= (std::size_t{1} << layout.n_ancilla),
                  "cvqe: n_eigenstates must be in [1, 2^n_ancilla]");
  detail::require(seeds >= 1, "cvqe: seeds must be >= 1");
  detail::require(!stages.empty(), "cvqe: stage schedule is empty");
  detail::require(std::isfinite(init_scale) && init_scale > 0.0, "cvqe: init_scale must be > 0");
  detail::require(std::isfinite(warm_noise) && warm_noise >= 0.0, "cvqe: warm_noise must be >= 0");
  detail::require(gradient_tolerance > 0.0, "cvqe: gradient_tolerance must be > 0");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    detail::require(stages[i].iterations >= 0, "cvqe: stage iterations must be >= 0");
    detail::require(std::isfinite(stages[i].penalty_scale) && stages[i].penalty_scale >= 0.0,
                    "cvqe: penalty_scale must be >= 0");
    if (i > 0) {
      detail::require(stages[i - 1].translation_symmetric || !stages[i].translation_symmetric,
                      "cvqe: a symmetric stage cannot follow an unconstrained one");
    }
  }
}

// ---------------------------------------------------------------------------

CvqeEngine::CvqeEngine(const CircuitLayout& layout, const PauliSum& hamiltonian)
    : layout_(layout), hamiltonian_(hamiltonian) {
  layout_.validate();
  detail::require(hamiltonian.n_qubits() == layout.n_physical,
                  "CvqeEngine: Hamiltonian must act on the physical qubits");
  if (!hamiltonian.is_hermitian()) throw InvalidArgument("CvqeEngine: Hamiltonian is not Hermitian");
  const std::size_t n = layout.n_physical;
  const std::size_t k = std::size_t{1} << layout.n_ancilla;
  initial_.assign(std::size_t{1} << layout.n_qubits(), 0.0);
  const double amp = 1.0 / std::sqrt(static_cast<double>(k));
  for (std::size_t m = 0; m < k; ++m) initial_[m | (m << n)] = amp;
  for (std::size_t g = 0; g < layout.gate_count(); ++g) targets_.push_back(layout.gate_targets(g));
}

std::vector<double> CvqeEngine::final_state(std::span<const double> params) const {
  const GateSet set = make_gates(layout_, params);
  std::vector<double> psi = initial_;
  for (std::size_t g = 0; g < targets_.size(); ++g) {
    apply_real_matrix(psi, set.forward[set.group[g]].data(), targets_[g]);
  }
  return psi;
}

double CvqeEngine::cost(std::span<const double> params) const {
  const std::vector<double> psi = final_state(params);
  return hamiltonian_.expectation_real(psi);
}

double CvqeEngine::cost_and_gradient(std::span<const double> params, std::span<double> grad) const {
  detail::require(grad.size() == params.size(), "cost_and_gradient: gradient size mismatch");
  const GateSet set = make_gates(layout_, params);
  std::vector<double> psi = initial_;
  for (std::size_t g = 0; g < targets_.size(); ++g) {
    apply_real_matrix(psi, set.forward[set.group[g]].data(), targets_[g]);
  }
  std::vector<double> lambda(psi.size());
  hamiltonian_.apply_real(psi, lambda);
  double value = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) value += psi[i] * lambda[i];

  std::fill(grad.begin(), grad.end(), 0.0);
  const Eigen::Index d = layout_.gate_dim();
  RowMajor outer(d, d);
  for (std::size_t g = targets_.size(); g-- > 0;) {
    const SoExponential& e = set.exps[set.group[g]];
    // column-major U read as row-major is U^T
    const double* transpose = e.matrix().data();
    apply_real_matrix(psi, transpose, targets_[g]);
    outer.setZero();
    accumulate_real_outer(lambda, psi, targets_[g], outer.data());
    const Eigen::MatrixXd m = 2.0 * outer;
    e.pullback(m, grad.subspan(set.offset[set.group[g]], layout_.params_per_gate()));
    apply_real_matrix(lambda, transpose, targets_[g]);
  }
  return value;
}

double cost(const CvqeProblem& problem, std::span<const double> params) {
  problem.validate();
  return CvqeEngine(problem.layout, problem.hamiltonian).cost(params);
}

std::vector<double> gradient(const CvqeProblem& problem, std::span<const double> params, double h) {
  problem.validate();
  detail::require(h > 0.0 && std::isfinite(h), "gradient: step must be positive");
  const CvqeEngine engine(problem.layout, problem.hamiltonian);
  std::vector<double> out(params.size());
  detail::parallel_for(params.size(), problem.threads, [&](std::size_t i) {
    std::vector<double> x(params.begin(), params.end());
    x[i] = params[i] + h;
    const double up = engine.cost(x);
    x[i] = params[i] - h;
    const double down = engine.cost(x);
    out[i] = (up - down) / (2.0 * h);
  });
  return out;
}

std::vector<double> adjoint_gradient(const CvqeProblem& problem, std::span<const double> params) {
  problem.validate();
  std::vector<double> out(params.size());
  CvqeEngine(problem.layout, problem.hamiltonian).cost_and_gradient(params, out);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<PauliString> ancilla_paulis(std::size_t n_ancilla) {
  detail::require(n_ancilla <= 8, "ancilla_paulis: too many ancillas");
  std::vector<PauliString> out;
  const std::size_t count = std::size_t{1} << (2 * n_ancilla);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t x = 0, z = 0;
    for (std::size_t q = 0; q < n_ancilla; ++q) {
      const auto f = (i >> (2 * q)) & 3U;
      if (f == 1 || f == 2) x |= std::uint64_t{1} << q;
      if (f == 2 || f == 3) z |= std::uint64_t{1} << q;
    }
    out.emplace_back(1.0, x, z);
  }
  return out;
}

Eigen::MatrixXcd reconstruct_subspace(std::span<const cplx> pauli_expectations,
                                      std::size_t n_ancilla) {
  const auto paulis = ancilla_paulis(n_ancilla);
  detail::require(pauli_expectations.size() == paulis.size(),
                  "reconstruct_subspace: need 4^n_ancilla expectations");
  const auto k = static_cast<Eigen::Index>(std::size_t{1} << n_ancilla);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(k, k);
  for (std::size_t i = 0; i < paulis.size(); ++i) {
    const Eigen::MatrixXcd p =
        n_ancilla == 0 ? Eigen::MatrixXcd::Identity(1, 1)
                       : PauliSum(n_ancilla, {paulis[i]}).to_matrix();
    h += pauli_expectations[i] * p.transpose();
  }
  return h;
}

Eigen::MatrixXcd subspace_hamiltonian(const QuantumState& state, const PauliSum& hamiltonian,
                                      std::size_t n_ancilla) {
  const std::size_t n = hamiltonian.n_qubits();
  detail::require(state.n_qubits() == n + n_ancilla,
                  "subspace_hamiltonian: state must hold the physical and ancilla registers");
  const std::size_t total = n + n_ancilla;
  const PauliSum h_full = hamiltonian.embedded(total, 0);
  std::vector<cplx> values;
  for (const PauliString& p : ancilla_paulis(n_ancilla)) {
    const PauliString shifted(1.0, p.x_mask() << n, p.z_mask() << n);
    const PauliSum op = h_full * PauliSum(total, {shifted});
    values.push_back(expectation(state, op));
  }
  return reconstruct_subspace(values, n_ancilla);
}

std::vector<QuantumState> branch_states(const QuantumState& state, std::size_t n_ancilla) {
  detail::require(n_ancilla < state.n_qubits(), "branch_states: no physical register left");
  const std::size_t n = state.n_qubits() - n_ancilla;
  const std::size_t k = std::size_t{1} << n_ancilla;
  const std::size_t dim = std::size_t{1} << n;
  const double scale = std::sqrt(static_cast<double>(k));
  std::vector<QuantumState> out;
  for (std::size_t m = 0; m < k; ++m) {
    std::vector<cplx> amps(dim);
    for (std::size_t b = 0; b < dim; ++b) amps[b] = scale * state[b | (m << n)];
    out.emplace_back(std::move(amps));
  }
  return out;
}

SubspaceEigen diagonalize_subspace(const Eigen::MatrixXcd& subspace_h) {
  detail::require(subspace_h.rows() == subspace_h.cols() && subspace_h.rows() >= 1,
                  "diagonalize_subspace: matrix must be square");
  const Eigen::MatrixXcd sym = 0.5 * (subspace_h + subspace_h.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
  if (es.info() != Eigen::Success) throw NumericalError("diagonalize_subspace: eigensolver failed");
  SubspaceEigen out;
  out.rotation = es.eigenvectors();
  for (Eigen::Index j = 0; j < out.rotation.cols(); ++j) {
    // deterministic phase: largest entry real and positive
    Eigen::Index idx = 0;
    out.rotation.col(j).cwiseAbs().maxCoeff(&idx);
    const cplx v = out.rotation(idx, j);
    out.rotation.col(j) *= std::abs(v) / v;
    out.energies.push_back(es.eigenvalues()(j));
  }
  return out;
}

RotatedStates rotate_to_eigenstates(const QuantumState& state, const Eigen::MatrixXcd& rotation,
                                    const PauliSum& hamiltonian) {
  detail::require(rotation.rows() == rotation.cols(), "rotate_to_eigenstates: V must be square");
  const std::size_t k = static_cast<std::size_t>(rotation.rows());
  const std::size_t na = ancilla_count(k);
  const std::size_t n = hamiltonian.n_qubits();
  detail::require(state.n_qubits() == n + na, "rotate_to_eigenstates: register size mismatch");
  QuantumState rotated = state;
  if (na > 0) {
    std::vector<std::size_t> targets;
    for (std::size_t i = na; i-- > 0;) targets.push_back(n + i);
    apply_gate(rotated, GateOp(rotation.transpose(), targets, "V^T"));
  }
  RotatedStates out;
  const CompiledOperator h(hamiltonian);
  for (QuantumState& b : branch_states(rotated, na)) {
    const double norm = b.norm() / std::sqrt(static_cast<double>(k));
    if (norm < 1e-8) throw NumericalError("rotate_to_eigenstates: degenerate branch projection");
    b.normalize();
    out.energies.push_back(h.expectation(b.amplitudes()).real());
    out.states.push_back(std::move(b));
  }
  return out;
}

Circuit inference_circuit(const CircuitLayout& layout, std::span<const double> params,
                          const Eigen::MatrixXcd& rotation, std::size_t state_index) {
  const std::size_t k = static_cast<std::size_t>(rotation.rows());
  const std::size_t na = ancilla_count(k);
  detail::require(na == layout.n_ancilla, "inference_circuit: V does not match the ancilla count");
  detail::require(state_index < k, "inference_circuit: state index out of range");
  CircuitLayout physical = layout;
  physical.n_ancilla = 0;
  Circuit c{layout.n_physical, {}};
  for (std::size_t q = 0; q < na; ++q) {
    if ((state_index >> q) & 1U) c.gates.push_back(gates::pauli_x(q));
  }
  if (na > 0) {
    std::vector<std::size_t> targets;
    for (std::size_t i = na; i-- > 0;) targets.push_back(i);
    c.gates.emplace_back(rotation, targets, "V");
  }
  c.append(build_circuit(physical, params));
  return c;
}

// ---------------------------------------------------------------------------

CvqeResult assemble_result(const CvqeProblem& problem, const CircuitLayout& layout,
                           std::vector<double> params) {
  problem.validate();
  const CvqeEngine engine(layout, problem.hamiltonian);
  const std::vector<double> real_state = engine.final_state(params);
  std::vector<cplx> amps(real_state.begin(), real_state.end());
  const QuantumState state(std::move(amps));

  const LatticeParams physical = without_penalty(problem.params);
  const PauliSum w = build_hamiltonian(physical);
  CvqeResult r;
  r.layout = layout;
  r.final_cost = engine.cost(params);
  r.best_params = std::move(params);
  r.subspace_h = subspace_hamiltonian(state, w, layout.n_ancilla);
  const SubspaceEigen eig = diagonalize_subspace(r.subspace_h);
  r.rotation = eig.rotation;
  RotatedStates rotated = rotate_to_eigenstates(state, eig.rotation, w);

  const PauliSum charge = total_charge(physical.n_sites);
  const PauliSum cond = chiral_condensate(physical);
  const PauliSum link = link_field(physical, central_link(physical));
  const PauliSum op2 = physical.x > 0.0 ? momentum_squared(physical) : PauliSum();
  const BasisPermutation sr(physical.n_sites);
  for (std::size_t j = 0; j < problem.n_eigenstates; ++j) {
    const QuantumState& s = rotated.states[j];
    StateDiagnostics d;
    d.energy = rotated.energies[j];
    d.variance = variance(s, w);
    d.total_charge = expectation(s, charge).real();
    d.sr = expectation(s, sr);
    try {
      d.branch = to_string(phase_classify(d.sr));
    } catch (const NumericalError&) {
      d.branch = "undetermined";
    }
    d.momentum_sq_over_x2 = physical.x > 0.0
                                ? expectation(s, op2).real() / (physical.x * physical.x)
                                : std::numeric_limits<double>::quiet_NaN();
    d.condensate = expectation(s, cond).real();
    d.central_link = expectation(s, link).real();
    d.exact_energy = std::numeric_limits<double>::quiet_NaN();
    r.energies.push_back(eig.energies[j]);
    r.eigen_states.push_back(s);
    r.diagnostics.push_back(d);
  }
  return r;
}

void compare_to_reference(CvqeResult& result, const SpectrumResult& reference) {
  detail::require(reference.states.size() >= result.eigen_states.size(),
                  "compare_to_reference: reference has too few states");
  for (std::size_t j = 0; j < result.eigen_states.size(); ++j) {
    result.diagnostics[j].exact_energy = reference.energies[j];
    result.diagnostics[j].fidelity = fidelity(result.eigen_states[j], reference.states[j]);
  }
}

namespace {

struct SeedRun {
  SeedOutcome outcome;
  std::vector<double> params;
  CircuitLayout layout;
  std::vector<std::pair<int, double>> trace;
};

SeedRun run_seed(const CvqeProblem& problem, std::size_t seed_index) {
  SeedRun run;
  run.outcome.seed_index = seed_index;
  std::seed_seq seq{static_cast<std::uint32_t>(problem.rng_seed),
                    static_cast<std::uint32_t>(problem.rng_seed >> 32),
                    static_cast<std::uint32_t>(seed_index)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> init(-problem.init_scale, problem.init_scale);
  std::uniform_real_distribution<double> noise(-problem.warm_noise, problem.warm_noise);

  CircuitLayout layout = problem.layout.with_symmetry(problem.stages.front().translation_symmetric);
  std::vector<double> x(layout.parameter_count());
  for (double& v : x) v = init(rng);
  int offset = 0;
  double final_cost = std::numeric_limits<double>::quiet_NaN();
  for (const Stage& stage : problem.stages) {
    if (layout.translation_symmetric && !stage.translation_symmetric) {
      x = expand_symmetric(layout, x);
      layout = layout.with_symmetry(false);
      for (double& v : x) v += noise(rng);
    }
    LatticeParams p = problem.params;
    p.penalty_strength *= stage.penalty_scale;
    const CvqeEngine engine(layout, build_hamiltonian(p));
    LbfgsOptions opts;
    opts.max_iterations = stage.iterations;
    opts.gradient_tolerance = problem.gradient_tolerance;
    const Objective f = [&engine](std::span<const double> v, std::span<double> g) {
      return engine.cost_and_gradient(v, g);
    };
    LbfgsResult res = lbfgs_minimize(f, std::move(x), opts);
    run.outcome.stage_status.push_back(to_string(res.status));
    for (const auto& [it, c] : res.trace) {
      if (it == 0 && offset > 0) continue;
      run.trace.emplace_back(offset + it, c);
    }
    offset += res.iterations;
    x = std::move(res.x);
    final_cost = res.f;
    if (res.status == LbfgsStatus::nonfinite || !std::isfinite(res.f)) {
      run.outcome.failed = true;
      break;
    }
  }
  run.outcome.final_cost = final_cost;
  run.params = std::move(x);
  run.layout = layout;
  return run;
}

}  // namespace

CvqeResult optimize(const CvqeProblem& problem) {
  problem.validate();
  std::vector<SeedRun> runs(static_cast<std::size_t>(problem.seeds));
  detail::parallel_for(runs.size(), problem.threads,
                       [&](std::size_t s) { runs[s] = run_seed(problem, s); });
  std::size_t best = runs.size();
  for (std::size_t s = 0; s < runs.size(); ++s) {
    if (runs[s].outcome.failed) continue;
    if (best == runs.size() || runs[s].outcome.final_cost < runs[best].outcome.final_cost) best = s;
  }
  if (best == runs.size()) throw NumericalError("cvqe: every seed failed");
  CvqeResult r = assemble_result(problem, runs[best].layout, runs[best].params);
  r.best_seed = best;
  r.final_cost = runs[best].outcome.final_cost;
  r.cost_trace = runs[best].trace;
  for (const SeedRun& run : runs) r.seeds.push_back(run.outcome);
  return r;
}

}  // namespace scvqe
