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

#include "scvqe/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "scvqe/error.hpp"
#include "scvqe/lbfgs.hpp"

namespace scvqe {
namespace {

double sinc(double v) {
  if (std::abs(v) < 1e-8) return 1.0 - v * v / 6.0;
  return std::sin(v) / v;
}

std::size_t gate_arity(int dim) { return dim == 4 ? 2 : 3; }

}  // namespace

std::size_t SoGateParams::entry_count(int dim) {
  detail::require(dim == 4 || dim == 8, "SO gate dimension must be 4 or 8");
  return static_cast<std::size_t>(dim * (dim - 1) / 2);
}

void SoGateParams::validate() const {
  if (entries.size() != entry_count(dim)) {
    throw InvalidArgument("SO(" + std::to_string(dim) + ") gate needs " +
                          std::to_string(entry_count(dim)) + " entries, got " +
                          std::to_string(entries.size()));
  }
  for (const double e : entries) {
    if (!std::isfinite(e)) throw InvalidArgument("SO gate entry is not finite");
  }
}

SoExponential::SoExponential(int dim, std::span<const double> entries) : dim_(dim) {
  SoGateParams{dim, {entries.begin(), entries.end()}}.validate();
  const Eigen::Index n = dim;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      g(i, j) = entries[k];
      g(j, i) = -entries[k];
      ++k;
    }
  }
  // iG is Hermitian: G = Q diag(-i w) Q^dag.
  const Eigen::MatrixXcd ig = cplx(0.0, 1.0) * g.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ig);
  q_ = es.eigenvectors();
  const Eigen::VectorXd w = es.eigenvalues();
  Eigen::VectorXcd ew(n);
  for (Eigen::Index i = 0; i < n; ++i) ew(i) = std::polar(1.0, -w(i));
  u_ = (q_ * ew.asDiagonal() * q_.adjoint()).real();

  // Divided differences of exp at the eigenvalues -i w.
  phi_conj_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx mid = std::polar(1.0, -0.5 * (w(i) + w(j)));
      phi_conj_(i, j) = std::conj(mid * sinc(0.5 * (w(i) - w(j))));
    }
  }
}

void SoExponential::pullback(const Eigen::MatrixXd& m, std::span<double> grad) const {
  const Eigen::Index n = dim_;
  const Eigen::MatrixXcd inner = q_.adjoint() * m.cast<cplx>() * q_;
  const Eigen::MatrixXd z = (q_ * phi_conj_.cwiseProduct(inner) * q_.adjoint()).real();
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) grad[k++] += z(i, j) - z(j, i);
  }
}

Eigen::MatrixXd so_matrix(const SoGateParams& params) {
  params.validate();
  return SoExponential(params.dim, params.entries).matrix();
}

GateOp so_gate(const SoGateParams& params, std::vector<std::size_t> targets) {
  params.validate();
  if (targets.size() != gate_arity(params.dim)) {
    throw InvalidArgument("SO gate target count does not match its dimension");
  }
  return GateOp(so_matrix(params).cast<cplx>(), std::move(targets),
                params.dim == 4 ? "SO4" : "SO8", params.entries);
}

// ---------------------------------------------------------------------------

std::string to_string(LayoutKind kind) {
  switch (kind) {
    case LayoutKind::brickwall_so4: return "brickwall_so4";
    case LayoutKind::ladder_so4: return "ladder_so4";
    case LayoutKind::ladder_so8: return "ladder_so8";
  }
  return "unknown";
}

LayoutKind layout_kind_from_string(const std::string& name) {
  if (name == "brickwall_so4") return LayoutKind::brickwall_so4;
  if (name == "ladder_so4") return LayoutKind::ladder_so4;
  if (name == "ladder_so8") return LayoutKind::ladder_so8;
  throw InvalidArgument("unknown layout kind '" + name +
                        "' (expected brickwall_so4, ladder_so4 or ladder_so8)");
}

void CircuitLayout::validate() const {
  detail::require(n_layers >= 1, "layout: n_layers must be >= 1");
  detail::require(n_ancilla <= n_physical, "layout: n_ancilla must not exceed n_physical");
  detail::require(n_qubits() <= 30, "layout: register too large");
  const std::size_t min_physical = kind == LayoutKind::ladder_so8 ? 3 : 2;
  detail::require(n_physical >= min_physical,
                  "layout: too few physical qubits for " + to_string(kind));
}

int CircuitLayout::gate_dim() const { return kind == LayoutKind::ladder_so8 ? 8 : 4; }

std::size_t CircuitLayout::params_per_gate() const { return SoGateParams::entry_count(gate_dim()); }

std::size_t CircuitLayout::gates_per_layer() const {
  return kind == LayoutKind::ladder_so8 ? n_physical - 2 : n_physical - 1;
}

std::size_t CircuitLayout::parameter_count() const {
  return params_per_gate() * n_layers * (translation_symmetric ? 1 : gates_per_layer());
}

std::vector<std::size_t> CircuitLayout::gate_origins() const {
  std::vector<std::size_t> layer;
  if (kind == LayoutKind::brickwall_so4) {
    for (std::size_t q = 0; q + 1 < n_physical; q += 2) layer.push_back(q);
    for (std::size_t q = 1; q + 1 < n_physical; q += 2) layer.push_back(q);
  } else {
    for (std::size_t q = 0; q < gates_per_layer(); ++q) layer.push_back(q);
  }
  std::vector<std::size_t> all;
  all.reserve(layer.size() * n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) all.insert(all.end(), layer.begin(), layer.end());
  return all;
}

std::vector<std::size_t> CircuitLayout::gate_targets(std::size_t gate) const {
  const std::size_t q = gate_origins().at(gate);
  if (gate_dim() == 4) return {q, q + 1};
  return {q, q + 1, q + 2};
}

std::size_t CircuitLayout::param_offset(std::size_t gate) const {
  const std::size_t layer = gate / gates_per_layer();
  return params_per_gate() * (translation_symmetric ? layer : gate);
}

CircuitLayout CircuitLayout::with_symmetry(bool symmetric) const {
  CircuitLayout out = *this;
  out.translation_symmetric = symmetric;
  return out;
}

Circuit build_circuit(const CircuitLayout& layout, std::span<const double> params) {
  layout.validate();
  if (params.size() != layout.parameter_count()) {
    throw InvalidArgument("build_circuit: expected " + std::to_string(layout.parameter_count()) +
                          " parameters, got " + std::to_string(params.size()));
  }
  Circuit c{layout.n_qubits(), {}};
  const auto origins = layout.gate_origins();
  const std::size_t ppg = layout.params_per_gate();
  for (std::size_t g = 0; g < origins.size(); ++g) {
    const auto first = params.begin() + static_cast<long>(layout.param_offset(g));
    SoGateParams p{layout.gate_dim(), {first, first + static_cast<long>(ppg)}};
    c.gates.push_back(so_gate(p, layout.gate_targets(g)));
  }
  return c;
}

std::vector<double> expand_symmetric(const CircuitLayout& symmetric_layout,
                                     std::span<const double> params) {
  detail::require(symmetric_layout.translation_symmetric,
                  "expand_symmetric: layout is not translation symmetric");
  detail::require(params.size() == symmetric_layout.parameter_count(),
                  "expand_symmetric: parameter count mismatch");
  const CircuitLayout full = symmetric_layout.with_symmetry(false);
  std::vector<double> out(full.parameter_count());
  const std::size_t ppg = full.params_per_gate();
  for (std::size_t g = 0; g < full.gate_count(); ++g) {
    std::copy_n(params.begin() + static_cast<long>(symmetric_layout.param_offset(g)), ppg,
                out.begin() + static_cast<long>(full.param_offset(g)));
  }
  return out;
}

Circuit purification_circuit(std::size_t n_physical, std::size_t n_ancilla) {
  detail::require(n_ancilla <= n_physical, "purification: n_ancilla must not exceed n_physical");
  Circuit c{n_physical + n_ancilla, {}};
  for (std::size_t i = 0; i < n_ancilla; ++i) {
    c.gates.push_back(gates::hadamard(n_physical + i));
    c.gates.push_back(gates::cnot(n_physical + i, i));
  }
  return c;
}

QuantumState prepare_purified(std::size_t n_physical, std::size_t n_ancilla) {
  QuantumState s(n_physical + n_ancilla);
  apply_circuit(s, purification_circuit(n_physical, n_ancilla));
  return s;
}

// ---------------------------------------------------------------------------
// SO(4) through the magic basis: E U E^dag = A (x) B with
// E = CNOT(t1 -> t0) (I (x) H) (S (x) S).

namespace {

Eigen::Matrix4cd magic_basis() {
  const double r = (1.0 / std::numbers::sqrt2);
  const cplx i(0.0, 1.0);
  Eigen::Matrix4cd e;
  e << 1, i, 0, 0,
       0, 0, i, 1,
       0, 0, i, -1,
       1, -i, 0, 0;
  return r * e;
}

// Nearest Kronecker factors of a 4x4 matrix known to be a product state.
std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> kron_factors(const Eigen::Matrix4cd& k) {
  // R[(a,a'), (b,b')] = K[(a,b), (a',b')]
  Eigen::Matrix4cd r;
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap)
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp) r(2 * a + ap, 2 * b + bp) = k(2 * a + b, 2 * ap + bp);
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double s = std::sqrt(svd.singularValues()(0));
  Eigen::Matrix2cd a, b;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      a(x, y) = s * svd.matrixU()(2 * x + y, 0);
      b(x, y) = s * std::conj(svd.matrixV()(2 * x + y, 0));
    }
  }
  return {a, b};
}

// Angles (a, b, c) with m = phase * RX(a) RZ(b) RX(c).
std::array<double, 3> rx_rz_rx_angles(const Eigen::Matrix2cd& m) {
  const Eigen::Matrix2cd su = m / std::sqrt(m.determinant());
  Eigen::Matrix2cd h;
  const double r = (1.0 / std::numbers::sqrt2);
  h << r, r, r, -r;
  // H RX(t) H = RZ(t), so Euler ZXZ angles of H su H give the XZX angles.
  const Eigen::Matrix2cd w = h * su * h;
  const cplx a = w(0, 0), b = w(0, 1);
  const double beta = 2.0 * std::atan2(std::abs(b), std::abs(a));
  double sum = 0.0, diff = 0.0;
  if (std::abs(a) > 1e-12) sum = -2.0 * std::arg(a);
  if (std::abs(b) > 1e-12) diff = -2.0 * std::arg(cplx(0.0, 1.0) * b);
  if (std::abs(a) <= 1e-12) sum = diff;
  if (std::abs(b) <= 1e-12) diff = sum;
  return {0.5 * (sum + diff), beta, 0.5 * (sum - diff)};
}

void emit_single(std::vector<GateOp>& out, const Eigen::Matrix2cd& m, std::size_t q) {
  const auto [a, b, c] = rx_rz_rx_angles(m);
  // matrix product RX(a) RZ(b) RX(c): RX(c) acts first
  out.push_back(gates::rx(q, c));
  out.push_back(gates::rz(q, b));
  out.push_back(gates::rx(q, a));
}

}  // namespace

std::vector<GateOp> decompose_so4(const Eigen::Matrix4d& u, std::array<std::size_t, 2> targets) {
  const double orth = (u * u.transpose() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
  if (!(orth <= 1e-8) || !(std::abs(u.determinant() - 1.0) <= 1e-8)) {
    throw InvalidArgument("decompose_so4: input is not in SO(4)");
  }
  const Eigen::Matrix4cd e = magic_basis();
  const Eigen::Matrix4cd k = e * u.cast<cplx>() * e.adjoint();
  const auto [a, b] = kron_factors(k);
  const auto [t0, t1] = targets;
  std::vector<GateOp> out;
  out.push_back(gates::phase_s(t0));
  out.push_back(gates::phase_s(t1));
  out.push_back(gates::hadamard(t1));
  out.push_back(gates::cnot(t1, t0));
  emit_single(out, a, t0);
  emit_single(out, b, t1);
  out.push_back(gates::cnot(t1, t0));
  out.push_back(gates::hadamard(t1));
  out.push_back(gates::phase_sdg(t0));
  out.push_back(gates::phase_sdg(t1));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Even ladder gates act on local qubits (0,1), odd ones on (1,2); local
// qubit 0 is the most significant bit of the 8-dim index.
Eigen::MatrixXd embed_pair(const Eigen::MatrixXd& g, std::size_t gate_index) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(8, 8);
  if (gate_index % 2 == 0) {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 2; ++c) e(2 * a + c, 2 * b + c) = g(a, b);
  } else {
    for (int c = 0; c < 2; ++c) e.block(4 * c, 4 * c, 4, 4) = g;
  }
  return e;
}

Eigen::MatrixXd restrict_pair(const Eigen::MatrixXd& d, std::size_t gate_index) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
  if (gate_index % 2 == 0) {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 2; ++c) g(a, b) += d(2 * a + c, 2 * b + c);
  } else {
    for (int c = 0; c < 2; ++c) g += d.block(4 * c, 4 * c, 4, 4);
  }
  return g;
}

// 16 - 2 tr(U^T V) for orthogonal U, V, with its gradient.
double ladder_distance(const Eigen::MatrixXd& target, std::span<const double> x,
                       std::span<double> grad) {
  const std::size_t n = x.size() / 6;
  std::vector<SoExponential> exps;
  std::vector<Eigen::MatrixXd> embedded;
  exps.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    exps.emplace_back(4, x.subspan(6 * k, 6));
    embedded.push_back(embed_pair(exps.back().matrix(), k));
  }
  // prefix[k] = E_{k-1} ... E_0
  std::vector<Eigen::MatrixXd> prefix(n + 1, Eigen::MatrixXd::Identity(8, 8));
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = embedded[k] * prefix[k];
  const double f = 16.0 - 2.0 * (target.transpose() * prefix[n]).trace();
  std::fill(grad.begin(), grad.end(), 0.0);
  Eigen::MatrixXd suffix = Eigen::MatrixXd::Identity(8, 8);  // E_{n-1} ... E_{k+1}
  for (std::size_t k = n; k-- > 0;) {
    const Eigen::MatrixXd d = -2.0 * suffix.transpose() * target * prefix[k].transpose();
    exps[k].pullback(restrict_pair(d, k), grad.subspan(6 * k, 6));
    suffix = suffix * embedded[k];
  }
  return f;
}

}  // namespace

Eigen::MatrixXd so4_ladder_matrix(const std::vector<SoGateParams>& gates) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(8, 8);
  for (std::size_t k = 0; k < gates.size(); ++k) {
    detail::require(gates[k].dim == 4, "so4_ladder_matrix: gates must be SO(4)");
    v = embed_pair(so_matrix(gates[k]), k) * v;
  }
  return v;
}

So8Decomposition decompose_so8(const Eigen::MatrixXd& u, const So8Options& options) {
  detail::require(u.rows() == 8 && u.cols() == 8, "decompose_so8: target must be 8x8");
  const double orth = (u * u.transpose() - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff();
  if (!(orth <= 1e-8) || !(std::abs(u.determinant() - 1.0) <= 1e-8)) {
    throw InvalidArgument("decompose_so8: input is not in SO(8)");
  }
  detail::require(options.max_layers >= 1, "decompose_so8: max_layers must be >= 1");
  detail::require(options.restarts >= 1, "decompose_so8: restarts must be >= 1");

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  LbfgsOptions lopts;
  lopts.max_iterations = options.max_iterations;
  lopts.gradient_tolerance = 1e-12;
  lopts.f_target = 0.1 * options.threshold;
  const Objective objective = [&u](std::span<const double> x, std::span<double> g) {
    return ladder_distance(u, x, g);
  };

  So8Decomposition best;
  best.distance = std::numeric_limits<double>::infinity();
  std::vector<double> best_x, previous_x;
  for (std::size_t layers = 1; layers <= options.max_layers; ++layers) {
    double layer_best = std::numeric_limits<double>::infinity();
    std::vector<double> layer_x;
    for (int r = 0; r < options.restarts && !(layer_best < options.threshold); ++r) {
      std::vector<double> x0(12 * layers, 0.0);
      if (r == 0) {
        // previous optimum padded with an identity layer
        std::copy(previous_x.begin(), previous_x.end(), x0.begin());
      } else {
        for (double& v : x0) v = angle(rng);
      }
      const LbfgsResult res = lbfgs_minimize(objective, std::move(x0), lopts);
      if (std::max(0.0, res.f) < layer_best) {
        layer_best = std::max(0.0, res.f);
        layer_x = res.x;
      }
    }
    previous_x = layer_x;
    if (layer_best < best.distance) {
      best.distance = layer_best;
      best.layers = layers;
      best_x = layer_x;
    }
    if (best.distance < options.threshold) break;
  }
  best.below_threshold = best.distance < options.threshold;
  for (std::size_t k = 0; k < best_x.size() / 6; ++k) {
    best.gates.push_back(SoGateParams{4, {best_x.begin() + 6 * static_cast<long>(k),
                                          best_x.begin() + 6 * static_cast<long>(k + 1)}});
  }
  return best;
}

Circuit to_elementary(const Circuit& circuit, const So8Options& options) {
  Circuit out{circuit.n_qubits, {}};
  for (const GateOp& g : circuit.gates) {
    if (g.label() == "SO4") {
      const Eigen::Matrix4d u = g.matrix().real();
      auto parts = decompose_so4(u, {g.targets()[0], g.targets()[1]});
      out.gates.insert(out.gates.end(), parts.begin(), parts.end());
    } else if (g.label() == "SO8") {
      const So8Decomposition d = decompose_so8(g.matrix().real(), options);
      if (!d.below_threshold) {
        throw NumericalError("to_elementary: SO(8) gate did not decompose below threshold");
      }
      const auto& t = g.targets();
      for (std::size_t k = 0; k < d.gates.size(); ++k) {
        const std::array<std::size_t, 2> pair =
            k % 2 == 0 ? std::array<std::size_t, 2>{t[0], t[1]}
                       : std::array<std::size_t, 2>{t[1], t[2]};
        const Eigen::Matrix4d u = so_matrix(d.gates[k]);
        auto parts = decompose_so4(u, pair);
        out.gates.insert(out.gates.end(), parts.begin(), parts.end());
      }
    } else {
      out.gates.push_back(g);
    }
  }
  return out;
}

}  // namespace scvqe
