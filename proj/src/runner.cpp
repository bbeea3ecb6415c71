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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include "scvqe/config.hpp"
#include "scvqe/error.hpp"
#include "scvqe/parallel.hpp"

namespace scvqe {
namespace {

using io::json;
namespace fs = std::filesystem;

CircuitLayout config_layout(const RunConfig& c) {
  CircuitLayout l = c.cvqe.layout;
  l.n_physical = c.lattice.n_sites;
  return l;
}

CvqeProblem make_problem(const RunConfig& c, const LatticeParams& lattice,
                         const CircuitLayout& layout) {
  CvqeProblem p = CvqeProblem::make(lattice, layout);
  p.stages = c.cvqe.stages;
  p.seeds = c.cvqe.seeds;
  p.rng_seed = c.seed;
  p.init_scale = c.cvqe.init_scale;
  p.warm_noise = c.cvqe.warm_noise;
  p.gradient_tolerance = c.cvqe.gradient_tolerance;
  p.threads = c.threads;
  return p;
}

/// Optimizes, or rebuilds the result from a parameter checkpoint.
CvqeResult solve(const RunConfig& c, const CircuitLayout& layout, std::ostream& log) {
  const CvqeProblem problem = make_problem(c, c.lattice, layout);
  if (!c.cvqe.params_file.empty()) {
    log << "loading parameters from " << c.cvqe.params_file << '\n';
    return assemble_result(problem, layout, io::load_parameters(c.cvqe.params_file));
  }
  log << "optimizing L=" << layout.n_layers << " with " << problem.seeds << " seeds\n";
  return optimize(problem);
}

SpectrumResult reference_spectrum(const LatticeParams& lattice, std::size_t k) {
  LatticeParams p = lattice;
  p.penalty_strength = 0.0;
  return exact_spectrum(build_hamiltonian(p), k);
}

json diagnostics_json(const StateDiagnostics& d) {
  return {{"energy", io::number(d.energy)},
          {"exact_energy", io::number(d.exact_energy)},
          {"fidelity", io::number(d.fidelity)},
          {"variance", io::number(d.variance)},
          {"total_charge", io::number(d.total_charge)},
          {"sr_re", io::number(d.sr.real())},
          {"sr_im", io::number(d.sr.imag())},
          {"branch", d.branch},
          {"momentum_sq_over_x2", io::number(d.momentum_sq_over_x2)},
          {"condensate", io::number(d.condensate)},
          {"central_link", io::number(d.central_link)}};
}

json cvqe_run_json(const CvqeResult& r, const std::string& params_file) {
  json diags = json::array();
  for (const auto& d : r.diagnostics) diags.push_back(diagnostics_json(d));
  json trace = json::array();
  for (const auto& [it, cost] : r.cost_trace) trace.push_back({it, io::number(cost)});
  json seeds = json::array();
  for (const auto& s : r.seeds) {
    seeds.push_back({{"seed_index", s.seed_index},
                     {"final_cost", io::number(s.final_cost)},
                     {"failed", s.failed},
                     {"stage_status", s.stage_status}});
  }
  return {{"layout", io::to_json(r.layout)},
          {"n_layers", r.layout.n_layers},
          {"parameter_count", r.best_params.size()},
          {"best_seed", r.best_seed},
          {"final_cost", io::number(r.final_cost)},
          {"energies", io::numbers(r.energies)},
          {"states", diags},
          {"subspace_h", io::to_json(r.subspace_h)},
          {"rotation", io::to_json(r.rotation)},
          {"params_file", params_file},
          {"cost_trace", trace},
          {"seeds", seeds}};
}

void write_manifest(const RunConfig& c, const std::vector<std::string>& artifacts, double seconds) {
  const std::string canonical = to_json(c).dump();
  json m = {{"command", c.command},
            {"preset", c.preset},
            {"version", "0.1.0"},
            {"config_hash", io::hex64(io::fnv1a(canonical))},
            {"seed", c.seed},
            {"threads", c.threads},
            {"wall_time_s", seconds},
            {"artifacts", artifacts},
            {"config", to_json(c)}};
  io::write_json(c.out_dir / "manifest.json", m);
}

std::vector<std::string> run_ed(const RunConfig& c, std::ostream& log) {
  const SpectrumResult s = exact_spectrum(build_hamiltonian(c.lattice), c.ed.n_states, c.ed.sector);
  const auto rows = spectrum_observables(s.states, s.energies, c.lattice);
  io::write_spectrum_csv(c.out_dir / "spectrum.csv", rows);
  for (const auto& r : rows) log << "E" << r.index << " = " << io::format_double(r.energy) << '\n';
  return {"spectrum.csv"};
}

std::vector<std::string> run_cvqe(const RunConfig& c, std::ostream& log) {
  std::vector<std::size_t> layers = c.cvqe.layer_sweep;
  if (layers.empty()) layers.push_back(c.cvqe.layout.n_layers);
  const CircuitLayout base = config_layout(c);
  const SpectrumResult ref = reference_spectrum(c.lattice, std::size_t{1} << base.n_ancilla);
  std::vector<std::string> artifacts{"cvqe_manifest.json"};
  json runs = json::array();
  for (std::size_t L : layers) {
    CircuitLayout layout = base;
    layout.n_layers = L;
    CvqeResult r = solve(c, layout, log);
    compare_to_reference(r, ref);
    const std::string pfile = "params_L" + std::to_string(L) + ".bin";
    io::save_parameters(c.out_dir / pfile, r.best_params);
    artifacts.push_back(pfile);
    for (std::size_t j = 0; j < r.diagnostics.size(); ++j) {
      log << "  L=" << L << " state " << j << ": E=" << io::format_double(r.diagnostics[j].energy)
          << " ED=" << io::format_double(r.diagnostics[j].exact_energy)
          << " F=" << io::format_double(r.diagnostics[j].fidelity) << '\n';
    }
    runs.push_back(cvqe_run_json(r, pfile));
  }
  io::write_json(c.out_dir / "cvqe_manifest.json",
                 {{"lattice", io::to_json(c.lattice)},
                  {"exact_energies", io::numbers(ref.energies)},
                  {"runs", runs}});
  return artifacts;
}

std::vector<std::string> run_dispersion(const RunConfig& c, std::ostream& log) {
  std::vector<QuantumState> states;
  std::vector<double> energies;
  if (c.dispersion.backend == BackendKind::exact) {
    SpectrumResult s = reference_spectrum(c.lattice, c.dispersion.n_states);
    states = std::move(s.states);
    energies = std::move(s.energies);
  } else {
    CvqeResult r = solve(c, config_layout(c), log);
    states = std::move(r.eigen_states);
    energies = std::move(r.energies);
  }
  const auto rows = spectrum_observables(states, energies, c.lattice);
  io::CsvTable t;
  t.header = {"index", "energy", "excitation", "momentum_sq_over_x2", "sr_re", "sr_im", "sr_arg",
              "branch"};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.index), io::format_double(r.energy),
                      io::format_double(r.energy - rows.front().energy),
                      io::format_double(r.momentum_sq_over_x2), io::format_double(r.sr.real()),
                      io::format_double(r.sr.imag()), io::format_double(std::arg(r.sr)), r.branch});
  }
  io::write_csv(c.out_dir / "dispersion.csv", t);
  return {"dispersion.csv"};
}

struct ShiftJob {
  std::size_t n_sites;
  double x;
  double bg_field;
  MassShiftMethod method;
};

std::vector<std::string> run_massshift(const RunConfig& c, std::ostream& log) {
  const auto& m = c.massshift;
  GapBackend backend;
  if (m.backend == "cvqe") {
    backend.kind = BackendKind::cvqe;
    backend.layout = config_layout(c);
    backend.stages = c.cvqe.stages;
    backend.seeds = c.cvqe.seeds;
    backend.rng_seed = c.seed;
    backend.init_scale = c.cvqe.init_scale;
    backend.threads = c.threads;
  }
  const bool synthetic = m.backend == "synthetic";
  const std::vector<double> xs = m.x_values.empty() ? std::vector<double>{c.lattice.x} : m.x_values;
  const std::vector<double> ls =
      m.bg_fields.empty() ? std::vector<double>{c.lattice.bg_field} : m.bg_fields;
  const std::vector<std::size_t> sizes =
      m.sizes.empty() ? std::vector<std::size_t>{c.lattice.n_sites} : m.sizes;

  std::vector<ShiftJob> jobs;
  for (std::size_t n : sizes) {
    for (double x : xs) {
      for (double l : ls) {
        for (auto method : m.methods) jobs.push_back({n, x, l, method});
      }
    }
  }
  auto request_for = [&](const ShiftJob& job) {
    MassShiftRequest r;
    r.params = c.lattice;
    r.params.n_sites = job.n_sites;
    r.params.x = job.x;
    r.params.bg_field = job.bg_field;
    r.params.penalty_strength = backend.kind == BackendKind::cvqe ? c.lattice.penalty_strength : 0.0;
    r.method = job.method;
    r.efd_r = m.efd_r;
    r.bracket_lo = m.bracket_lo;
    r.bracket_hi = m.bracket_hi;
    r.tolerance = m.tolerance;
    r.backend = backend;
    r.backend.layout.n_physical = job.n_sites;
    return r;
  };
  std::vector<MassShiftResult> shifts(jobs.size());
  // Parallel over jobs only for the exact backend; the cvqe backend already
  // uses the worker pool internally.
  const std::size_t outer = backend.kind == BackendKind::exact ? c.threads : 1;
  detail::parallel_for(jobs.size(), outer, [&](std::size_t i) {
    if (synthetic) {
      const double root = m.synthetic_root;
      shifts[i] = bisect([root](double v) { return v - root; }, m.bracket_lo, m.bracket_hi,
                         m.tolerance);
    } else {
      shifts[i] = mass_shift(request_for(jobs[i]));
    }
  });

  // Grid scans of the gap residual.
  struct GridJob {
    double x, bg_field, mass;
  };
  std::vector<GridJob> grid_jobs;
  if (!synthetic) {
    for (double x : xs) {
      for (double l : ls) {
        for (double g : m.grid) grid_jobs.push_back({x, l, g});
      }
    }
  }
  std::vector<double> grid_values(grid_jobs.size());
  detail::parallel_for(grid_jobs.size(), outer, [&](std::size_t i) {
    MassShiftRequest r = request_for({c.lattice.n_sites, grid_jobs[i].x, grid_jobs[i].bg_field,
                                      MassShiftMethod::gap});
    grid_values[i] = mass_shift_objective(r, grid_jobs[i].mass);
  });

  io::CsvTable t;
  t.header = {"kind", "method", "n_sites", "x", "bg_field", "iteration", "mass_lat", "objective"};
  json shift_json = json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    const auto& s = shifts[i];
    const std::string method = synthetic ? "synthetic" : to_string(j.method);
    for (const auto& step : s.trace) {
      t.rows.push_back({"bisection", method, std::to_string(j.n_sites), io::format_double(j.x),
                        io::format_double(j.bg_field), std::to_string(step.iteration),
                        io::format_double(step.mass), io::format_double(step.objective)});
    }
    log << method << " N=" << j.n_sites << " x=" << j.x << " l=" << j.bg_field
        << ": m_s/g = " << io::format_double(s.mass_shift) << " (" << s.iterations
        << " iterations)\n";
    shift_json.push_back({{"method", method},
                          {"n_sites", j.n_sites},
                          {"x", io::number(j.x)},
                          {"bg_field", io::number(j.bg_field)},
                          {"mass_shift", io::number(s.mass_shift)},
                          {"root", io::number(s.root)},
                          {"root_objective", io::number(s.root_objective)},
                          {"interval", s.interval},
                          {"iterations", s.iterations}});
  }
  json fits = json::array();
  for (std::size_t i = 0; i < grid_jobs.size(); ++i) {
    const auto& g = grid_jobs[i];
    t.rows.push_back({"grid", "gap", std::to_string(c.lattice.n_sites), io::format_double(g.x),
                      io::format_double(g.bg_field), "0", io::format_double(g.mass),
                      io::format_double(grid_values[i])});
  }
  for (std::size_t start = 0; start + m.grid.size() <= grid_jobs.size() && !m.grid.empty();
       start += m.grid.size()) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < m.grid.size(); ++k) {
      pts.emplace_back(grid_jobs[start + k].mass, grid_values[start + k]);
    }
    const FitResult f = extrapolate(pts, FitModel::linear);
    fits.push_back({{"x", io::number(grid_jobs[start].x)},
                    {"bg_field", io::number(grid_jobs[start].bg_field)},
                    {"intercept", io::number(f.intercept)},
                    {"slope", io::number(f.coefficients[1])},
                    {"r_squared", io::number(f.r_squared)},
                    {"residual_norm", io::number(f.residual_norm)}});
    log << "grid x=" << grid_jobs[start].x << " l=" << grid_jobs[start].bg_field
        << ": R^2 = " << io::format_double(f.r_squared) << '\n';
  }
  // Finite-size extrapolation in sqrt(x)/N per (x, l, method).
  json extrapolations = json::array();
  if (!synthetic && sizes.size() > 1) {
    std::map<std::tuple<double, double, int>, std::vector<std::pair<double, double>>> series;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const auto& j = jobs[i];
      series[{j.x, j.bg_field, static_cast<int>(j.method)}].emplace_back(
          std::sqrt(j.x) / static_cast<double>(j.n_sites), shifts[i].mass_shift);
    }
    for (const auto& [key, pts] : series) {
      const FitModel model = pts.size() >= 4 ? m.fit_model : FitModel::linear;
      const FitResult f = extrapolate(pts, model);
      extrapolations.push_back({{"x", io::number(std::get<0>(key))},
                                {"bg_field", io::number(std::get<1>(key))},
                                {"method", to_string(static_cast<MassShiftMethod>(std::get<2>(key)))},
                                {"model", to_string(model)},
                                {"intercept", io::number(f.intercept)},
                                {"coefficients", io::numbers(f.coefficients)},
                                {"residual_norm", io::number(f.residual_norm)}});
    }
  }
  io::write_csv(c.out_dir / "massshift.csv", t);
  io::write_json(c.out_dir / "massshift_summary.json",
                 {{"backend", m.backend},
                  {"shifts", shift_json},
                  {"grid_fits", fits},
                  {"extrapolations", extrapolations}});
  return {"massshift.csv", "massshift_summary.json"};
}

std::vector<std::string> run_zne(const RunConfig& c, std::ostream& log) {
  const CircuitLayout layout = config_layout(c);
  CvqeResult r = solve(c, layout, log);
  const std::size_t k = r.energies.size();
  const SpectrumResult ref = reference_spectrum(c.lattice, k);
  compare_to_reference(r, ref);
  const auto observables = standard_observables(c.lattice);

  std::vector<std::vector<double>> reference(observables.size());
  for (std::size_t o = 0; o < observables.size(); ++o) {
    for (std::size_t j = 0; j < k; ++j) {
      reference[o].push_back(expectation(ref.states[j], observables[o].op).real());
    }
  }
  // Folding must not change the noiseless state.
  double fold_error = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const Circuit base = to_elementary(inference_circuit(layout, r.best_params, r.rotation, j), c.so8);
    QuantumState a(base.n_qubits), b(base.n_qubits);
    apply_circuit(a, base);
    apply_circuit(b, fold_circuit(base, c.zne.levels.back()));
    for (std::size_t i = 0; i < a.dim(); ++i) fold_error = std::max(fold_error, std::abs(a[i] - b[i]));
  }

  InferenceOptions opt;
  opt.noise = c.zne.noise;
  opt.shots = c.zne.shots;
  opt.exact_expectations = c.zne.exact_expectations;
  opt.levels = c.zne.levels;
  opt.mode = c.zne.mode;
  opt.decompose = c.zne.decompose;

  std::vector<std::vector<QuantityResult>> reps(static_cast<std::size_t>(c.zne.repetitions));
  detail::parallel_for(reps.size(), c.threads, [&](std::size_t i) {
    InferenceOptions o = opt;
    o.seed = c.seed + i;
    reps[i] = inference_run(layout, r.best_params, r.rotation, observables, o);
  });

  json rep_json = json::array();
  std::vector<int> improved(observables.size() * k, 0);
  std::vector<double> mean_intercept(observables.size() * k, 0.0);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    json qs = json::array();
    for (std::size_t q = 0; q < reps[i].size(); ++q) {
      const auto& res = reps[i][q];
      const std::size_t o = q / k;
      const double refv = reference[o][res.state];
      if (std::abs(res.intercept - refv) < std::abs(res.values.front() - refv)) ++improved[q];
      mean_intercept[q] += res.intercept / static_cast<double>(reps.size());
      qs.push_back({{"name", res.name},
                    {"state", res.state},
                    {"levels", res.levels},
                    {"values", io::numbers(res.values)},
                    {"std_errors", io::numbers(res.std_errors)},
                    {"slope", io::number(res.slope)},
                    {"intercept", io::number(res.intercept)},
                    {"reference", io::number(refv)}});
    }
    rep_json.push_back({{"seed", c.seed + i}, {"quantities", qs}});
  }
  json summary = json::array();
  for (std::size_t q = 0; q < improved.size(); ++q) {
    const std::size_t o = q / k, j = q % k;
    const double frac = static_cast<double>(improved[q]) / static_cast<double>(reps.size());
    summary.push_back({{"name", observables[o].name},
                       {"state", j},
                       {"reference", io::number(reference[o][j])},
                       {"mean_intercept", io::number(mean_intercept[q])},
                       {"improved_fraction", io::number(frac)}});
    log << observables[o].name << "[" << j << "]: ED=" << io::format_double(reference[o][j])
        << " mean ZNE=" << io::format_double(mean_intercept[q]) << " improved " << improved[q]
        << "/" << reps.size() << '\n';
  }
  json states = json::array();
  for (const auto& d : r.diagnostics) states.push_back(diagnostics_json(d));
  io::write_json(c.out_dir / "zne_results.json",
                 {{"lattice", io::to_json(c.lattice)},
                  {"layout", io::to_json(layout)},
                  {"noise", {{"p1", c.zne.noise.p1}, {"p2", c.zne.noise.p2}}},
                  {"shots", c.zne.shots},
                  {"exact_expectations", c.zne.exact_expectations},
                  {"mode", to_string(c.zne.mode)},
                  {"levels", c.zne.levels},
                  {"fold_error", fold_error},
                  {"subspace_h", io::to_json(r.subspace_h)},
                  {"rotation", io::to_json(r.rotation)},
                  {"states", states},
                  {"summary", summary},
                  {"repetitions", rep_json}});
  return {"zne_results.json"};
}

std::vector<std::string> run_decompose(const RunConfig& c, std::ostream& log) {
  const CircuitLayout layout = config_layout(c);
  const CvqeResult r = solve(c, layout, log);
  Circuit full = purification_circuit(layout.n_physical, layout.n_ancilla);
  full.append(build_circuit(layout, r.best_params));
  const Circuit elementary = to_elementary(full, c.so8);
  QuantumState a(full.n_qubits), b(full.n_qubits);
  apply_circuit(a, full);
  apply_circuit(b, elementary);
  const double f = fidelity(a, b);
  std::map<std::string, std::size_t> counts;
  for (const auto& g : elementary.gates) ++counts[g.label()];
  json cj = json::object();
  for (const auto& [label, n] : counts) cj[label] = n;
  log << "elementary gates: " << elementary.gates.size() << ", state fidelity "
      << io::format_double(f) << '\n';
  io::save_parameters(c.out_dir / "params.bin", r.best_params);
  io::write_json(c.out_dir / "decomposition.json",
                 {{"layout", io::to_json(layout)},
                  {"parametric_gates", full.gates.size()},
                  {"elementary_gates", elementary.gates.size()},
                  {"counts", cj},
                  {"state_fidelity", io::number(f)},
                  {"circuit", io::to_json(elementary)}});
  return {"decomposition.json", "params.bin"};
}

}  // namespace

void run(const RunConfig& config, std::ostream& log) {
  config.validate();
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec || !fs::is_directory(config.out_dir)) {
    throw InvalidArgument("cannot create output directory " + config.out_dir.string());
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> artifacts;
  if (config.command == "ed") {
    artifacts = run_ed(config, log);
  } else if (config.command == "cvqe") {
    artifacts = run_cvqe(config, log);
  } else if (config.command == "dispersion") {
    artifacts = run_dispersion(config, log);
  } else if (config.command == "massshift") {
    artifacts = run_massshift(config, log);
  } else if (config.command == "zne") {
    artifacts = run_zne(config, log);
  } else {
    artifacts = run_decompose(config, log);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(config, artifacts, seconds);
}

}  // namespace scvqe
