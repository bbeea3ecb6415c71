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

#include "scvqe/config.hpp"

#include "scvqe/error.hpp"

namespace scvqe {
namespace {

using io::json;

void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                const std::string& context) {
  if (!j.is_object()) throw InvalidArgument(context + ": expected an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || item.key() == a;
    if (!ok) throw InvalidArgument(context + ": unknown key '" + item.key() + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& target, const std::string& context) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument(context + "." + key + ": wrong type");
  }
}

LatticeParams schwinger(std::size_t n, double x, double m, double l, double penalty) {
  LatticeParams p;
  p.n_sites = n;
  p.x = x;
  p.mass_lat = m;
  p.bg_field = l;
  p.penalty_strength = penalty;
  return p;
}

CircuitLayout brickwall(std::size_t n_ancilla, std::size_t layers) {
  CircuitLayout l;
  l.kind = LayoutKind::brickwall_so4;
  l.n_ancilla = n_ancilla;
  l.n_layers = layers;
  return l;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"ed", "cvqe", "dispersion", "massshift", "zne",
                                              "decompose"};
  return names;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"table2", "fig5", "fig6-desk", "fig10-desk",
                                              "zne-demo"};
  return names;
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.preset = name;
  if (name == "table2" || name == "zne-demo") {
    // The penalty strength equals N here.
    c.command = name == "table2" ? "ed" : "zne";
    c.lattice = schwinger(4, 0.16, 0.333, 0.5, 4.0);
    c.cvqe.layout = brickwall(1, 2);
    if (name == "zne-demo") {
      c.zne.noise.p2 = 2e-3;
      c.zne.shots = 100000;
      c.zne.levels = {1, 3, 5};
      c.zne.repetitions = 20;
    }
  } else if (name == "fig5") {
    c.command = "cvqe";
    c.lattice = schwinger(8, 0.64, 0.125, 0.0, 8.0);
    c.cvqe.layout = brickwall(1, 7);
    c.cvqe.layer_sweep = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  } else if (name == "fig6-desk") {
    c.command = "dispersion";
    c.lattice = schwinger(16, 2.56, 0.125, 0.0, 0.0);
    c.dispersion.backend = BackendKind::exact;
    c.dispersion.n_states = 8;
  } else if (name == "fig10-desk") {
    c.command = "massshift";
    c.lattice = schwinger(12, 1.0, 0.0, 0.0, 0.0);
    c.massshift.methods = {};
    c.massshift.x_values = {1.0};
    c.massshift.bg_fields = {0.0, 0.08};
    c.massshift.grid = {-0.16, -0.12, -0.08, -0.04, 0.0};
  } else {
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown preset '" + name + "'; available: " + list);
  }
  c.cvqe.layout.n_physical = c.lattice.n_sites;
  return c;
}

void RunConfig::validate() const {
  bool known = false;
  for (const auto& n : command_names()) known = known || n == command;
  detail::require(known, "unknown command '" + command + "'");
  lattice.validate();
  detail::require(threads >= 1, "threads must be >= 1");
  detail::require(ed.n_states >= 1, "ed.n_states must be >= 1");
  CircuitLayout l = cvqe.layout;
  l.n_physical = lattice.n_sites;
  l.validate();
  detail::require(!cvqe.stages.empty(), "cvqe.stages must not be empty");
  for (const auto& s : cvqe.stages) {
    detail::require(s.iterations >= 0, "stage iterations must be >= 0");
    detail::require(s.penalty_scale >= 0.0, "stage penalty_scale must be >= 0");
  }
  detail::require(cvqe.seeds >= 1, "cvqe.seeds must be >= 1");
  detail::require(cvqe.init_scale > 0.0, "cvqe.init_scale must be > 0");
  for (auto L : cvqe.layer_sweep) detail::require(L >= 1, "layer_sweep entries must be >= 1");
  detail::require(dispersion.n_states >= 1, "dispersion.n_states must be >= 1");
  const auto& m = massshift;
  detail::require(m.backend == "exact" || m.backend == "cvqe" || m.backend == "synthetic",
                  "massshift.backend must be exact, cvqe or synthetic");
  detail::require(m.bracket_lo < m.bracket_hi, "massshift bracket must satisfy lo < hi");
  detail::require(m.tolerance > 0.0, "massshift.tolerance must be positive");
  zne.noise.validate();
  detail::require(zne.shots >= 1, "zne.shots must be >= 1");
  detail::require(zne.repetitions >= 1, "zne.repetitions must be >= 1");
  for (int lv : zne.levels) detail::require(lv >= 1 && lv % 2 == 1, "zne levels must be odd");
}

json to_json(const RunConfig& c) {
  json stages = json::array();
  for (const auto& s : c.cvqe.stages) stages.push_back(io::to_json(s));
  json layout = io::to_json(c.cvqe.layout);
  layout.erase("n_physical");
  json methods = json::array();
  for (auto m : c.massshift.methods) methods.push_back(to_string(m));
  return {
      {"command", c.command},
      {"preset", c.preset},
      {"seed", c.seed},
      {"threads", c.threads},
      {"out", c.out_dir.string()},
      {"lattice", io::to_json(c.lattice)},
      {"ed", {{"n_states", c.ed.n_states}, {"sector", to_string(c.ed.sector)}}},
      {"cvqe",
       {{"layout", layout},
        {"stages", stages},
        {"seeds", c.cvqe.seeds},
        {"init_scale", io::number(c.cvqe.init_scale)},
        {"warm_noise", io::number(c.cvqe.warm_noise)},
        {"gradient_tolerance", io::number(c.cvqe.gradient_tolerance)},
        {"layer_sweep", c.cvqe.layer_sweep},
        {"params_file", c.cvqe.params_file}}},
      {"dispersion",
       {{"backend", to_string(c.dispersion.backend)}, {"n_states", c.dispersion.n_states}}},
      {"massshift",
       {{"backend", c.massshift.backend},
        {"synthetic_root", io::number(c.massshift.synthetic_root)},
        {"methods", methods},
        {"efd_r", c.massshift.efd_r},
        {"bracket", io::numbers(std::vector<double>{c.massshift.bracket_lo, c.massshift.bracket_hi})},
        {"tolerance", c.massshift.tolerance},
        {"x_values", io::numbers(c.massshift.x_values)},
        {"bg_fields", io::numbers(c.massshift.bg_fields)},
        {"grid", io::numbers(c.massshift.grid)},
        {"sizes", c.massshift.sizes},
        {"fit_model", to_string(c.massshift.fit_model)}}},
      {"zne",
       {{"p1", c.zne.noise.p1},
        {"p2", c.zne.noise.p2},
        {"shots", c.zne.shots},
        {"exact_expectations", c.zne.exact_expectations},
        {"levels", c.zne.levels},
        {"mode", to_string(c.zne.mode)},
        {"decompose", c.zne.decompose},
        {"repetitions", c.zne.repetitions}}},
      {"so8",
       {{"max_layers", c.so8.max_layers},
        {"threshold", c.so8.threshold},
        {"restarts", c.so8.restarts},
        {"max_iterations", c.so8.max_iterations},
        {"seed", c.so8.seed}}},
  };
}

RunConfig config_from_json(const json& j, RunConfig c) {
  check_keys(j, {"command", "preset", "seed", "threads", "out", "lattice", "ed", "cvqe",
                 "dispersion", "massshift", "zne", "so8"},
             "config");
  if (j.contains("preset")) {
    std::string name;
    read(j, "preset", name, "config");
    if (!name.empty() && name != c.preset) c = preset(name);
  }
  read(j, "command", c.command, "config");
  read(j, "seed", c.seed, "config");
  read(j, "threads", c.threads, "config");
  if (j.contains("out")) {
    std::string out;
    read(j, "out", out, "config");
    c.out_dir = out;
  }
  if (j.contains("lattice")) c.lattice = io::lattice_from_json(j.at("lattice"), c.lattice);
  if (j.contains("ed")) {
    const auto& e = j.at("ed");
    check_keys(e, {"n_states", "sector"}, "ed");
    read(e, "n_states", c.ed.n_states, "ed");
    if (e.contains("sector")) {
      std::string s;
      read(e, "sector", s, "ed");
      c.ed.sector = charge_sector_from_string(s);
    }
  }
  if (j.contains("cvqe")) {
    const auto& v = j.at("cvqe");
    check_keys(v, {"layout", "stages", "seeds", "init_scale", "warm_noise", "gradient_tolerance",
                   "layer_sweep", "params_file"},
               "cvqe");
    if (v.contains("layout")) c.cvqe.layout = io::layout_from_json(v.at("layout"), c.cvqe.layout);
    if (v.contains("stages")) {
      if (!v.at("stages").is_array()) throw InvalidArgument("cvqe.stages: expected an array");
      c.cvqe.stages.clear();
      for (const auto& s : v.at("stages")) c.cvqe.stages.push_back(io::stage_from_json(s));
    }
    read(v, "seeds", c.cvqe.seeds, "cvqe");
    read(v, "init_scale", c.cvqe.init_scale, "cvqe");
    read(v, "warm_noise", c.cvqe.warm_noise, "cvqe");
    read(v, "gradient_tolerance", c.cvqe.gradient_tolerance, "cvqe");
    read(v, "layer_sweep", c.cvqe.layer_sweep, "cvqe");
    read(v, "params_file", c.cvqe.params_file, "cvqe");
  }
  if (j.contains("dispersion")) {
    const auto& d = j.at("dispersion");
    check_keys(d, {"backend", "n_states"}, "dispersion");
    if (d.contains("backend")) {
      std::string b;
      read(d, "backend", b, "dispersion");
      c.dispersion.backend = backend_kind_from_string(b);
    }
    read(d, "n_states", c.dispersion.n_states, "dispersion");
  }
  if (j.contains("massshift")) {
    const auto& m = j.at("massshift");
    check_keys(m, {"backend", "synthetic_root", "methods", "efd_r", "bracket", "tolerance",
                   "x_values", "bg_fields", "grid", "sizes", "fit_model"},
               "massshift");
    auto& s = c.massshift;
    read(m, "backend", s.backend, "massshift");
    read(m, "synthetic_root", s.synthetic_root, "massshift");
    if (m.contains("methods")) {
      std::vector<std::string> names;
      read(m, "methods", names, "massshift");
      s.methods.clear();
      for (const auto& n : names) s.methods.push_back(mass_shift_method_from_string(n));
    }
    read(m, "efd_r", s.efd_r, "massshift");
    if (m.contains("bracket")) {
      std::vector<double> b;
      read(m, "bracket", b, "massshift");
      if (b.size() != 2) throw InvalidArgument("massshift.bracket: expected [lo, hi]");
      s.bracket_lo = b[0];
      s.bracket_hi = b[1];
    }
    read(m, "tolerance", s.tolerance, "massshift");
    read(m, "x_values", s.x_values, "massshift");
    read(m, "bg_fields", s.bg_fields, "massshift");
    read(m, "grid", s.grid, "massshift");
    read(m, "sizes", s.sizes, "massshift");
    if (m.contains("fit_model")) {
      std::string f;
      read(m, "fit_model", f, "massshift");
      if (f == "linear") {
        s.fit_model = FitModel::linear;
      } else if (f == "cubic_poly") {
        s.fit_model = FitModel::cubic_poly;
      } else {
        throw InvalidArgument("massshift.fit_model must be linear or cubic_poly");
      }
    }
  }
  if (j.contains("zne")) {
    const auto& z = j.at("zne");
    check_keys(z, {"p1", "p2", "shots", "exact_expectations", "levels", "mode", "decompose",
                   "repetitions"},
               "zne");
    read(z, "p1", c.zne.noise.p1, "zne");
    read(z, "p2", c.zne.noise.p2, "zne");
    read(z, "shots", c.zne.shots, "zne");
    read(z, "exact_expectations", c.zne.exact_expectations, "zne");
    read(z, "levels", c.zne.levels, "zne");
    if (z.contains("mode")) {
      std::string m;
      read(z, "mode", m, "zne");
      c.zne.mode = inference_mode_from_string(m);
    }
    read(z, "decompose", c.zne.decompose, "zne");
    read(z, "repetitions", c.zne.repetitions, "zne");
  }
  if (j.contains("so8")) {
    const auto& s = j.at("so8");
    check_keys(s, {"max_layers", "threshold", "restarts", "max_iterations", "seed"}, "so8");
    read(s, "max_layers", c.so8.max_layers, "so8");
    read(s, "threshold", c.so8.threshold, "so8");
    read(s, "restarts", c.so8.restarts, "so8");
    read(s, "max_iterations", c.so8.max_iterations, "so8");
    read(s, "seed", c.so8.seed, "so8");
  }
  c.cvqe.layout.n_physical = c.lattice.n_sites;
  return c;
}

}  // namespace scvqe
