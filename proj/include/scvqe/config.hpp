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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "scvqe/ansatz.hpp"
#include "scvqe/cvqe.hpp"
#include "scvqe/io.hpp"
#include "scvqe/model.hpp"
#include "scvqe/reference.hpp"
#include "scvqe/renorm.hpp"
#include "scvqe/zne.hpp"

namespace scvqe {

struct EdSettings {
  std::size_t n_states = 2;
  ChargeSector sector = ChargeSector::zero;
};

struct CvqeSettings {
  /// n_physical is taken from the lattice.
  CircuitLayout layout;
  std::vector<Stage> stages{Stage{2000, false, 1.0}};
  int seeds = 11;
  double init_scale = 0.1;
  double warm_noise = 1e-3;
  double gradient_tolerance = 1e-6;
  /// When non-empty, one run per entry overriding layout.n_layers.
  std::vector<std::size_t> layer_sweep;
  /// Skip optimization and load these parameters (zne and decompose).
  std::string params_file;
};

struct DispersionSettings {
  BackendKind backend = BackendKind::exact;
  std::size_t n_states = 8;
};

struct MassShiftSettings {
  /// exact, cvqe, or synthetic (objective m - synthetic_root).
  std::string backend = "exact";
  double synthetic_root = -0.05;
  std::vector<MassShiftMethod> methods{MassShiftMethod::gap};
  int efd_r = 2;
  double bracket_lo = -0.16;
  double bracket_hi = 0.0;
  double tolerance = 1e-8;
  /// Defaults to the lattice values when empty.
  std::vector<double> x_values;
  std::vector<double> bg_fields;
  /// Gap-residual scan points in m_lat/g; a linear fit is reported per (x, l).
  std::vector<double> grid;
  /// Finite-size series: bisection repeated per N and fitted in sqrt(x)/N.
  std::vector<std::size_t> sizes;
  FitModel fit_model = FitModel::cubic_poly;
};

struct ZneSettings {
  NoiseModel noise;
  std::uint64_t shots = 100000;
  bool exact_expectations = false;
  std::vector<int> levels{1, 3, 5};
  InferenceMode mode = InferenceMode::ancilla_free;
  bool decompose = true;
  int repetitions = 1;
};

struct RunConfig {
  std::string command = "ed";
  std::string preset;
  LatticeParams lattice;
  EdSettings ed;
  CvqeSettings cvqe;
  DispersionSettings dispersion;
  MassShiftSettings massshift;
  ZneSettings zne;
  So8Options so8;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::filesystem::path out_dir = ".";

  void validate() const;
};

const std::vector<std::string>& command_names();
const std::vector<std::string>& preset_names();
/// Throws InvalidArgument listing the available presets.
RunConfig preset(const std::string& name);

io::json to_json(const RunConfig& config);
/// Applies the keys present in `j` on top of `base`; unknown keys are errors.
RunConfig config_from_json(const io::json& j, RunConfig base = {});

/// Executes config.command, writing artifacts under config.out_dir.
void run(const RunConfig& config, std::ostream& log);

}  // namespace scvqe
