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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "scvqe/ansatz.hpp"
#include "scvqe/cvqe.hpp"
#include "scvqe/model.hpp"
#include "scvqe/reference.hpp"
#include "scvqe/simulator.hpp"

namespace scvqe::io {

using json = nlohmann::ordered_json;

/// 10 significant digits.
std::string format_double(double v);

/// FNV-1a, used for config fingerprints.
std::uint64_t fnv1a(std::string_view text);
std::string hex64(std::uint64_t v);

json to_json(const LatticeParams& p);
LatticeParams lattice_from_json(const json& j, LatticeParams base = {});
json to_json(const CircuitLayout& l);
CircuitLayout layout_from_json(const json& j, CircuitLayout base = {});
json to_json(const Stage& s);
Stage stage_from_json(const json& j);

/// {"re": [[...]], "im": [[...]]}, row-major.
json to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd complex_matrix_from_json(const json& j);

/// Gate records carry the label, targets, free parameters and the matrix,
/// so a circuit reloads without knowing how each gate was built.
json to_json(const Circuit& c);
Circuit circuit_from_json(const json& j);

/// JSON numbers rounded to 10 significant digits.
json number(double v);
json numbers(std::span<const double> v);

void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t column(std::string_view name) const;
};
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

CsvTable spectrum_table(const std::vector<SpectrumRow>& rows);
void write_spectrum_csv(const std::filesystem::path& path, const std::vector<SpectrumRow>& rows);
std::vector<SpectrumRow> read_spectrum_csv(const std::filesystem::path& path);

/// Binary checkpoint: magic, count, little-endian doubles.
void save_parameters(const std::filesystem::path& path, std::span<const double> params);
std::vector<double> load_parameters(const std::filesystem::path& path);

}  // namespace scvqe::io
