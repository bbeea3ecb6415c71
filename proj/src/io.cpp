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

#include "scvqe/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "scvqe/error.hpp"

namespace scvqe::io {
namespace {

constexpr std::uint64_t kParamMagic = 0x314D524150435353ULL;  // "SSCPARM1"

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
T get(const json& j, const char* key, T fallback, const std::string& context) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument(context + "." + key + ": wrong type");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw FormatError("trailing characters in number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("not a number: '" + s + "'");
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_double(v));
}

json numbers(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

json to_json(const LatticeParams& p) {
  return {{"n_sites", p.n_sites},
          {"x", number(p.x)},
          {"mass_lat", number(p.mass_lat)},
          {"bg_field", number(p.bg_field)},
          {"penalty_strength", number(p.penalty_strength)}};
}

LatticeParams lattice_from_json(const json& j, LatticeParams p) {
  const std::string ctx = "lattice";
  check_keys(j, {"n_sites", "x", "mass_lat", "bg_field", "penalty_strength"}, ctx);
  p.n_sites = get<std::size_t>(j, "n_sites", p.n_sites, ctx);
  p.x = get<double>(j, "x", p.x, ctx);
  p.mass_lat = get<double>(j, "mass_lat", p.mass_lat, ctx);
  p.bg_field = get<double>(j, "bg_field", p.bg_field, ctx);
  p.penalty_strength = get<double>(j, "penalty_strength", p.penalty_strength, ctx);
  return p;
}

json to_json(const CircuitLayout& l) {
  return {{"kind", to_string(l.kind)},
          {"n_physical", l.n_physical},
          {"n_ancilla", l.n_ancilla},
          {"n_layers", l.n_layers},
          {"translation_symmetric", l.translation_symmetric}};
}

CircuitLayout layout_from_json(const json& j, CircuitLayout l) {
  const std::string ctx = "layout";
  check_keys(j, {"kind", "n_physical", "n_ancilla", "n_layers", "translation_symmetric"}, ctx);
  if (j.contains("kind")) l.kind = layout_kind_from_string(get<std::string>(j, "kind", "", ctx));
  l.n_physical = get<std::size_t>(j, "n_physical", l.n_physical, ctx);
  l.n_ancilla = get<std::size_t>(j, "n_ancilla", l.n_ancilla, ctx);
  l.n_layers = get<std::size_t>(j, "n_layers", l.n_layers, ctx);
  l.translation_symmetric = get<bool>(j, "translation_symmetric", l.translation_symmetric, ctx);
  return l;
}

json to_json(const Stage& s) {
  return {{"iterations", s.iterations},
          {"translation_symmetric", s.translation_symmetric},
          {"penalty_scale", number(s.penalty_scale)}};
}

Stage stage_from_json(const json& j) {
  const std::string ctx = "stage";
  check_keys(j, {"iterations", "translation_symmetric", "penalty_scale"}, ctx);
  Stage s;
  s.iterations = get<int>(j, "iterations", s.iterations, ctx);
  s.translation_symmetric = get<bool>(j, "translation_symmetric", s.translation_symmetric, ctx);
  s.penalty_scale = get<double>(j, "penalty_scale", s.penalty_scale, ctx);
  return s;
}

json to_json(const Eigen::MatrixXcd& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(number(m(r, c).real()));
      ir.push_back(number(m(r, c).imag()));
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return {{"re", re}, {"im", im}};
}

Eigen::MatrixXcd complex_matrix_from_json(const json& j) {
  try {
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    const auto rows = static_cast<Eigen::Index>(re.size());
    const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(re.at(0).size());
    if (im.size() != re.size()) throw FormatError("matrix: re/im shape mismatch");
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto& rr = re.at(static_cast<std::size_t>(r));
      const auto& ir = im.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(rr.size()) != cols || ir.size() != rr.size()) {
        throw FormatError("matrix: ragged rows");
      }
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) = {rr.at(static_cast<std::size_t>(c)).get<double>(),
                   ir.at(static_cast<std::size_t>(c)).get<double>()};
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("matrix: ") + e.what());
  }
}

json to_json(const Circuit& c) {
  json g = json::array();
  for (const GateOp& op : c.gates) {
    json rec = {{"label", op.label()},
                {"targets", op.targets()},
                {"params", numbers(op.params())}};
    // Full precision: a rounded matrix would fail the unitarity check on reload.
    json re = json::array(), im = json::array();
    const auto& m = op.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json rr = json::array(), ir = json::array();
      for (Eigen::Index col = 0; col < m.cols(); ++col) {
        rr.push_back(m(r, col).real());
        ir.push_back(m(r, col).imag());
      }
      re.push_back(rr);
      im.push_back(ir);
    }
    rec["matrix"] = {{"re", re}, {"im", im}};
    g.push_back(rec);
  }
  return {{"n_qubits", c.n_qubits}, {"gates", g}};
}

Circuit circuit_from_json(const json& j) {
  try {
    Circuit c;
    c.n_qubits = j.at("n_qubits").get<std::size_t>();
    for (const auto& rec : j.at("gates")) {
      c.gates.emplace_back(complex_matrix_from_json(rec.at("matrix")),
                           rec.at("targets").get<std::vector<std::size_t>>(),
                           rec.at("label").get<std::string>(),
                           rec.value("params", std::vector<double>{}));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("circuit: ") + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw FormatError("write failed: " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw FormatError("csv: missing column '" + std::string(name) + "'");
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) throw InvalidArgument("csv: row width mismatch");
    line(r);
  }
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw FormatError(path.string() + ": empty csv");
  t.header = split_csv_line(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != t.header.size()) throw FormatError(path.string() + ": row width mismatch");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

CsvTable spectrum_table(const std::vector<SpectrumRow>& rows) {
  CsvTable t;
  t.header = {"index",  "energy",     "momentum_sq_over_x2", "sr_re", "sr_im", "sr_arg",
              "branch", "condensate", "central_link",        "efd"};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.index), format_double(r.energy),
                      format_double(r.momentum_sq_over_x2), format_double(r.sr.real()),
                      format_double(r.sr.imag()), format_double(std::arg(r.sr)), r.branch,
                      format_double(r.condensate), format_double(r.central_link),
                      format_double(r.efd)});
  }
  return t;
}

void write_spectrum_csv(const std::filesystem::path& path, const std::vector<SpectrumRow>& rows) {
  write_csv(path, spectrum_table(rows));
}

std::vector<SpectrumRow> read_spectrum_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  std::vector<SpectrumRow> out;
  for (const auto& r : t.rows) {
    SpectrumRow s;
    s.index = static_cast<std::size_t>(parse_double(r[t.column("index")]));
    s.energy = parse_double(r[t.column("energy")]);
    s.momentum_sq_over_x2 = parse_double(r[t.column("momentum_sq_over_x2")]);
    s.sr = {parse_double(r[t.column("sr_re")]), parse_double(r[t.column("sr_im")])};
    s.branch = r[t.column("branch")];
    s.condensate = parse_double(r[t.column("condensate")]);
    s.central_link = parse_double(r[t.column("central_link")]);
    s.efd = parse_double(r[t.column("efd")]);
    out.push_back(std::move(s));
  }
  return out;
}

void save_parameters(const std::filesystem::path& path, std::span<const double> params) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  detail::write_le<std::uint64_t>(os, kParamMagic);
  detail::write_le<std::uint64_t>(os, params.size());
  for (double v : params) detail::write_le<double>(os, v);
}

std::vector<double> load_parameters(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  const std::string what = "parameter file " + path.string();
  if (detail::read_le<std::uint64_t>(is, what) != kParamMagic) {
    throw FormatError(what + ": bad magic");
  }
  const auto n = detail::read_le<std::uint64_t>(is, what);
  if (n > (std::uint64_t{1} << 28)) throw FormatError(what + ": implausible size");
  std::vector<double> out(n);
  for (auto& v : out) v = detail::read_le<double>(is, what);
  return out;
}

}  // namespace scvqe::io
