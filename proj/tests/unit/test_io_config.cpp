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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scvqe/config.hpp"
#include "scvqe/error.hpp"
#include "scvqe/io.hpp"

namespace scvqe {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("scvqe_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

TEST(Config, Table2Preset) {
  const RunConfig c = preset("table2");
  EXPECT_EQ(c.lattice.n_sites, 4u);
  EXPECT_DOUBLE_EQ(c.lattice.x, 0.16);
  EXPECT_DOUBLE_EQ(c.lattice.mass_lat, 0.333);
  EXPECT_DOUBLE_EQ(c.lattice.bg_field, 0.5);
  EXPECT_EQ(c.cvqe.layout.n_ancilla, 1u);
  EXPECT_EQ(c.cvqe.layout.n_layers, 2u);
  EXPECT_EQ(c.cvqe.layout.kind, LayoutKind::brickwall_so4);
}

TEST(Config, Fig5Preset) {
  const RunConfig c = preset("fig5");
  EXPECT_EQ(c.lattice.n_sites, 8u);
  EXPECT_DOUBLE_EQ(c.lattice.x, 0.64);
  EXPECT_DOUBLE_EQ(c.lattice.mass_lat, 0.125);
  EXPECT_DOUBLE_EQ(c.lattice.bg_field, 0.0);
  EXPECT_DOUBLE_EQ(c.lattice.penalty_strength, 8.0);
  EXPECT_EQ(c.cvqe.layer_sweep.front(), 2u);
  EXPECT_EQ(c.cvqe.layer_sweep.back(), 10u);
}

TEST(Config, UnknownPresetListsAvailable) {
  try {
    preset("fig99");
    FAIL();
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    for (const auto& n : preset_names()) EXPECT_NE(msg.find(n), std::string::npos);
  }
}

TEST(Config, JsonRoundTripAndStrictKeys) {
  for (const auto& name : preset_names()) {
    const RunConfig c = preset(name);
    const RunConfig d = config_from_json(to_json(c));
    EXPECT_EQ(to_json(c).dump(), to_json(d).dump()) << name;
  }
  EXPECT_THROW(config_from_json(io::json::parse(R"({"lattice": {"nsites": 4}})")), InvalidArgument);
  EXPECT_THROW(config_from_json(io::json::parse(R"({"bogus": 1})")), InvalidArgument);
  EXPECT_THROW(config_from_json(io::json::parse(R"({"lattice": {"x": "big"}})")), InvalidArgument);
  const RunConfig over = config_from_json(io::json::parse(R"({"lattice": {"x": 0.25}})"), preset("table2"));
  EXPECT_DOUBLE_EQ(over.lattice.x, 0.25);
  EXPECT_DOUBLE_EQ(over.lattice.mass_lat, 0.333);
}

TEST(Io, FormatsTenSignificantDigits) {
  EXPECT_EQ(io::format_double(0.68721502101234), "0.687215021");
  EXPECT_EQ(io::format_double(1.3253490258), "1.325349026");
  EXPECT_EQ(io::format_double(std::nan("")), "nan");
}

TEST(Io, ParameterCheckpointRoundTrip) {
  const fs::path dir = scratch("params");
  const std::vector<double> p{0.1, -2.5, 1e-300, 3.14159265358979};
  io::save_parameters(dir / "p.bin", p);
  EXPECT_EQ(io::load_parameters(dir / "p.bin"), p);
  std::ofstream(dir / "junk.bin") << "not a checkpoint";
  EXPECT_THROW(io::load_parameters(dir / "junk.bin"), FormatError);
}

TEST(Io, CircuitJsonRoundTrip) {
  Circuit c{3, {gates::hadamard(2), gates::cnot(2, 0), gates::rx(1, 0.3)}};
  const Circuit d = io::circuit_from_json(io::to_json(c));
  ASSERT_EQ(d.gates.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(d.gates[i].label(), c.gates[i].label());
    EXPECT_EQ(d.gates[i].targets(), c.gates[i].targets());
    EXPECT_LT((d.gates[i].matrix() - c.gates[i].matrix()).norm(), 1e-15);
  }
}

TEST(Run, EdWritesTable2SpectrumDeterministically) {
  const fs::path a = scratch("ed_a"), b = scratch("ed_b");
  RunConfig c = preset("table2");
  c.command = "ed";
  c.out_dir = a;
  std::ostringstream log;
  run(c, log);
  c.out_dir = b;
  run(c, log);
  const std::string text = slurp(a / "spectrum.csv");
  EXPECT_NE(text.find("0.687215021"), std::string::npos);
  EXPECT_NE(text.find("1.325349026"), std::string::npos);
  EXPECT_EQ(text, slurp(b / "spectrum.csv"));
  const auto rows = io::read_spectrum_csv(a / "spectrum.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0].energy, 0.6872150210, 1e-9);
  const auto manifest = io::read_json(a / "manifest.json");
  EXPECT_EQ(manifest.at("config_hash").get<std::string>().size(), 16u);
}

TEST(Run, SyntheticMassShift) {
  RunConfig c = preset("table2");
  c.command = "massshift";
  c.massshift.backend = "synthetic";
  c.massshift.synthetic_root = -0.05;
  c.out_dir = scratch("ms");
  std::ostringstream log;
  run(c, log);
  const auto summary = io::read_json(c.out_dir / "massshift_summary.json");
  EXPECT_NEAR(summary.at("shifts").at(0).at("mass_shift").get<double>(), 0.05, 1e-8);
  const io::CsvTable t = io::read_csv(c.out_dir / "massshift.csv");
  EXPECT_GE(t.rows.size(), 3u);
}

TEST(Run, CvqeManifestRoundTrips) {
  RunConfig c = preset("table2");
  c.command = "cvqe";
  c.cvqe.seeds = 3;
  c.out_dir = scratch("cvqe");
  std::ostringstream log;
  run(c, log);
  const auto m = io::read_json(c.out_dir / "cvqe_manifest.json");
  const auto& run0 = m.at("runs").at(0);
  for (const auto& s : run0.at("states")) EXPECT_GE(s.at("fidelity").get<double>(), 0.9999);
  const auto params = io::load_parameters(c.out_dir / run0.at("params_file").get<std::string>());
  EXPECT_EQ(params.size(), run0.at("parameter_count").get<std::size_t>());
  const auto rot = io::complex_matrix_from_json(run0.at("rotation"));
  EXPECT_EQ(rot.rows(), 2);
}

#ifdef SCVQE_CLI_PATH
int cli(const std::string& args) {
  const std::string cmd = std::string(SCVQE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  EXPECT_EQ(cli("ed --preset table2 --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "spectrum.csv"));
  EXPECT_EQ(cli("ed --preset nope --out " + dir.string()), 2);
  std::ofstream(dir / "bad.json") << R"({"lattice": {"n_sites": 5}})";
  EXPECT_EQ(cli("ed --config " + (dir / "bad.json").string() + " --out " + dir.string()), 2);
  std::ofstream(dir / "nosign.json") << R"({"massshift": {"backend": "synthetic", "synthetic_root": 1.0}})";
  EXPECT_EQ(cli("massshift --config " + (dir / "nosign.json").string() + " --out " + dir.string()), 3);
  EXPECT_EQ(cli("frobnicate"), 2);
}
#endif

}  // namespace
}  // namespace scvqe
