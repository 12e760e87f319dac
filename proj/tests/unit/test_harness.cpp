#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "holoqed/classical.hpp"
#include "holoqed/harness.hpp"
#include "holoqed/propagator.hpp"

using namespace holoqed;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("holoqed_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

json small_dmrg(const fs::path& out) {
  return {{"experiment", "dmrg_reference"},
          {"output_dir", out.string()},
          {"model", {{"J", 1.0}, {"h", 1.0}, {"V", 0.0}}},
          {"problem", {{"chain_length", 16}, {"bond_dim", 8}, {"max_r", 3}, {"bulk_bond_dim", 2}}}};
}

int exit_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return harness::exit_code_for(e.code());
  }
  return harness::exit_code::ok;
}

}  // namespace

TEST_CASE("all templates validate") {
  const json t = harness::templates();
  CHECK(t.size() == 5);
  for (const char* name : {"fig1b", "fig1c", "fig2a", "fig2b", "fig2c"}) {
    REQUIRE(t.contains(name));
    const auto v = harness::validate(t.at(name));
    for (const auto& msg : v) MESSAGE(name << ": " << msg);
    CHECK(v.empty());
  }
}

TEST_CASE("unknown experiment is a schema error with exit code 2") {
  const json m{{"experiment", "teleport"}, {"output_dir", "x"}};
  CHECK(mentions(harness::validate(m), "unknown experiment"));
  CHECK(exit_of([&] { harness::run(m); }) == 2);
}

TEST_CASE("cutoff 4 with the default buffer leaves negative usable levels") {
  const json m{{"experiment", "vqe_ideal"}, {"output_dir", "x"}, {"params", {{"cutoff", 4}}}, {"problem", json::object()}};
  CHECK(mentions(harness::validate(m), "Λ′ would be negative"));
  json ok = m;
  ok["problem"]["bond_levels"] = 2;
  CHECK(harness::validate(ok).empty());
}

TEST_CASE("declared step count must match the duration") {
  json m{{"experiment", "vqe_ideal"}, {"output_dir", "x"}, {"problem", {{"tau_ns", 2000}, {"n_ts", 150}}}};
  CHECK(mentions(harness::validate(m), "differs from declared τ"));
  m["problem"]["n_ts"] = 200;
  CHECK(harness::validate(m).empty());
  m["problem"]["tau_ns"] = 2005;
  m["problem"].erase("n_ts");
  CHECK(mentions(harness::validate(m), "whole number"));
}

TEST_CASE("type errors, unknown fields and bad blocks are all reported") {
  const json m{{"experiment", "synthesize_snap"},
               {"output_dir", "x"},
               {"seed", -3},
               {"params", {{"cutoff", "eight"}}},
               {"noise", {{"method", "magic"}}},
               {"problem", {{"depth", 2.5}, {"colour", "red"}, {"target", {{"source", "file"}}}}}};
  const auto v = harness::validate(m);
  CHECK(mentions(v, "seed"));
  CHECK(mentions(v, "params"));
  CHECK(mentions(v, "noise"));
  CHECK(mentions(v, "problem.depth"));
  CHECK(mentions(v, "problem.colour: unknown field"));
  CHECK(mentions(v, "problem.target.path"));
}

TEST_CASE("missing manifest and missing referenced files") {
  CHECK(exit_of([] { harness::load_manifest("/nonexistent/manifest.json"); }) == 3);
  const json m{{"experiment", "sample"}, {"output_dir", "x"}, {"problem", {{"waveform_file", "nowhere.json"}}}};
  CHECK(mentions(harness::validate(m), "no such file"));
}

TEST_CASE("dmrg_reference writes artifacts, CSVs carry the hash, reruns are byte-identical") {
  const fs::path out = scratch("dmrg");
  const json m = small_dmrg(out);
  const auto r = harness::run(m);
  const std::string hash = harness::manifest_hash(m);
  CHECK(hash.size() == 16);
  CHECK(r.results.at("manifest_hash") == hash);
  CHECK(r.results.at("version") == harness::version());
  for (const char* f : {"results.json", "manifest.json", "VERSION", "run.log", "dmrg_sweeps.csv", "local_energy.csv",
                        "correlations.csv", "tensor.json"})
    CHECK(fs::exists(out / f));
  CHECK(json::parse(slurp(out / "manifest.json")) == m);

  const std::string csv = slurp(out / "correlations.csv");
  CHECK(csv.rfind("r,zz,xx,manifest_hash\n", 0) == 0);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == hash);
  }
  CHECK(rows == 3);

  const double e = r.results.at("results").at("energy").get<double>();
  DmrgConfig cfg;
  cfg.chain_length = 16;
  cfg.bond_dim = 8;
  CHECK(std::abs(e - dmrg_ground_state(SpinChainModel{1.0, 1.0, 0.0}, cfg).energy) < 1e-12);

  const fs::path again = scratch("dmrg_again");
  json m2 = m;
  harness::run(m2, ".", again);
  for (const char* f : {"results.json", "dmrg_sweeps.csv", "local_energy.csv", "correlations.csv", "tensor.json"})
    CHECK(slurp(out / f) == slurp(again / f));
}

TEST_CASE("a locked output directory refuses a second writer") {
  const fs::path out = scratch("locked");
  fs::create_directories(out);
  std::ofstream(out / ".holoqed.lock").put('x');
  CHECK(exit_of([&] { harness::run(small_dmrg(out)); }) == 5);
  fs::remove(out / ".holoqed.lock");
  CHECK(exit_of([&] { harness::run(small_dmrg(out)); }) == 0);
  CHECK(!fs::exists(out / ".holoqed.lock"));
}

TEST_CASE("relative paths resolve against the manifest directory") {
  const fs::path dir = scratch("relative");
  fs::create_directories(dir);
  const Waveform wf = Waveform::zeros(5, 10.0);
  std::ofstream(dir / "wf.json") << json(wf).dump();
  const json m{{"experiment", "sample"},
               {"output_dir", "out"},
               {"params", {{"cutoff", 3}}},
               {"problem", {{"waveform_file", "wf.json"}, {"bases", "zzz"}, {"shots", 20}, {"burn_in", 0}}}};
  CHECK(harness::validate(m, dir).empty());
  harness::run(m, dir);
  // Zero drive keeps the qubit in |0>: every outcome is +1.
  std::istringstream csv(slurp(dir / "out" / "samples.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    const auto a = line.find(',');
    CHECK(line.substr(a + 1, line.rfind(',') - a - 1) == "000");
  }
  CHECK(rows == 20);
}

TEST_CASE("module errors map to exit code 4") {
  CHECK(harness::exit_code_for(ErrorCode::NonConvergence) == 4);
  CHECK(harness::exit_code_for(ErrorCode::AllRunsFailed) == 4);
  CHECK(harness::exit_code_for(ErrorCode::Schema) == 2);
  CHECK(harness::exit_code_for(ErrorCode::MissingFile) == 3);
  CHECK(harness::exit_code_for(ErrorCode::OutputLocked) == 5);
}
