#include <fstream>

#include "doctest.h"
#include "helpers.hpp"

#include "qnls/cli.hpp"
#include "qnls/io.hpp"

using namespace qnls;
using namespace testutil;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "qnls");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_command(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("ground-state writes a checkpoint and a report") {
  const auto dir = temp_dir("cli_gs");
  CHECK(run({"ground-state", "--kappa", "0.5", "--omega", "1", "-o", dir.string()}) == kExitOk);
  const json rep = read_json(dir / "report.json");
  const double K = rep["functionals"]["K"], L = rep["functionals"]["L"];
  CHECK(std::abs(K) / L <= 1e-8);
  CHECK(rep["converged"] == true);
  const GroundState gs = load_checkpoint(dir / "ground_state.json");
  CHECK(gs.kappa == 0.5);
  CHECK(gs.converged);
}

TEST_CASE("galilean check at resonance") {
  const auto dir = temp_dir("cli_gal");
  CHECK(run({"galilean", "--kappa", "0.5", "--xi", "2", "-o", dir.string()}) == kExitOk);
  const json v = read_json(dir / "verdict.json");
  CHECK(v["covariance_residual"].get<double>() <= 1e-6);
  CHECK(std::filesystem::exists(dir / "timeseries.csv"));
  // away from resonance the run succeeds and just reports
  CHECK(run({"galilean", "--kappa", "1", "--xi", "2", "-o", (dir / "k1").string()}) == kExitOk);
  CHECK(read_json(dir / "k1" / "verdict.json")["covariance_residual"].get<double>() >= 1e-2);
}

TEST_CASE("configuration errors exit with 2") {
  const auto dir = temp_dir("cli_err");
  CHECK(run({"evolve"}) == kExitConfig);
  CHECK(run({"evolve", "-c", "/nonexistent/run.toml"}) == kExitConfig);
  CHECK(run({"evolve", "-p", "mystery"}) == kExitConfig);
  CHECK(run({"no-such-command"}) == kExitConfig);
  CHECK(run({"galilean", "--xi", "0.1", "-o", dir.string()}) == kExitConfig);
  std::ofstream(dir / "bad.toml") << "[physics]\nkappa = -1\n";
  CHECK(run({"evolve", "-c", (dir / "bad.toml").string()}) == kExitConfig);
  CHECK(run({"virial-check", "-c", (dir / "bad.toml").string()}) == kExitConfig);
}

TEST_CASE("evolve writes the time series") {
  const auto dir = temp_dir("cli_evolve");
  std::ofstream(dir / "run.toml") << "preset = \"virial-radial\"\n[grid]\nn = 64\n[evolve]\nt_end = 0.02\n[output]\nsample_every = 5\nsnapshot_every = 1\n";
  CHECK(run({"evolve", "-c", (dir / "run.toml").string(), "-o", (dir / "out").string()}) == kExitOk);
  CHECK(std::filesystem::exists(dir / "out" / "timeseries.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "verdict.json"));
  CHECK(std::filesystem::exists(dir / "out" / "snapshots" / "snap_00000.bin"));
  CHECK(std::filesystem::exists(dir / "out" / "snapshots" / "snap_00000.json"));
}

TEST_CASE("virial-check on the preset") {
  const auto dir = temp_dir("cli_virial");
  CHECK(run({"virial-check", "-o", dir.string()}) == kExitOk);
  const json v = read_json(dir / "virial.json");
  CHECK(v["pass"] == true);
}

TEST_CASE("sweep reports a constant threshold product") {
  const auto dir = temp_dir("cli_sweep");
  std::ofstream(dir / "sweep.toml") << "preset = \"groundstate-sweep\"\n[sweep]\nkappas = [1]\nomegas = [1, 4]\n";
  CHECK(run({"sweep", "-c", (dir / "sweep.toml").string(), "-o", dir.string()}) == kExitOk);
  const json s = read_json(dir / "sweep.json");
  CHECK(s["pass"] == true);
  CHECK(s["runs"].size() == 2);
  CHECK(std::filesystem::exists(dir / "kappa_1_omega_4" / "ground_state.json"));
}

TEST_CASE("reported delta on the scattering preset is stable under dt refinement") {
  const auto dir = temp_dir("cli_delta");
  std::ofstream(dir / "half.toml") << "preset = \"scatter-radial\"\n[evolve]\ndt = 0.0005\n[output]\nsample_every = 40\n";
  CHECK(run({"classify", "-p", "scatter-radial", "-o", (dir / "a").string()}) == kExitOk);
  CHECK(run({"classify", "-c", (dir / "half.toml").string(), "-o", (dir / "b").string()}) == kExitOk);
  const json a = read_json(dir / "a" / "verdict.json")["k_sign"];
  const json b = read_json(dir / "b" / "verdict.json")["k_sign"];
  // K stays above (mu - I) / 8 here, so the min{} bound holds for every delta
  CHECK(a["delta_max"] == "inf");
  REQUIRE(a["min_K_over_L"].is_number());
  REQUIRE(b["min_K_over_L"].is_number());
  const double da = a["min_K_over_L"], db = b["min_K_over_L"];
  MESSAGE("min K/L at dt: " << da << ", at dt/2: " << db);
  CHECK(da > 0.0);
  CHECK(std::abs(da - db) <= 0.2 * db);
}

}
