#include "qnls/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "qnls/errors.hpp"

namespace qnls {

namespace fs = std::filesystem;

json to_json(const FunctionalReport& r) {
  return {{"M", r.M},
          {"E", r.E},
          {"P", r.P},
          {"K", r.K},
          {"L", r.L},
          {"N", r.N},
          {"I_omega", r.I_omega},
          {"J_omega", r.J_omega},
          {"threshold_product", r.threshold_product},
          {"P_tilde", r.P_tilde}};
}

FunctionalReport report_from_json(const json& j) {
  FunctionalReport r;
  r.M = j.at("M").get<double>();
  r.E = j.at("E").get<double>();
  r.P = j.at("P").get<double>();
  r.K = j.at("K").get<double>();
  r.L = j.at("L").get<double>();
  r.N = j.at("N").get<double>();
  r.I_omega = j.at("I_omega").get<double>();
  r.J_omega = j.at("J_omega").get<double>();
  r.threshold_product = j.at("threshold_product").get<double>();
  r.P_tilde = j.at("P_tilde").get<double>();
  return r;
}

json grid_to_json(const Grid& g) {
  return {{"kind", to_string(g.kind())}, {"n", g.size()}, {"extent", g.extent()}, {"cluster", g.cluster()}};
}

Grid grid_from_json(const json& j) {
  const auto kind = grid_kind_from_string(j.at("kind").get<std::string>());
  const int n = j.at("n").get<int>();
  const double extent = j.at("extent").get<double>();
  return kind == GridKind::Radial5D ? make_radial_grid(n, extent, j.value("cluster", kDefaultRadialCluster))
                                    : make_periodic_grid(n, extent);
}

json to_json(const Verdict& v) {
  return {{"predicted", to_string(v.predicted)}, {"observed", to_string(v.observed)},
          {"agree", v.agree},                    {"threshold_ratio", v.threshold_ratio},
          {"n_ratio", v.n_ratio},                {"l_variation", v.l_variation},
          {"s_increase", v.s_increase},          {"s_saturated", v.s_saturated}};
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f << j.dump(2) << "\n";
  if (!f) throw IoError("write failed: " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open for reading: " + path.string());
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_timeseries_csv(const TrajectoryRecord& record, const fs::path& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open for writing: " + path.string());
  std::fprintf(f, "%s\n", kCsvHeader);
  for (std::size_t k = 0; k < record.size(); ++k) {
    const auto& r = record.reports[k];
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                 record.times[k], r.M, r.E, r.P, r.K, r.L, r.N, r.I_omega, r.J_omega,
                 record.s_norm_cum[k], record.virial[k], record.absorbed_mass[k]);
  }
  if (std::fclose(f) != 0) throw IoError("write failed: " + path.string());
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void put_le(std::ofstream& f, double x) {
  auto bits = std::bit_cast<std::uint64_t>(x);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  f.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(const unsigned char* b) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_snapshot(const FieldPair& state, double t, const PhysicsParams& params, const fs::path& bin_path) {
  {
    std::ofstream f(bin_path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + bin_path.string());
    for (auto comp : {state.u(), state.v()})
      for (const auto& z : comp) {
        put_le(f, z.real());
        put_le(f, z.imag());
      }
    if (!f) throw IoError("write failed: " + bin_path.string());
  }
  json side = {{"t", t},
               {"grid", grid_to_json(state.grid())},
               {"kappa", params.kappa},
               {"omega", params.omega},
               {"file", bin_path.filename().string()},
               {"endianness", "little"},
               {"dtype", "float64"},
               {"layout", "u then v, complex interleaved re,im"},
               {"count", 4 * state.size()}};
  auto side_path = bin_path;
  side_path.replace_extension(".json");
  write_json(side, side_path);
}

FieldPair read_snapshot(const fs::path& bin_path) {
  auto side_path = bin_path;
  side_path.replace_extension(".json");
  const json side = read_json(side_path);
  if (side.value("endianness", "") != "little" || side.value("dtype", "") != "float64")
    throw IoError("unsupported snapshot encoding in " + side_path.string());
  const Grid g = grid_from_json(side.at("grid"));
  const std::size_t n = g.size();
  std::ifstream f(bin_path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + bin_path.string());
  std::vector<unsigned char> buf(32 * n);
  f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (f.gcount() != static_cast<std::streamsize>(buf.size()))
    throw IoError("snapshot is truncated: " + bin_path.string());
  std::vector<cplx> u(n), v(n);
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = {get_le(&buf[16 * j]), get_le(&buf[16 * j + 8])};
    v[j] = {get_le(&buf[16 * (n + j)]), get_le(&buf[16 * (n + j) + 8])};
  }
  return FieldPair(g, std::move(u), std::move(v));
}

void emit_timeseries(const TrajectoryRecord& record, const json& extra, const fs::path& dir) {
  ensure_dir(dir);
  write_timeseries_csv(record, dir / "timeseries.csv");

  json doc = extra;
  doc["kappa"] = record.params.kappa;
  doc["omega"] = record.params.omega;
  doc["samples"] = record.size();
  doc["steps"] = record.steps;
  doc["t_final"] = record.times.empty() ? 0.0 : record.times.back();
  doc["blowup"] = record.blowup;
  doc["blowup_time"] = record.blowup_time;
  doc["min_dt"] = record.min_dt;
  doc["absorber_on"] = record.absorber_on;
  doc["zero_data"] = record.zero_data;
  doc["k_sign_initial"] = record.k_sign_initial;
  if (record.threshold_ratio) doc["threshold_ratio"] = *record.threshold_ratio;
  if (!record.reports.empty()) {
    doc["initial"] = to_json(record.reports.front());
    doc["final"] = to_json(record.reports.back());
    doc["s_norm_final"] = record.s_norm_cum.back();
  }
  write_json(doc, dir / "verdict.json");

  if (!record.snapshots.empty()) {
    const auto sdir = dir / "snapshots";
    ensure_dir(sdir);
    for (std::size_t k = 0; k < record.snapshots.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "snap_%05zu.bin", k);
      write_snapshot(record.snapshots[k].state, record.snapshots[k].t, record.params, sdir / name);
    }
  }
}

void save_checkpoint(const GroundState& gs, const fs::path& path) {
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  json j = {{"format", "qnls-ground-state"},
            {"version", 1},
            {"grid", grid_to_json(gs.grid)},
            {"omega", gs.omega},
            {"kappa", gs.kappa},
            {"residual", gs.residual},
            {"converged", gs.converged},
            {"iterations", gs.iterations},
            {"message", gs.message},
            {"functionals", to_json(gs.functionals)},
            {"phi", gs.phi},
            {"psi", gs.psi}};
  write_json(j, path);
}

GroundState load_checkpoint(const fs::path& path) {
  const json j = read_json(path);
  try {
    if (j.value("format", "") != "qnls-ground-state")
      throw IoError("not a ground-state checkpoint: " + path.string());
    GroundState gs{.grid = grid_from_json(j.at("grid"))};
    gs.omega = j.at("omega").get<double>();
    gs.kappa = j.at("kappa").get<double>();
    gs.residual = j.at("residual").get<double>();
    gs.converged = j.at("converged").get<bool>();
    gs.iterations = j.value("iterations", 0);
    gs.message = j.value("message", "");
    gs.functionals = report_from_json(j.at("functionals"));
    gs.phi = j.at("phi").get<std::vector<double>>();
    gs.psi = j.at("psi").get<std::vector<double>>();
    if (gs.phi.size() != gs.grid.size() || gs.psi.size() != gs.grid.size())
      throw IoError("checkpoint field length does not match its grid: " + path.string());
    return gs;
  } catch (const json::exception& e) {
    throw IoError("malformed checkpoint " + path.string() + ": " + e.what());
  } catch (const InvalidParameter& e) {
    throw IoError("invalid grid in checkpoint " + path.string() + ": " + e.what());
  }
}

}  // namespace qnls
