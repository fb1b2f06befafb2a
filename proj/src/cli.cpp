#include "qnls/cli.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "qnls/diagnostics.hpp"
#include "qnls/errors.hpp"
#include "qnls/io.hpp"

namespace qnls {

namespace fs = std::filesystem;

GroundState reference_ground_state(const RunConfig& cfg) {
  const Grid g = cfg.ground_state.grid.build();
  auto search = search_ground_state(g, cfg.physics, cfg.ground_state.solver, cfg.ground_state.widths);
  return search.candidates[search.best];
}

FieldPair build_initial_data(const RunConfig& cfg, const Grid& grid, const GroundState* ref) {
  const auto& in = cfg.initial;
  FieldPair s = FieldPair::zeros(grid);
  const auto x = grid.nodes();
  auto gauss = [&](std::size_t j) { return std::exp(-(x[j] / in.width) * (x[j] / in.width)); };

  if (in.kind == "zero") {
    // nothing to do
  } else if (in.kind == "gaussian") {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      s.u()[j] = in.amplitude * gauss(j);
      s.v()[j] = in.v_amplitude * gauss(j);
    }
  } else if (in.kind == "scaled-gaussian" || in.kind == "ground-state") {
    if (!ref) throw StateError("initial data '" + in.kind + "' needs a reference ground state");
    if (!ref->converged) throw StateError("reference ground state did not converge: " + ref->message);
    if (in.kind == "scaled-gaussian") {
      // peak values at the origin, which is not a grid node
      const double phi0 = ref->grid.interpolate(complexify(ref->phi), 0.0).real();
      const double psi0 = ref->grid.interpolate(complexify(ref->psi), 0.0).real();
      for (std::size_t j = 0; j < grid.size(); ++j) {
        s.u()[j] = in.scale * phi0 * gauss(j);
        s.v()[j] = in.scale * psi0 * gauss(j);
      }
    } else {
      s = resample(ref->state(), grid).scaled(in.scale);
    }
  } else if (in.kind == "checkpoint") {
    const GroundState gs = load_checkpoint(in.checkpoint);
    s = resample(gs.state(), grid).scaled(in.scale);
  } else {
    throw ConfigError(ConfigError::Kind::UnknownChoice, "unknown initial.kind '" + in.kind + "'");
  }
  if (in.xi != 0.0) s = galilean_boost(s, in.xi);
  return s;
}

namespace {

struct CommonArgs {
  std::string config;
  std::string preset;
  std::string out;
};

void add_common(CLI::App* sub, CommonArgs& a) {
  sub->add_option("-c,--config", a.config, "Run configuration file");
  sub->add_option("-p,--preset", a.preset, "Start from a named preset instead of a file");
  sub->add_option("-o,--out", a.out, "Output directory (overrides output.directory)");
}

RunConfig resolve(const CommonArgs& a, const std::string& fallback_preset, bool config_required) {
  RunConfig cfg;
  if (!a.config.empty()) {
    cfg = load_config(a.config);
  } else if (!a.preset.empty()) {
    cfg = preset_config(a.preset);
  } else if (config_required) {
    throw ConfigError(ConfigError::Kind::MissingFile, "this subcommand needs --config <file> or --preset <name>");
  } else if (!fallback_preset.empty()) {
    cfg = preset_config(fallback_preset);
  }
  if (!a.out.empty()) cfg.output.directory = a.out;
  return cfg;
}

void print_report(const char* label, const FunctionalReport& r) {
  std::printf("%s M=%.15g E=%.15g K=%.15g L=%.15g N=%.15g P=%.15g\n", label, r.M, r.E, r.K, r.L, r.N, r.P);
}

json ground_state_json(const GroundState& gs) {
  const auto& f = gs.functionals;
  json j = {{"converged", gs.converged},
            {"iterations", gs.iterations},
            {"residual", gs.residual},
            {"kappa", gs.kappa},
            {"omega", gs.omega},
            {"K_over_L", f.L > 0.0 ? f.K / f.L : 0.0},
            {"functionals", to_json(f)},
            {"grid", grid_to_json(gs.grid)},
            {"message", gs.message}};
  if (gs.converged) j["mu_omega"] = mu_omega(gs);
  return j;
}

// ---------------------------------------------------------------------------

int cmd_ground_state(RunConfig cfg, std::optional<double> kappa, std::optional<double> omega) {
  if (kappa) cfg.physics.kappa = *kappa;
  if (omega) cfg.physics.omega = *omega;
  validate_config(cfg);
  const Grid g = cfg.ground_state.grid.build();
  const auto search = search_ground_state(g, cfg.physics, cfg.ground_state.solver, cfg.ground_state.widths);
  const GroundState& gs = search.candidates[search.best];

  const fs::path dir = cfg.output.directory;
  save_checkpoint(gs, dir / "ground_state.json");
  json rep = ground_state_json(gs);
  rep["distinct_profiles"] = search.distinct;
  rep["candidates"] = search.candidates.size();
  if (gs.converged) {
    const auto probe = probe_infimum(gs);
    rep["infimum_probe"] = {{"samples", probe.samples}, {"min_J", probe.min_J}, {"max_K", probe.max_K},
                            {"holds", probe.holds}};
  }
  write_json(rep, dir / "report.json");

  print_report("ground state:", gs.functionals);
  std::printf("converged=%s iterations=%d residual=%.3e |K|/L=%.3e\n", gs.converged ? "true" : "false",
              gs.iterations, gs.residual, std::abs(gs.functionals.K) / gs.functionals.L);
  if (!gs.converged) {
    std::cerr << "ground state did not converge: " << gs.message << "\n";
    return kExitMismatch;
  }
  return kExitOk;
}

struct RunOutput {
  TrajectoryRecord record;
  std::optional<GroundState> ref;
};

RunOutput run_evolution(const RunConfig& cfg) {
  validate_config(cfg);
  RunOutput out;
  const Grid grid = cfg.grid.build();
  if (grid.kind() == GridKind::Radial5D) out.ref = reference_ground_state(cfg);
  const FieldPair data = build_initial_data(cfg, grid, out.ref ? &*out.ref : nullptr);
  out.record = evolve(data, cfg.physics, cfg.evolve_options());
  const auto& r0 = out.record.reports.front();
  out.record.k_sign_initial = (r0.K > 0.0) - (r0.K < 0.0);
  if (out.ref && out.ref->converged) out.record.threshold_ratio = threshold_ratio(data, cfg.physics, *out.ref);
  return out;
}

int cmd_evolve(const RunConfig& cfg) {
  const auto run = run_evolution(cfg);
  const auto& rec = run.record;
  json extra = {{"command", "evolve"}};
  if (run.ref) extra["ground_state"] = ground_state_json(*run.ref);
  emit_timeseries(rec, extra, cfg.output.directory);
  print_report("initial:", rec.reports.front());
  print_report("final:  ", rec.reports.back());
  std::printf("t=%.6g steps=%zu blowup=%s\n", rec.times.back(), rec.steps, rec.blowup ? "true" : "false");
  return kExitOk;
}

int cmd_classify(const RunConfig& cfg) {
  auto run = run_evolution(cfg);
  auto& rec = run.record;
  if (!rec.threshold_ratio) {
    std::cerr << "classify needs a converged ground state on a radial grid\n";
    return kExitMismatch;
  }
  const Verdict v = classify(rec, cfg.diagnostics.classifier);
  rec.verdict = v.observed;
  json extra = {{"command", "classify"}, {"verdict", to_json(v)}};
  extra["ground_state"] = ground_state_json(*run.ref);
  bool ok = v.agree;
  if (v.predicted == Predicted::Scatter) {
    const auto ks = k_sign_track(rec, mu_omega(*run.ref));
    extra["k_sign"] = {{"all_positive", ks.all_positive}, {"min_K", ks.min_K},
                       {"delta_max", std::isfinite(ks.delta_max) ? json(ks.delta_max) : json("inf")},
                       {"min_K_over_L", std::isfinite(ks.min_K_over_L) ? json(ks.min_K_over_L) : json("inf")},
                       {"samples", ks.samples}};
    ok = ok && ks.all_positive;
  }
  emit_timeseries(rec, extra, cfg.output.directory);
  std::printf("predicted=%s observed=%s agree=%s ratio=%.6g K(0)=%.6g\n", to_string(v.predicted).c_str(),
              to_string(v.observed).c_str(), v.agree ? "true" : "false", v.threshold_ratio,
              rec.reports.front().K);
  if (!ok) {
    std::cerr << "verdict mismatch\n";
    return kExitMismatch;
  }
  return kExitOk;
}

int cmd_galilean(RunConfig cfg, std::optional<double> kappa, std::optional<double> xi,
                 std::optional<double> t) {
  if (kappa) cfg.physics.kappa = *kappa;
  if (xi) cfg.diagnostics.xi = *xi;
  if (t) cfg.diagnostics.galilean_t = *t;
  if (cfg.grid.kind != GridKind::Periodic1D)
    throw ConfigError(ConfigError::Kind::Range, "grid.kind must be periodic1d for the galilean check");
  validate_config(cfg);
  const Grid grid = cfg.grid.build();
  RunConfig base = cfg;
  base.initial.xi = 0.0;
  const FieldPair data = build_initial_data(base, grid, nullptr);
  EvolveOptions opts = cfg.evolve_options();
  opts.absorber_strength = 0.0;

  const double residual = mass_resonance_check(data, cfg.diagnostics.xi, cfg.physics, cfg.diagnostics.galilean_t, opts);

  opts.t_end = cfg.diagnostics.galilean_t;
  auto rec = evolve(galilean_boost(data, cfg.diagnostics.xi), cfg.physics, opts);
  const double x_defect = x_of_t_check(rec);

  const bool resonant = cfg.physics.mass_resonant();
  json extra = {{"command", "galilean"},
                {"xi", cfg.diagnostics.xi},
                {"t", cfg.diagnostics.galilean_t},
                {"covariance_residual", residual},
                {"x_of_t_defect", x_defect},
                {"mass_resonant", resonant}};
  emit_timeseries(rec, extra, cfg.output.directory);
  std::printf("kappa=%g xi=%g t=%g residual=%.6e x_of_t_defect=%.6e\n", cfg.physics.kappa, cfg.diagnostics.xi,
              cfg.diagnostics.galilean_t, residual, x_defect);
  if (resonant && (residual > cfg.diagnostics.covariance_tol || x_defect > cfg.diagnostics.x_of_t_tol)) {
    std::cerr << "Galilean covariance not observed at kappa = 1/2\n";
    return kExitMismatch;
  }
  return kExitOk;
}

int cmd_virial(RunConfig cfg) {
  if (cfg.grid.kind != GridKind::Radial5D)
    throw ConfigError(ConfigError::Kind::Range, "grid.kind must be radial5d for the virial check");
  if (cfg.evolve.absorber_strength != 0.0)
    throw ConfigError(ConfigError::Kind::Range, "evolve.absorber_strength must be 0 for the virial check");
  if (cfg.output.snapshot_every == 0) cfg.output.snapshot_every = 1;
  validate_config(cfg);
  const double R = cfg.diagnostics.virial_radius > 0.0 ? cfg.diagnostics.virial_radius : 0.5 * cfg.grid.extent;
  if (R < 0.5 * cfg.grid.extent)
    throw ConfigError(ConfigError::Kind::Range, "diagnostics.virial_radius must be at least half of grid.extent");

  json levels = json::array();
  std::vector<double> defects;
  RunConfig c = cfg;
  for (int level = 0; level < 2; ++level) {
    auto run = run_evolution(c);
    const auto rep = virial_rate_check(run.record, R);
    defects.push_back(rep.max_relative_defect);
    levels.push_back({{"dt", c.evolve.dt},
                      {"max_relative_defect", rep.max_relative_defect},
                      {"max_abs_defect", rep.max_abs_defect},
                      {"points", rep.points}});
    std::printf("dt=%.3e virial defect=%.6e (%zu points)\n", c.evolve.dt, rep.max_relative_defect, rep.points);
    if (level == 0) {
      json extra = {{"command", "virial-check"}, {"virial_radius", R}};
      run.record.snapshots.clear();
      emit_timeseries(run.record, extra, cfg.output.directory);
    }
    c.evolve.dt *= 0.5;
    c.evolve.dt_min = std::min(c.evolve.dt_min, c.evolve.dt);
  }
  const bool ok = defects[0] <= cfg.diagnostics.virial_tol && defects[1] < defects[0];
  json summary = {{"virial_radius", R}, {"levels", levels}, {"pass", ok}};
  write_json(summary, fs::path(cfg.output.directory) / "virial.json");
  if (!ok) {
    std::cerr << "virial rate check failed\n";
    return kExitMismatch;
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
  validate_config(cfg);
  struct Task {
    double kappa, omega;
    std::optional<GroundState> gs;
    std::string error;
  };
  std::vector<Task> tasks;
  for (double k : cfg.sweep.kappas)
    for (double w : cfg.sweep.omegas) tasks.push_back({k, w, std::nullopt, ""});

  const Grid g = cfg.ground_state.grid.build();
  const fs::path dir = cfg.output.directory;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tasks.size()); ++i) {
    auto& t = tasks[i];
    try {
      const auto search = search_ground_state(g, {t.kappa, t.omega}, cfg.ground_state.solver, cfg.ground_state.widths);
      t.gs = search.candidates[search.best];
      char name[64];
      std::snprintf(name, sizeof name, "kappa_%g_omega_%g", t.kappa, t.omega);
      save_checkpoint(*t.gs, dir / name / "ground_state.json");
      write_json(ground_state_json(*t.gs), dir / name / "report.json");
    } catch (const std::exception& e) {
      t.error = e.what();
    }
  }

  bool ok = true;
  json rows = json::array();
  std::FILE* csv = std::fopen((dir / "sweep.csv").c_str(), "w");
  if (!csv) throw IoError("cannot open for writing: " + (dir / "sweep.csv").string());
  std::fprintf(csv, "kappa,omega,converged,M,E,threshold_product,mu_omega,K_over_L,residual\n");
  for (const auto& t : tasks) {
    if (!t.error.empty() || !t.gs || !t.gs->converged) {
      ok = false;
      std::cerr << "kappa=" << t.kappa << " omega=" << t.omega << ": "
                << (t.error.empty() ? (t.gs ? t.gs->message : "no result") : t.error) << "\n";
      std::fprintf(csv, "%.17g,%.17g,false,,,,,,\n", t.kappa, t.omega);
      continue;
    }
    const auto& f = t.gs->functionals;
    std::fprintf(csv, "%.17g,%.17g,true,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t.kappa, t.omega, f.M, f.E,
                 f.threshold_product, f.I_omega, f.K / f.L, t.gs->residual);
    rows.push_back(ground_state_json(*t.gs));
  }
  std::fclose(csv);

  // E M must not depend on ω for fixed κ
  json spread = json::object();
  for (double k : cfg.sweep.kappas) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& t : tasks)
      if (t.kappa == k && t.gs && t.gs->converged) {
        lo = std::min(lo, t.gs->functionals.threshold_product);
        hi = std::max(hi, t.gs->functionals.threshold_product);
      }
    if (!std::isfinite(lo)) continue;
    const double rel = (hi - lo) / hi;
    spread[std::to_string(k)] = rel;
    std::printf("kappa=%g  E*M in [%.12g, %.12g]  relative spread %.3e\n", k, lo, hi, rel);
    if (rel > cfg.sweep.product_tol) ok = false;
  }
  write_json({{"runs", rows}, {"threshold_product_spread", spread}, {"pass", ok}}, dir / "sweep.json");
  return ok ? kExitOk : kExitMismatch;
}

int cmd_show_config(const RunConfig& cfg) {
  std::cout << dump_config(cfg);
  return kExitOk;
}

}  // namespace

int run_command(int argc, char** argv) {
  kernels::configure_threads_from_env();

  CLI::App app{"Simulation and analysis of a quadratic NLS system in five dimensions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qnls 1.0");

  CommonArgs gs_args, ev_args, cl_args, ga_args, vi_args, sw_args, sh_args;
  std::optional<double> gs_kappa, gs_omega, ga_kappa, ga_xi, ga_t;

  auto* gs = app.add_subcommand("ground-state", "Solve the elliptic system and write a checkpoint");
  add_common(gs, gs_args);
  gs->add_option("--kappa", gs_kappa, "Dispersion ratio kappa");
  gs->add_option("--omega", gs_omega, "Frequency omega");

  auto* ev = app.add_subcommand("evolve", "Evolve initial data and write the time series");
  add_common(ev, ev_args);
  auto* cl = app.add_subcommand("classify", "Evolve and compare the observed outcome with the threshold prediction");
  add_common(cl, cl_args);

  auto* ga = app.add_subcommand("galilean", "Galilean covariance and center-of-mass check on a periodic grid");
  add_common(ga, ga_args);
  ga->add_option("--kappa", ga_kappa, "Dispersion ratio kappa");
  ga->add_option("--xi", ga_xi, "Boost wavenumber (multiple of pi / half_length)");
  ga->add_option("--t", ga_t, "Evolution time");

  auto* vi = app.add_subcommand("virial-check", "Compare dV/dt with 4K on a radial run");
  add_common(vi, vi_args);
  auto* sw = app.add_subcommand("sweep", "Ground states over a (kappa, omega) grid, in parallel");
  add_common(sw, sw_args);
  auto* sh = app.add_subcommand("show-config", "Print the resolved configuration");
  add_common(sh, sh_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*gs) return cmd_ground_state(resolve(gs_args, "", false), gs_kappa, gs_omega);
    if (*ev) return cmd_evolve(resolve(ev_args, "", true));
    if (*cl) return cmd_classify(resolve(cl_args, "", true));
    if (*ga) return cmd_galilean(resolve(ga_args, "galilean-1d", false), ga_kappa, ga_xi, ga_t);
    if (*vi) return cmd_virial(resolve(vi_args, "virial-radial", false));
    if (*sw) return cmd_sweep(resolve(sw_args, "groundstate-sweep", false));
    if (*sh) return cmd_show_config(resolve(sh_args, "", false));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  }
  return kExitConfig;
}

}  // namespace qnls
