#include "qnls/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

#include "qnls/errors.hpp"

namespace qnls {

namespace kp = kernels::parallel;

std::string to_string(Scheme s) { return s == Scheme::Strang ? "strang" : "yoshida4"; }

Scheme scheme_from_string(const std::string& name) {
  if (name == "strang") return Scheme::Strang;
  if (name == "yoshida4") return Scheme::Yoshida4;
  throw InvalidParameter("unknown scheme '" + name + "' (expected strang or yoshida4)");
}

void EvolveOptions::validate() const {
  require(std::isfinite(dt) && dt > 0.0, "evolve.dt must be finite and > 0");
  require(std::isfinite(t_end) && t_end > 0.0, "evolve.t_end must be finite and > 0");
  require(std::isfinite(dt_min) && dt_min > 0.0 && dt_min <= dt, "evolve.dt_min must be in (0, dt]");
  require(std::isfinite(absorber_strength) && absorber_strength >= 0.0,
          "evolve.absorber_strength must be >= 0");
  require(absorber_start_fraction > 0.0 && absorber_start_fraction < 1.0,
          "evolve.absorber_start_fraction must be in (0, 1)");
  require(sample_every >= 1, "evolve.sample_every must be >= 1");
  require(snapshot_every >= 0, "evolve.snapshot_every must be >= 0");
  require(std::isfinite(virial_radius) && virial_radius >= 0.0, "evolve.virial_radius must be >= 0");
  require(std::isfinite(nonlinear_cfl) && nonlinear_cfl >= 0.0, "evolve.nonlinear_cfl must be >= 0");
  require(std::isfinite(blowup_growth) && blowup_growth > 1.0, "evolve.blowup_growth must be > 1");
}

namespace {

void flow_in_place(const Grid& g, std::span<cplx> f, double t) {
  auto c = g.to_spectral(f);
  kp::phase_rotate(c, g.eigenvalues(), t);
  g.from_spectral(c, f);
}

double kinetic(const FieldPair& s, double kappa) {
  const Grid& g = s.grid();
  return gradient_norm_sq(s.u(), g) + 0.5 * kappa * gradient_norm_sq(s.v(), g);
}

double mass(const FieldPair& s) {
  const auto w = s.grid().weights();
  return kp::weighted_abs_pow(w, s.u(), 2.0) + kp::weighted_abs_pow(w, s.v(), 2.0);
}

}  // namespace

FieldPair linear_flow(const FieldPair& state, double t, const PhysicsParams& params) {
  FieldPair out = state;
  if (t == 0.0) return out;
  flow_in_place(out.grid(), out.u(), t);
  flow_in_place(out.grid(), out.v(), params.kappa * t);
  return out;
}

FieldPair nonlinear_substep(const FieldPair& state, double dt) {
  FieldPair out = state;
  kp::rk4_quadratic(out.u(), out.v(), dt);
  return out;
}

std::vector<double> absorber_profile(const Grid& grid, const EvolveOptions& opts) {
  std::vector<double> sigma(grid.size(), 0.0);
  if (opts.absorber_strength == 0.0) return sigma;
  const double a = grid.extent();
  const double x0 = opts.absorber_start_fraction * a;
  const auto x = grid.nodes();
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const double t = std::clamp((std::abs(x[j]) - x0) / (a - x0), 0.0, 1.0);
    sigma[j] = opts.absorber_strength * t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  }
  return sigma;
}

namespace {

void strang_core(FieldPair& s, double dt, const PhysicsParams& params) {
  s = linear_flow(s, 0.5 * dt, params);
  kp::rk4_quadratic(s.u(), s.v(), dt);
  s = linear_flow(s, 0.5 * dt, params);
}

StepResult step_with_mask(const FieldPair& state, double dt, const PhysicsParams& params,
                          std::span<const double> sigma, double t, double absorbed_before,
                          Scheme scheme = Scheme::Strang) {
  StepResult res{state, t, dt, false, absorbed_before};
  FieldPair s = state;
  if (scheme == Scheme::Strang) {
    strang_core(s, dt, params);
  } else {
    const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
    const double w0 = 1.0 - 2.0 * w1;
    strang_core(s, w1 * dt, params);
    strang_core(s, w0 * dt, params);
    strang_core(s, w1 * dt, params);
  }
  if (!sigma.empty()) {
    std::vector<double> mask(sigma.size());
    for (std::size_t j = 0; j < mask.size(); ++j) mask[j] = std::exp(-dt * sigma[j]);
    const double before = mass(s);
    kp::scale(s.u(), mask);
    kp::scale(s.v(), mask);
    res.absorbed_mass += std::max(0.0, before - mass(s));
  }
  if (!s.all_finite()) {
    res.blowup_flag = true;
    res.absorbed_mass = absorbed_before;
    return res;
  }
  res.state = std::move(s);
  res.t = t + dt;
  return res;
}

}  // namespace

StepResult strang_step(const FieldPair& state, double dt, const PhysicsParams& params,
                       const EvolveOptions& opts, double t, double absorbed_before) {
  require(std::isfinite(dt) && dt != 0.0, "strang_step: dt must be finite and nonzero");
  params.validate();
  if (opts.absorber_strength > 0.0 && dt < 0.0)
    throw InvalidParameter("strang_step: negative dt with the absorber on");
  const auto sigma = opts.absorber_strength > 0.0 ? absorber_profile(state.grid(), opts)
                                                  : std::vector<double>{};
  return step_with_mask(state, dt, params, sigma, t, absorbed_before);
}

TrajectoryRecord evolve(const FieldPair& initial, const PhysicsParams& params,
                        const EvolveOptions& opts, const SampleSink& sink) {
  params.validate();
  opts.validate();
  const Grid& g = initial.grid();
  const auto sigma = opts.absorber_strength > 0.0 ? absorber_profile(g, opts) : std::vector<double>{};
  const double vr = opts.virial_radius > 0.0 ? opts.virial_radius : 0.5 * g.extent();

  TrajectoryRecord rec;
  rec.params = params;
  rec.virial_radius = vr;
  rec.absorber_on = opts.absorber_strength > 0.0;
  rec.zero_data = kp::max_abs(initial.u()) == 0.0 && kp::max_abs(initial.v()) == 0.0;
  rec.min_dt = opts.dt;

  std::size_t samples = 0;
  auto take_sample = [&](const FieldPair& s, double t, double absorbed) {
    const auto rep = evaluate_all(s, params);
    rec.times.push_back(t);
    rec.reports.push_back(rep);
    rec.l3_sum.push_back(l3_norm(s.u(), g) + l3_norm(s.v(), g));
    rec.virial.push_back(virial_truncated(s, 0.0, vr));
    rec.absorbed_mass.push_back(absorbed);
    // trapezoid update of the cumulative L^6_t L^3_x norm
    const std::size_t k = rec.times.size() - 1;
    double s6 = 0.0;
    if (k > 0) {
      const double prev = std::pow(rec.s_norm_cum[k - 1], 6.0);
      s6 = prev + 0.5 * (t - rec.times[k - 1]) *
                      (std::pow(rec.l3_sum[k - 1], 6.0) + std::pow(rec.l3_sum[k], 6.0));
    }
    rec.s_norm_cum.push_back(std::pow(s6, 1.0 / 6.0));
    const bool snap = opts.snapshot_every > 0 && samples % opts.snapshot_every == 0;
    if (snap) rec.snapshots.push_back({t, s});
    if (sink) sink(t, rep, snap ? &rec.snapshots.back().state : nullptr);
    ++samples;
  };

  FieldPair state = initial;
  double t = 0.0, dt = opts.dt, absorbed = 0.0;
  take_sample(state, t, absorbed);

  const double L0 = kinetic(state, params.kappa);
  double L_prev = L0;
  std::deque<double> doubling;  // doubling times of L over recent steps
  const double t_tol = 1e-12 * opts.t_end;
  bool sampled_last = true;

  while (opts.t_end - t > t_tol) {
    double h = dt;
    if (opts.adapt && opts.nonlinear_cfl > 0.0) {
      const double amp = std::max(kp::max_abs(state.u()), kp::max_abs(state.v()));
      while (amp > 0.0 && h > opts.nonlinear_cfl / amp && 0.5 * h >= opts.dt_min) h *= 0.5;
    }
    dt = h;
    const bool last = h >= opts.t_end - t - t_tol;
    if (last) h = opts.t_end - t;

    std::optional<StepResult> step;
    double L_new = 0.0;
    for (;;) {
      step = step_with_mask(state, h, params, sigma, t, absorbed, opts.scheme);
      const bool can_halve = opts.adapt && 0.5 * h >= opts.dt_min;
      if (step->blowup_flag) {
        if (can_halve) {
          h *= 0.5;
          dt = h;
          continue;
        }
        break;
      }
      L_new = kinetic(step->state, params.kappa);
      if (can_halve && L_new > 1.1 * L_prev) {
        h *= 0.5;
        dt = h;
        continue;
      }
      break;
    }
    StepResult& res = *step;
    if (res.blowup_flag) {
      rec.blowup = true;
      rec.blowup_time = t;
      break;
    }

    state = std::move(res.state);
    absorbed = res.absorbed_mass;
    t = last && h == opts.t_end - t ? opts.t_end : res.t;
    ++rec.steps;
    rec.final_dt = h;
    rec.min_dt = std::min(rec.min_dt, h);

    const double growth = L_prev > 0.0 ? L_new / L_prev : 1.0;
    doubling.push_back(growth > 1.0 ? h * std::log(2.0) / std::log(growth)
                                    : std::numeric_limits<double>::infinity());
    if (doubling.size() > 3) doubling.pop_front();
    const bool at_min = 0.5 * h < opts.dt_min;
    const bool accelerating =
        doubling.size() == 3 && doubling[0] > doubling[1] && doubling[1] > doubling[2];
    const bool fired = at_min && L0 > 0.0 && L_new > opts.blowup_growth * L0 && accelerating;
    L_prev = L_new;

    // let dt recover toward the requested step once growth has calmed down
    if (opts.adapt && growth < 1.025 && dt < opts.dt) dt = std::min(2.0 * dt, opts.dt);

    sampled_last = rec.steps % static_cast<std::size_t>(opts.sample_every) == 0;
    if (sampled_last || fired || opts.t_end - t <= t_tol) {
      take_sample(state, t, absorbed);
      sampled_last = true;
    }
    if (fired) {
      rec.blowup = true;
      rec.blowup_time = t;
      break;
    }
  }
  if (!sampled_last) take_sample(state, t, absorbed);
  rec.completed = true;
  if (rec.final_dt == 0.0) rec.final_dt = dt;
  return rec;
}

namespace {

void require_periodic(const Grid& g, const char* what) {
  if (g.kind() != GridKind::Periodic1D)
    throw InvalidParameter(std::string(what) + ": requires a periodic grid");
}

}  // namespace

FieldPair galilean_boost(const FieldPair& state, double xi) {
  const Grid& g = state.grid();
  require_periodic(g, "galilean_boost");
  require(std::isfinite(xi), "galilean_boost: xi must be finite");
  const double m = xi * g.extent() / kPi;
  if (std::abs(m - std::round(m)) > 1e-9 * std::max(1.0, std::abs(m)))
    throw InvalidParameter("galilean_boost: xi must be a multiple of pi / half_length");
  FieldPair out = state;
  const auto x = g.nodes();
  for (std::size_t j = 0; j < g.size(); ++j) {
    out.u()[j] *= std::polar(1.0, xi * x[j]);
    out.v()[j] *= std::polar(1.0, 2.0 * xi * x[j]);
  }
  return out;
}

FieldPair translate(const FieldPair& state, double shift) {
  const Grid& g = state.grid();
  require_periodic(g, "translate");
  require(std::isfinite(shift), "translate: shift must be finite");
  FieldPair out = state;
  if (shift == 0.0) return out;
  const std::size_t n = g.size();
  const double a = g.extent();
  std::vector<double> phase(n);
  for (std::size_t m = 0; m < n; ++m) {
    const long mm = m < n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
    // f(x - s): multiply by exp(-i k s), with the Nyquist mode treated as real
    phase[m] = (m == n / 2) ? 0.0 : -kPi * static_cast<double>(mm) / a * shift;
  }
  for (auto comp : {out.u(), out.v()}) {
    auto c = g.to_spectral(comp);
    for (std::size_t m = 0; m < n; ++m) {
      if (m == n / 2)
        c[m] *= std::cos(kPi * static_cast<double>(n / 2) / a * shift);
      else
        c[m] *= std::polar(1.0, phase[m]);
    }
    g.from_spectral(c, comp);
  }
  return out;
}

FieldPair galilean_transform(const FieldPair& state, double xi, double t) {
  FieldPair out = galilean_boost(translate(state, 2.0 * t * xi), xi);
  const cplx pu = std::polar(1.0, -t * xi * xi);
  const cplx pv = std::polar(1.0, -2.0 * t * xi * xi);
  for (auto& z : out.u()) z *= pu;
  for (auto& z : out.v()) z *= pv;
  return out;
}

}  // namespace qnls
