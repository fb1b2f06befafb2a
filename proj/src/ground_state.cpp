#include "qnls/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "qnls/errors.hpp"

namespace qnls {

namespace {

double sup(std::span<const double> f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

double sup_abs(std::span<const cplx> f) {
  double m = 0.0;
  for (const auto& z : f) m = std::max(m, std::abs(z));
  return m;
}

// Real-valued helpers around the complex grid transforms.
struct Ops {
  const Grid& g;
  std::vector<double> lam;

  explicit Ops(const Grid& grid) : g(grid), lam(grid.eigenvalues().begin(), grid.eigenvalues().end()) {}

  std::vector<cplx> spec(std::span<const double> f) const { return g.to_spectral(complexify(f)); }

  std::vector<double> real_back(std::span<const cplx> c) const {
    const auto f = g.from_spectral(c);
    std::vector<double> out(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j].real();
    return out;
  }

  // (a - b Δ)^{-1} f
  std::vector<double> resolvent(std::span<const double> f, double a, double b) const {
    auto c = spec(f);
    for (std::size_t m = 0; m < c.size(); ++m) c[m] /= (a - b * lam[m]);
    return real_back(c);
  }

  std::vector<double> laplacian(std::span<const double> f) const {
    auto c = spec(f);
    for (std::size_t m = 0; m < c.size(); ++m) c[m] *= lam[m];
    return real_back(c);
  }

  std::vector<double> psi_of(std::span<const double> phi, const PhysicsParams& p) const {
    std::vector<double> sq(phi.size());
    for (std::size_t j = 0; j < phi.size(); ++j) sq[j] = phi[j] * phi[j];
    auto psi = resolvent(sq, 2.0 * p.omega, p.kappa);
    for (double& x : psi) x = -x;
    return psi;
  }
};

double residual_with(const Ops& ops, const PhysicsParams& p, std::span<const double> phi,
                     std::span<const double> psi) {
  const auto lphi = ops.laplacian(phi);
  const auto lpsi = ops.laplacian(psi);
  double r = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    const double r1 = -p.omega * phi[j] + lphi[j] - phi[j] * psi[j];
    const double r2 = -2.0 * p.omega * psi[j] + p.kappa * lpsi[j] - phi[j] * phi[j];
    r = std::max({r, std::abs(r1), std::abs(r2)});
  }
  const double scale = sup(phi) + sup(psi);
  return scale > 0.0 ? r / scale : std::numeric_limits<double>::infinity();
}

FieldPair make_state(const Grid& g, std::span<const double> phi, std::span<const double> psi) {
  return FieldPair(g, complexify(phi), complexify(psi));
}

}  // namespace

void SolverOptions::validate() const {
  require(max_iter >= 1, "ground state: max_iter must be >= 1");
  require(residual_tol > 0.0 && std::isfinite(residual_tol), "ground state: residual_tol must be > 0");
  require(pohozaev_tol > 0.0 && std::isfinite(pohozaev_tol), "ground state: pohozaev_tol must be > 0");
  require(initial_amplitude >= 0.0 && std::isfinite(initial_amplitude),
          "ground state: initial_amplitude must be >= 0");
  require(initial_width > 0.0 && std::isfinite(initial_width), "ground state: initial_width must be > 0");
}

FieldPair GroundState::state() const { return make_state(grid, phi, psi); }

double elliptic_residual(const Grid& grid, const PhysicsParams& params, std::span<const double> phi,
                         std::span<const double> psi) {
  if (phi.size() != grid.size() || psi.size() != grid.size())
    throw ShapeError("elliptic_residual: length does not match grid");
  return residual_with(Ops(grid), params, phi, psi);
}

GroundState solve_ground_state(const Grid& grid, const PhysicsParams& params, const SolverOptions& opts) {
  if (grid.kind() != GridKind::Radial5D)
    throw InvalidParameter("solve_ground_state: requires a radial grid");
  params.validate();
  opts.validate();

  const Ops ops(grid);
  const auto r = grid.nodes();
  const auto w = grid.weights();
  const std::size_t n = grid.size();
  const double om = params.omega;

  GroundState gs{.grid = grid, .omega = om, .kappa = params.kappa};

  std::vector<double> shape(n);
  const double width = opts.initial_width / std::sqrt(om);
  for (std::size_t j = 0; j < n; ++j) shape[j] = std::exp(-(r[j] / width) * (r[j] / width));

  std::vector<double> phi(n, 0.0);
  if (!opts.zero_guess) {
    double amp = opts.initial_amplitude;
    if (amp == 0.0) {
      double best = std::numeric_limits<double>::infinity();
      for (int k = -8; k <= 16; ++k) {
        const double a = om * std::pow(2.0, 0.5 * k);
        std::vector<double> trial(n);
        for (std::size_t j = 0; j < n; ++j) trial[j] = a * shape[j];
        const double res = residual_with(ops, params, trial, ops.psi_of(trial, params));
        if (res < best) {
          best = res;
          amp = a;
        }
      }
    }
    for (std::size_t j = 0; j < n; ++j) phi[j] = amp * shape[j];
  }

  std::vector<double> psi;
  for (int it = 0; it < opts.max_iter; ++it) {
    psi = ops.psi_of(phi, params);
    std::vector<double> nl(n);
    for (std::size_t j = 0; j < n; ++j) nl[j] = -phi[j] * psi[j];

    const auto cphi = ops.spec(phi);
    double num = 0.0, den = 0.0;
    for (std::size_t m = 0; m < n; ++m) num += (om - ops.lam[m]) * std::norm(cphi[m]);
    for (std::size_t j = 0; j < n; ++j) den += w[j] * nl[j] * phi[j];
    if (!(den > 0.0) || !std::isfinite(num) || !std::isfinite(den)) {
      gs.iterations = it;
      gs.message = den == 0.0 ? "iterate is zero (trivial fixed point)" : "iteration diverged";
      break;
    }

    const double res = residual_with(ops, params, phi, psi);
    gs.residual_history.push_back(res);
    gs.residual = res;
    gs.iterations = it;
    if (res <= opts.residual_tol) {
      const auto rep = evaluate_all(make_state(grid, phi, psi), params);
      if (rep.L > 0.0 && std::abs(rep.K) <= opts.pohozaev_tol * rep.L) {
        gs.converged = true;
        break;
      }
    }

    const double mfac = std::pow(num / den, 1.5);
    auto next = ops.resolvent(nl, om, 1.0);
    for (double& x : next) x *= mfac;
    phi = std::move(next);
  }
  if (psi.empty()) psi = ops.psi_of(phi, params);

  gs.phi = phi;
  gs.psi = psi;
  gs.functionals = evaluate_all(gs.state(), params);
  if (!gs.converged && gs.message.empty())
    {
    char buf[64];
    std::snprintf(buf, sizeof buf, "iteration cap reached (residual %.3e)", gs.residual);
    gs.message = buf;
  }
  if (gs.converged && sup(phi) == 0.0) {
    gs.converged = false;
    gs.message = "converged to zero";
  }
  return gs;
}

GroundStateSearch search_ground_state(const Grid& grid, const PhysicsParams& params,
                                      const SolverOptions& opts, const std::vector<double>& widths) {
  require(!widths.empty(), "search_ground_state: at least one initial width is required");
  GroundStateSearch out;
  double best_I = std::numeric_limits<double>::infinity();
  for (double wdt : widths) {
    SolverOptions o = opts;
    o.initial_width = wdt;
    out.candidates.push_back(solve_ground_state(grid, params, o));
    const auto& gs = out.candidates.back();
    if (!gs.converged) continue;
    for (std::size_t k = 0; k + 1 < out.candidates.size(); ++k) {
      const auto& other = out.candidates[k];
      if (!other.converged) continue;
      double d = 0.0;
      for (std::size_t j = 0; j < gs.phi.size(); ++j) d = std::max(d, std::abs(gs.phi[j] - other.phi[j]));
      if (d > 1e-6 * sup(gs.phi)) out.distinct = true;
    }
    if (gs.functionals.I_omega < best_I) {
      best_I = gs.functionals.I_omega;
      out.best = out.candidates.size() - 1;
    }
    out.any_converged = true;
  }
  return out;
}

double mu_omega(const GroundState& gs) {
  if (!gs.converged) throw StateError("mu_omega: ground state did not converge");
  return gs.functionals.I_omega;
}

InfimumProbe probe_infimum(const GroundState& gs, int samples, std::uint64_t seed, double rel_tol) {
  InfimumProbe probe;
  probe.mu = mu_omega(gs);
  require(samples >= 1, "probe_infimum: samples must be >= 1");
  const Grid& g = gs.grid;
  const auto e = g.eigenvector_matrix();
  const std::size_t n = g.size();
  const PhysicsParams p = gs.params();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double scale_u = sup(gs.phi), scale_v = sup(gs.psi);
  constexpr std::size_t kModes = 12;

  probe.min_J = std::numeric_limits<double>::infinity();
  probe.max_K = -std::numeric_limits<double>::infinity();
  while (probe.samples < samples) {
    // smooth perturbation from the lowest eigenmodes, with a random phase
    std::vector<cplx> du(n, 0.0), dv(n, 0.0);
    for (std::size_t m = 0; m < kModes; ++m) {
      const cplx a(gauss(rng), gauss(rng));
      const cplx b(gauss(rng), gauss(rng));
      for (std::size_t j = 0; j < n; ++j) {
        du[j] += a * e(j, m);
        dv[j] += b * e(j, m);
      }
    }
    const double eps = 0.3 * unit(rng);
    const double nu = sup_abs(du), nv = sup_abs(dv);
    FieldPair s = gs.state();
    for (std::size_t j = 0; j < n; ++j) {
      s.u()[j] += eps * scale_u * du[j] / nu;
      s.v()[j] += eps * scale_v * dv[j] / nv;
    }
    const auto rep = evaluate_all(s, p);
    if (!(rep.N < 0.0)) continue;  // no real scaling makes K <= 0
    // K(a s) = a^2 L + (5/4) a^3 N, which is <= 0 for a >= -4L / (5N)
    const double a = (-rep.L / (1.25 * rep.N)) * (1.0 + 0.5 * unit(rng));
    const auto scaled = evaluate_all(s.scaled(a), p);
    probe.min_J = std::min(probe.min_J, scaled.J_omega);
    probe.max_K = std::max(probe.max_K, scaled.K);
    ++probe.samples;
  }
  probe.holds = probe.max_K <= 0.0 && probe.min_J >= probe.mu - rel_tol * probe.mu;
  return probe;
}

GroundState rescale_ground_state(const GroundState& gs, double omega_new) {
  require(std::isfinite(omega_new) && omega_new > 0.0, "rescale_ground_state: omega_new must be > 0");
  if (!gs.converged) throw StateError("rescale_ground_state: ground state did not converge");
  GroundState out = gs;
  out.omega = omega_new;
  out.residual_history.clear();
  out.iterations = 0;
  if (omega_new != gs.omega) {
    const double q = omega_new / gs.omega;
    const double sq = std::sqrt(q);
    const auto r = gs.grid.nodes();
    const auto cphi = complexify(gs.phi);
    const auto cpsi = complexify(gs.psi);
    for (std::size_t j = 0; j < r.size(); ++j) {
      out.phi[j] = q * gs.grid.interpolate(cphi, sq * r[j]).real();
      out.psi[j] = q * gs.grid.interpolate(cpsi, sq * r[j]).real();
    }
  }
  const PhysicsParams p = out.params();
  out.functionals = evaluate_all(out.state(), p);
  out.residual = elliptic_residual(out.grid, p, out.phi, out.psi);
  out.message = "rescaled from omega = " + std::to_string(gs.omega);
  return out;
}

FieldPair dilate(const FieldPair& state, double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0, "dilate: lambda must be > 0");
  const Grid& g = state.grid();
  const double f = std::pow(lambda, 2.5);
  FieldPair out = FieldPair::zeros(g);
  const auto r = g.nodes();
  for (std::size_t j = 0; j < g.size(); ++j) {
    out.u()[j] = f * g.interpolate(state.u(), lambda * r[j]);
    out.v()[j] = f * g.interpolate(state.v(), lambda * r[j]);
  }
  return out;
}

FieldPair dilate_on_scaled_grid(const FieldPair& state, double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0, "dilate_on_scaled_grid: lambda must be > 0");
  const Grid& g = state.grid();
  if (g.kind() != GridKind::Radial5D) throw InvalidParameter("dilate_on_scaled_grid: radial grids only");
  const Grid scaled = make_radial_grid(static_cast<int>(g.size()), g.extent() / lambda, g.cluster());
  return FieldPair(scaled, {state.u().begin(), state.u().end()}, {state.v().begin(), state.v().end()})
      .scaled(std::pow(lambda, 2.5));
}

}  // namespace qnls
