#include <deque>

#include "doctest.h"
#include "helpers.hpp"

#include "qnls/errors.hpp"
#include "qnls/ground_state.hpp"

using namespace qnls;
using namespace testutil;

namespace {

const Grid& base_grid() {
  static const Grid g = make_radial_grid(256, 20.0);
  return g;
}

const GroundState& gs_at(double kappa, double omega) {
  static std::deque<std::pair<std::pair<double, double>, GroundState>> cache;  // stable references
  for (const auto& [key, gs] : cache)
    if (key.first == kappa && key.second == omega) return gs;
  cache.emplace_back(std::make_pair(kappa, omega), solve_ground_state(base_grid(), {kappa, omega}));
  return cache.back().second;
}

double sup_rel(std::span<const double> a, std::span<const double> b) {
  double d = 0.0, s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    d = std::max(d, std::abs(a[j] - b[j]));
    s = std::max(s, std::abs(b[j]));
  }
  return d / s;
}

}  // namespace

TEST_SUITE("ground_state") {

TEST_CASE("converged ground states satisfy the elliptic system and K = 0") {
  for (double kappa : {0.5, 1.0, 2.0}) {
    CAPTURE(kappa);
    const GroundState& gs = gs_at(kappa, 1.0);
    REQUIRE(gs.converged);
    const auto& f = gs.functionals;
    CHECK(std::abs(f.K) <= 1e-8 * f.L);
    CHECK(gs.residual <= 1e-10);
    CHECK(f.N < 0.0);
    CHECK(std::abs(f.N + 0.8 * f.L) <= 1e-8 * f.L);
    // independent residual evaluation
    CHECK(elliptic_residual(gs.grid, gs.params(), gs.phi, gs.psi) <= 1e-10);
    // sign structure
    const double pmax = *std::max_element(gs.phi.begin(), gs.phi.end());
    const double qmin = *std::min_element(gs.psi.begin(), gs.psi.end());
    CHECK(pmax > 0.0);
    CHECK(qmin < 0.0);
    for (double x : gs.phi) CHECK(x > -1e-12 * pmax);
    for (double x : gs.psi) CHECK(x < -1e-12 * qmin);
    // residual settles over the final iterations
    const auto& h = gs.residual_history;
    REQUIRE(h.size() >= 10);
    CHECK(h.back() <= 1e-10);
    CHECK(h.back() < h[h.size() - 10]);
  }
}

TEST_CASE("a direct substitution check of the elliptic system") {
  // -ωφ + Δφ - φψ and -2ωψ + κΔψ - φ² evaluated by hand on the grid
  const GroundState& gs = gs_at(1.0, 1.0);
  const Grid& g = gs.grid;
  const auto phi = complexify(gs.phi), psi = complexify(gs.psi);
  const auto lp = g.laplacian(phi), lq = g.laplacian(psi);
  double r1 = 0.0, r2 = 0.0, scale;
  for (std::size_t j = 0; j < g.size(); ++j) {
    r1 = std::max(r1, std::abs(-phi[j] + lp[j] - phi[j] * psi[j]));
    r2 = std::max(r2, std::abs(-2.0 * psi[j] + lq[j] - phi[j] * phi[j]));
  }
  scale = sup_abs(phi) + sup_abs(psi);
  CHECK(std::max(r1, r2) / scale <= 1e-10);
}

TEST_CASE("refinement leaves M, E and the action unchanged") {
  const GroundState a = solve_ground_state(make_radial_grid(512, 30.0), {0.5, 1.0});
  const GroundState b = solve_ground_state(make_radial_grid(768, 40.0), {0.5, 1.0});
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK(std::abs(a.functionals.K) <= 1e-8 * a.functionals.L);
  CHECK(rel_err(a.functionals.M, b.functionals.M) < 1e-5);
  CHECK(rel_err(a.functionals.E, b.functionals.E) < 1e-5);
  CHECK(rel_err(mu_omega(a), mu_omega(b)) < 1e-5);
  // and the coarse default grid agrees too
  const GroundState& c = gs_at(0.5, 1.0);
  CHECK(rel_err(c.functionals.M, b.functionals.M) < 1e-5);
}

TEST_CASE("frequency scaling") {
  const GroundState& g1 = gs_at(1.0, 1.0);
  const GroundState& g4 = gs_at(1.0, 4.0);
  const GroundState& g2 = gs_at(1.0, 2.0);
  REQUIRE(g4.converged);
  const GroundState r4 = rescale_ground_state(g1, 4.0);
  CHECK(sup_rel(r4.phi, g4.phi) < 1e-5);
  CHECK(sup_rel(r4.psi, g4.psi) < 1e-5);
  CHECK(rel_err(r4.functionals.M / g1.functionals.M, 0.5) < 1e-5);
  CHECK(rel_err(mu_omega(g2), std::sqrt(2.0) * mu_omega(g1)) < 1e-5);
  CHECK(rel_err(r4.functionals.threshold_product, g1.functionals.threshold_product) < 1e-6);

  const GroundState same = rescale_ground_state(g1, 1.0);
  CHECK(sup_rel(same.phi, g1.phi) < 1e-12);
  CHECK(sup_rel(same.psi, g1.psi) < 1e-12);
  CHECK_THROWS_AS(rescale_ground_state(g1, 0.0), InvalidParameter);
  CHECK_THROWS_AS(rescale_ground_state(g1, -1.0), InvalidParameter);
}

TEST_CASE("threshold product does not depend on omega") {
  for (double kappa : {0.5, 1.0, 2.0}) {
    double lo = INFINITY, hi = -INFINITY;
    for (double omega : {0.5, 1.0, 2.0, 4.0}) {
      const GroundState& gs = gs_at(kappa, omega);
      REQUIRE(gs.converged);
      lo = std::min(lo, gs.functionals.threshold_product);
      hi = std::max(hi, gs.functionals.threshold_product);
    }
    CHECK((hi - lo) / hi < 1e-6);
  }
}

TEST_CASE("action minimum and the infimum probe") {
  const GroundState& gs = gs_at(1.0, 1.0);
  const double mu = mu_omega(gs);
  CHECK(mu > 0.0);
  CHECK(rel_err(mu, 0.1 * gs.functionals.L + 0.5 * gs.functionals.M) < 1e-8);

  const auto probe = probe_infimum(gs, 20, 3);
  CHECK(probe.samples == 20);
  CHECK(probe.max_K <= 0.0);
  CHECK(probe.holds);
  CHECK(probe.min_J >= mu * (1.0 - 1e-6));

  // dilation of the ground state to the K = 0 point is the ground state itself
  const FieldPair s = gs.state();
  for (double lam : {0.7, 1.4}) {
    const auto d = evaluate_all(dilate_on_scaled_grid(s, lam), gs.params());
    // on a dilated copy, find λ0 with K = 0 from the scaling law and check J
    const double l0 = std::pow(-d.L / (1.25 * d.N), 2.0);
    const auto back = evaluate_all(dilate_on_scaled_grid(dilate_on_scaled_grid(s, lam), l0), gs.params());
    CHECK(std::abs(back.K) <= 1e-8 * back.L);
    CHECK(back.J_omega >= mu * (1.0 - 1e-8));
  }
}

TEST_CASE("failure modes are reported, never silent") {
  SolverOptions zero;
  zero.zero_guess = true;
  const GroundState z = solve_ground_state(base_grid(), {1.0, 1.0}, zero);
  CHECK_FALSE(z.converged);
  CHECK_FALSE(z.message.empty());
  CHECK_THROWS_AS(mu_omega(z), StateError);

  SolverOptions capped;
  capped.max_iter = 3;
  const GroundState c = solve_ground_state(base_grid(), {1.0, 1.0}, capped);
  CHECK_FALSE(c.converged);
  CHECK(c.message.find("iteration cap") != std::string::npos);
  CHECK(c.residual_history.size() == 3);

  CHECK_THROWS_AS(solve_ground_state(make_periodic_grid(64, 5.0), {1.0, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(solve_ground_state(base_grid(), {-1.0, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(solve_ground_state(base_grid(), {1.0, 0.0}), InvalidParameter);
}

TEST_CASE("different seeds find one profile") {
  SolverOptions o;
  const auto s = search_ground_state(base_grid(), {2.0, 1.0}, o, {1.0, 2.0, 4.0});
  REQUIRE(s.any_converged);
  CHECK_FALSE(s.distinct);
  CHECK(s.candidates.size() == 3);
  for (const auto& c : s.candidates) CHECK(c.functionals.I_omega >= s.candidates[s.best].functionals.I_omega);
}

TEST_CASE("dilation helpers agree") {
  const GroundState& gs = gs_at(1.0, 1.0);
  const FieldPair s = gs.state();
  const auto a = evaluate_all(dilate(s, 1.3), gs.params());
  const auto b = evaluate_all(dilate_on_scaled_grid(s, 1.3), gs.params());
  CHECK(rel_err(a.M, b.M) < 1e-8);
  CHECK(rel_err(a.L, b.L) < 1e-8);
  CHECK(rel_err(a.N, b.N) < 1e-8);
}

}
