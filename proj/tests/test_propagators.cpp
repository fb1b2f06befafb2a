#include "doctest.h"
#include "helpers.hpp"

#include "qnls/errors.hpp"
#include "qnls/propagators.hpp"

using namespace qnls;
using namespace testutil;

namespace {

const Grid& line() {
  static const Grid g = make_periodic_grid(1024, 8.0 * kPi);
  return g;
}

// Pointwise RK4 written out independently, used with 10x substeps as an
// oracle for nonlinear_substep.
void rk4_ref(cplx& u, cplx& v, double dt, int sub) {
  auto f = [](cplx a, cplx b) { return std::make_pair(cplx(0, -1) * b * std::conj(a), cplx(0, -1) * a * a); };
  const double h = dt / sub;
  for (int i = 0; i < sub; ++i) {
    auto [k1u, k1v] = f(u, v);
    auto [k2u, k2v] = f(u + 0.5 * h * k1u, v + 0.5 * h * k1v);
    auto [k3u, k3v] = f(u + 0.5 * h * k2u, v + 0.5 * h * k2v);
    auto [k4u, k4v] = f(u + h * k3u, v + h * k3v);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
}

FieldPair run_to(const FieldPair& s, double t, double dt, const PhysicsParams& p) {
  const int n = static_cast<int>(std::lround(t / dt));
  FieldPair cur = s;
  for (int i = 0; i < n; ++i) cur = strang_step(cur, dt, p, {}).state;
  return cur;
}

}  // namespace

TEST_SUITE("propagators") {

TEST_CASE("free Gaussian matches the closed form") {
  const double t = 0.1;
  for (double kappa : {0.5, 1.0, 2.0}) {
    const PhysicsParams p{kappa, 1.0};
    const FieldPair s = gaussian_pair(line(), 1.0, 1.0, 1.0);
    const FieldPair out = linear_flow(s, t, p);
    const auto x = line().nodes();
    double err = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const cplx du(1.0, 4.0 * t), dv(1.0, 4.0 * kappa * t);
      const cplx u = std::pow(du, -0.5) * std::exp(-x[j] * x[j] / du);
      const cplx v = std::pow(dv, -0.5) * std::exp(-x[j] * x[j] / dv);
      err = std::max({err, std::abs(out.u()[j] - u), std::abs(out.v()[j] - v)});
    }
    CHECK(err <= 1e-8);
  }
}

TEST_CASE("linear flow is a unitary group") {
  std::mt19937_64 rng(4);
  const Grid g = make_radial_grid(128, 15.0);
  const FieldPair s = random_pair(g, rng);
  const PhysicsParams p{0.7, 1.0};
  CHECK(state_distance(linear_flow(s, 0.0, p), s) == 0.0);
  const FieldPair a = linear_flow(linear_flow(s, 0.3, p), 0.2, p);
  const FieldPair b = linear_flow(s, 0.5, p);
  CHECK(state_distance(a, b) < 1e-12 * state_sup(s));
  CHECK(state_distance(linear_flow(b, -0.5, p), s) < 1e-12 * state_sup(s));
  CHECK(rel_err(evaluate_all(b, p).M, evaluate_all(s, p).M) < 1e-13);
  CHECK(rel_err(evaluate_all(b, p).L, evaluate_all(s, p).L) < 1e-12);
}

TEST_CASE("nonlinear substep") {
  const Grid g = make_radial_grid(32, 5.0);
  // u = 0 is a fixed point
  std::vector<cplx> zero(g.size(), 0.0), v(g.size(), cplx(0.3, -1.2));
  const FieldPair fixed(g, zero, v);
  CHECK(state_distance(nonlinear_substep(fixed, 1e-2), fixed) == 0.0);

  // v = 0 initially: against a 10x substepped reference
  std::vector<cplx> u(g.size(), cplx(0.8, 0.4));
  const FieldPair s(g, u, zero);
  const FieldPair out = nonlinear_substep(s, 1e-2);
  cplx ur = u[0], vr = 0.0;
  rk4_ref(ur, vr, 1e-2, 10);
  CHECK(std::abs(out.u()[0] - ur) < 1e-10);
  CHECK(std::abs(out.v()[0] - vr) < 1e-10);
  CHECK(std::abs(out.u()[0] - u[0]) < 1e-3);  // u barely moves at first

  // pointwise mass on random values
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  std::vector<cplx> a(g.size()), b(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) a[j] = {nd(rng), nd(rng)}, b[j] = {nd(rng), nd(rng)};
  const FieldPair r = nonlinear_substep(FieldPair(g, a, b), 1e-3);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double m0 = std::norm(a[j]) + std::norm(b[j]);
    CHECK(std::abs(std::norm(r.u()[j]) + std::norm(r.v()[j]) - m0) <= 1e-14 * m0);
  }
}

TEST_CASE("tiny data follows the linear flow") {
  const PhysicsParams p{1.0, 1.0};
  const FieldPair s = gaussian_pair(line(), 1e-8, 1e-8, 1.0);
  const FieldPair a = strang_step(s, 1e-3, p, {}).state;
  const FieldPair b = linear_flow(s, 1e-3, p);
  // the nonlinear part moves the state by about dt |u|^2
  const double sup = state_sup(b);
  CHECK(state_distance(a, b) <= 2.0 * 1e-3 * sup * sup + 1e-14 * sup);
}

TEST_CASE("Strang splitting is second order") {
  const PhysicsParams p{1.0, 1.0};
  const FieldPair s = gaussian_pair(line(), 1.0, 0.5, 1.0);
  const double t = 0.4;
  const FieldPair ref = run_to(s, t, 0.02 / 16.0, p);
  const double e1 = state_distance(run_to(s, t, 0.02, p), ref);
  const double e2 = state_distance(run_to(s, t, 0.01, p), ref);
  const double e3 = state_distance(run_to(s, t, 0.005, p), ref);
  const double order = std::log2(e2 / e3);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(order >= 1.9);
  CHECK(order <= 2.1);
}

TEST_CASE("conservation without absorber") {
  const PhysicsParams p{1.0, 1.0};
  const FieldPair s = gaussian_pair(line(), 1.0, 0.5, 1.0);
  EvolveOptions o;
  o.dt = 1e-3;
  o.t_end = 1.0;
  o.sample_every = 100;
  for (Scheme scheme : {Scheme::Strang, Scheme::Yoshida4}) {
    o.scheme = scheme;
    const auto rec = evolve(s, p, o);
    const auto& r0 = rec.reports.front();
    double dm = 0.0, de = 0.0;
    for (const auto& r : rec.reports) {
      dm = std::max(dm, std::abs(r.M - r0.M) / r0.M);
      de = std::max(de, std::abs(r.E - r0.E) / std::abs(r0.E));
    }
    CAPTURE(to_string(scheme));
    CHECK(dm <= 1e-12);
    // Strang's energy error at this dt is about 1e-7; the composition is far below
    CHECK(de <= (scheme == Scheme::Strang ? 1e-6 : 1e-10));
  }
}

TEST_CASE("time reversal through conjugation") {
  const PhysicsParams p{0.8, 1.0};
  const Grid g = make_radial_grid(128, 20.0);
  const FieldPair s = gaussian_pair(g, 1.0, -0.6, 1.2);
  const FieldPair fwd = run_to(s, 0.5, 1e-3, p);
  const FieldPair back = run_to(fwd.conjugated(), 0.5, 1e-3, p);
  CHECK(state_distance(back, s.conjugated()) <= 1e-6);
}

TEST_CASE("absorber removes mass monotonically") {
  const PhysicsParams p{1.0, 1.0};
  const Grid g = make_radial_grid(128, 10.0);
  const FieldPair s = gaussian_pair(g, 0.5, 0.2, 3.0);
  EvolveOptions o;
  o.dt = 1e-2;
  o.t_end = 2.0;
  o.absorber_strength = 5.0;
  o.sample_every = 5;
  const auto rec = evolve(s, p, o);
  REQUIRE(rec.completed);
  for (std::size_t k = 1; k < rec.size(); ++k) {
    CHECK(rec.absorbed_mass[k] >= rec.absorbed_mass[k - 1]);
    CHECK(rec.s_norm_cum[k] >= rec.s_norm_cum[k - 1]);
    CHECK(rec.times[k] > rec.times[k - 1]);
  }
  CHECK(rec.absorbed_mass.back() > 0.0);
  // mass lost equals mass absorbed, up to the splitting error
  CHECK(std::abs(rec.reports.back().M + rec.absorbed_mass.back() - rec.reports.front().M) <= 1e-6 * rec.reports.front().M);
  CHECK_THROWS_AS(strang_step(s, -1e-3, p, o), InvalidParameter);

  const auto sigma = absorber_profile(g, o);
  const auto x = g.nodes();
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (x[j] <= 8.0) CHECK(sigma[j] == 0.0);
    CHECK(sigma[j] <= 5.0);
  }
}

TEST_CASE("zero data stays zero") {
  const Grid g = make_radial_grid(64, 10.0);
  EvolveOptions o;
  o.t_end = 0.05;
  o.dt = 1e-2;
  const auto rec = evolve(FieldPair::zeros(g), {}, o);
  CHECK(rec.zero_data);
  CHECK_FALSE(rec.blowup);
  CHECK(rec.completed);
  for (const auto& r : rec.reports) CHECK(r.M == 0.0);
  for (double s : rec.s_norm_cum) CHECK(s == 0.0);
}

TEST_CASE("evolve samples, snapshots and the sink") {
  const Grid g = make_radial_grid(64, 10.0);
  EvolveOptions o;
  o.dt = 1e-2;
  o.t_end = 0.1;
  o.sample_every = 3;
  o.snapshot_every = 2;
  int calls = 0, snaps = 0;
  const auto rec = evolve(gaussian_pair(g, 0.3, 0.1, 1.0), {}, o, [&](double, const FunctionalReport&, const FieldPair* s) {
    ++calls;
    snaps += s != nullptr;
  });
  CHECK(rec.times.front() == 0.0);
  CHECK(rec.times.back() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(calls == static_cast<int>(rec.size()));
  CHECK(snaps == static_cast<int>(rec.snapshots.size()));
  CHECK(rec.size() == 5);  // t = 0, 0.03, 0.06, 0.09, 0.1
  CHECK(rec.steps == 10);
}

TEST_CASE("invalid step arguments") {
  const Grid g = make_radial_grid(32, 5.0);
  const FieldPair s = FieldPair::zeros(g);
  CHECK_THROWS_AS(strang_step(s, 0.0, {}, {}), InvalidParameter);
  CHECK_THROWS_AS(strang_step(s, NAN, {}, {}), InvalidParameter);
  EvolveOptions o;
  o.dt_min = 1.0;
  CHECK_THROWS_AS(evolve(s, {}, o), InvalidParameter);
  o = {};
  o.absorber_start_fraction = 1.0;
  CHECK_THROWS_AS(evolve(s, {}, o), InvalidParameter);
  CHECK_THROWS_AS(scheme_from_string("euler"), InvalidParameter);
  CHECK(scheme_from_string(to_string(Scheme::Yoshida4)) == Scheme::Yoshida4);
}

TEST_CASE("overflow raises the blow-up flag and keeps the last state") {
  const Grid g = make_radial_grid(32, 5.0);
  std::vector<cplx> big(g.size(), cplx(1e200, 0.0));
  const FieldPair s(g, big, big);
  const auto res = strang_step(s, 1e-2, {}, {});
  CHECK(res.blowup_flag);
  CHECK(state_distance(res.state, s) == 0.0);
}

TEST_CASE("Galilean boost") {
  const PhysicsParams p{1.0, 1.0};
  const FieldPair s = gaussian_pair(line(), 1.0, 0.5, 1.0);
  CHECK(state_distance(galilean_boost(s, 0.0), s) == 0.0);
  const double xi = 2.0;
  const FieldPair b = galilean_boost(s, xi);
  const auto r0 = evaluate_all(s, p), r1 = evaluate_all(b, p);
  CHECK(rel_err(r1.M, r0.M) < 1e-14);
  // momentum shift by direct quadrature of the modulated fields
  CHECK(std::abs((r1.P - r0.P) - xi * r0.M) <= 1e-10 * r0.M);
  CHECK_THROWS_AS(galilean_boost(s, 0.1), InvalidParameter);
  CHECK_THROWS_AS(galilean_boost(gaussian_pair(make_radial_grid(32, 5.0), 1, 1, 1), 1.0), InvalidParameter);
}

TEST_CASE("spectral translation") {
  const FieldPair s = gaussian_pair(line(), 1.0, 0.5, 1.0);
  const FieldPair t = translate(s, 1.234);
  const FieldPair want = gaussian_pair(line(), 1.0, 0.5, 1.0, 1.234);
  CHECK(state_distance(t, want) < 1e-12);
  CHECK(state_distance(translate(t, -1.234), s) < 1e-12);
  CHECK(state_distance(translate(s, 16.0 * kPi), s) < 1e-12);
}

}
