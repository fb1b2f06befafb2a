#include "doctest.h"
#include "helpers.hpp"

#include "qnls/errors.hpp"
#include "qnls/jacobi.hpp"

using namespace qnls;
using namespace testutil;

TEST_SUITE("grid") {

TEST_CASE("gauss-jacobi rule integrates polynomials exactly") {
  // ∫_{-1}^{1} (1+x)^{3/2} x^k dx against the same integral by substitution
  // x = 2t² - 1, computed with a fine composite Simpson rule
  const auto q = jacobi::gauss_jacobi(20, 0.0, 1.5);
  for (int k : {0, 3, 17, 39}) {
    double got = 0.0;
    for (std::size_t j = 0; j < q.nodes.size(); ++j) got += q.weights[j] * std::pow(q.nodes[j], k);
    const int m = 200000;
    double want = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double t = double(i) / m;
      const double x = 2 * t * t - 1;
      const double f = std::pow(2 * t * t, 1.5) * std::pow(x, k) * 4 * t;
      want += f * (i == 0 || i == m ? 1 : (i % 2 ? 4 : 2));
    }
    want /= 3.0 * m;
    CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("radial grid lowest eigenvalue matches the Bessel zero") {
  const Grid g = make_radial_grid(256, 20.0);
  const double j = first_root_tan_x_eq_x();  // first zero of J_{3/2}
  const double want = -(j / 20.0) * (j / 20.0);
  const auto lam = g.eigenvalues();
  CHECK(rel_err(lam[0], want) < 1e-10);
}

TEST_CASE("radial grid integrates the constant and the Gaussian") {
  const Grid g = make_radial_grid(256, 20.0);
  const auto one = sample(g, [](double) { return cplx(1.0); });
  const double vol = kSphereArea5 * std::pow(20.0, 5) / 5.0;
  CHECK(rel_err(inner(one, one, g).real(), vol) < 1e-10);
  CHECK(rel_err(g.measure(), vol) < 1e-12);

  const auto f = sample(g, [](double r) { return cplx(std::exp(-r * r)); });
  CHECK(rel_err(inner(f, f, g).real(), std::pow(M_PI / 2.0, 2.5)) < 1e-8);
  const double grad = kSphereArea5 * 4.0 * gauss_moment(6.0, 2.0);
  CHECK(rel_err(gradient_norm_sq(f, g), grad) < 1e-8);
  CHECK(rel_err(gradient_norm_sq_spectral(f, g), grad) < 1e-8);
}

TEST_CASE("grid constructors reject bad input") {
  CHECK_THROWS_AS(make_radial_grid(8, 20.0), InvalidParameter);
  CHECK_THROWS_AS(make_radial_grid(64, -1.0), InvalidParameter);
  CHECK_THROWS_AS(make_radial_grid(64, NAN), InvalidParameter);
  CHECK_THROWS_AS(make_radial_grid(64, 10.0, -1.0), InvalidParameter);
  CHECK_THROWS_AS(make_periodic_grid(48, 1.0), InvalidParameter);
  CHECK_THROWS_AS(make_periodic_grid(64, 0.0), InvalidParameter);
}

TEST_CASE("periodic grid symbols and plane waves") {
  const Grid g = make_periodic_grid(64, M_PI);
  auto lam = std::vector<double>(g.eigenvalues().begin(), g.eigenvalues().end());
  std::sort(lam.begin(), lam.end(), std::greater<>());
  CHECK(lam[0] == doctest::Approx(0.0));
  CHECK(lam[1] == doctest::Approx(-1.0));
  CHECK(lam[2] == doctest::Approx(-1.0));
  CHECK(lam[3] == doctest::Approx(-4.0));
  CHECK(lam[4] == doctest::Approx(-4.0));

  const auto e = sample(g, [](double x) { return std::exp(cplx(0, x)); });
  const auto le = g.laplacian(e);
  // rounding in the Nyquist mode is amplified by k^2 = 1024
  for (std::size_t j = 0; j < e.size(); ++j) CHECK(std::abs(le[j] + e[j]) < 4.0 * std::numeric_limits<double>::epsilon() * 1024.0);

  const Grid g1 = make_periodic_grid(64, 1.0);
  const auto one = sample(g1, [](double) { return cplx(1.0); });
  CHECK(inner(one, one, g1).real() == doctest::Approx(2.0).epsilon(1e-14));

  const auto s = sample(g, [](double x) { return cplx(std::sin(x)); });
  CHECK(gradient_norm_sq(s, g) == doctest::Approx(M_PI).epsilon(1e-13));
}

TEST_CASE("periodic quadrature is exact on trigonometric polynomials") {
  const Grid g = make_periodic_grid(64, 2.0);
  for (int k = 1; k < 31; ++k) {
    const auto c = sample(g, [&](double x) { return cplx(std::cos(k * M_PI * x / 2.0)); });
    const auto one = sample(g, [](double) { return cplx(1.0); });
    CHECK(std::abs(inner(one, c, g)) < 1e-13);
    CHECK(rel_err(inner(c, c, g).real(), 2.0) < 1e-10);
  }
}

TEST_CASE("inner product checks shapes and vanishes on zero") {
  const Grid g = make_radial_grid(32, 5.0);
  std::vector<cplx> z(g.size(), 0.0), short_(5, 1.0);
  CHECK(inner(z, z, g) == cplx(0.0));
  CHECK(gradient_norm_sq(z, g) == 0.0);
  CHECK_THROWS_AS(inner(z, short_, g), ShapeError);
  CHECK_THROWS_AS(FieldPair(g, z, short_), ShapeError);
}

TEST_CASE("discrete Laplacian is self-adjoint and negative") {
  std::mt19937_64 rng(7);
  for (const Grid& g : {make_radial_grid(128, 15.0), make_periodic_grid(256, 10.0)}) {
    for (double l : g.eigenvalues()) CHECK(l <= 1e-12);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto f = smooth_random(g, rng);
      const auto h = smooth_random(g, rng);
      const cplx a = inner(g.laplacian(f), h, g);
      const cplx b = inner(f, g.laplacian(h), g);
      worst = std::max(worst, std::abs(a - b) / (std::abs(a) + std::abs(b)));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("two gradient norms agree on random fields") {
  std::mt19937_64 rng(11);
  for (const Grid& g : {make_radial_grid(128, 15.0), make_periodic_grid(256, 10.0)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto f = smooth_random(g, rng);
      CHECK(rel_err(gradient_norm_sq(f, g), gradient_norm_sq_spectral(f, g)) < 1e-10);
    }
  }
}

TEST_CASE("spectral transforms invert each other") {
  std::mt19937_64 rng(3);
  for (const Grid& g : {make_radial_grid(96, 12.0), make_periodic_grid(128, 6.0)}) {
    const auto f = smooth_random(g, rng);
    const auto back = g.from_spectral(g.to_spectral(f));
    CHECK(sup_diff(f, back) < 1e-12 * sup_abs(f));
    // Parseval in the weighted inner product
    const auto c = g.to_spectral(f);
    double s = 0.0;
    for (const auto& x : c) s += std::norm(x);
    CHECK(rel_err(s, inner(f, f, g).real()) < 1e-12);
  }
}

TEST_CASE("interpolation reproduces smooth fields") {
  const Grid g = make_radial_grid(128, 15.0);
  const auto f = sample(g, [](double r) { return cplx(std::exp(-r * r / 4.0), r * r * std::exp(-r * r)); });
  for (double r : {0.0, 0.37, 1.9, 4.2, 10.0}) {
    const cplx want(std::exp(-r * r / 4.0), r * r * std::exp(-r * r));
    CHECK(std::abs(g.interpolate(f, r) - want) < 1e-10);
  }
  CHECK(g.interpolate(f, 16.0) == cplx(0.0));

  const Grid p = make_periodic_grid(128, 6.0);
  const auto h = sample(p, [](double x) { return cplx(std::exp(-x * x)); });
  CHECK(std::abs(p.interpolate(h, 0.123) - std::exp(-0.123 * 0.123)) < 1e-12);
  CHECK(std::abs(p.interpolate(h, 0.123 + 12.0) - std::exp(-0.123 * 0.123)) < 1e-12);
}

TEST_CASE("radial derivative of a Gaussian") {
  const Grid g = make_radial_grid(128, 15.0);
  const auto f = sample(g, [](double r) { return cplx(std::exp(-r * r)); });
  const auto d = g.derivative(f);
  const auto x = g.nodes();
  const auto w = g.weights();
  // next to the origin the node gap is O(1/n^2) and rounding grows like eps n^3,
  // so pointwise accuracy is asserted for r >= 1 and in the r^4 weighted norm everywhere
  double err = 0.0, werr = 0.0, wref = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double exact = -2.0 * x[j] * std::exp(-x[j] * x[j]);
    const double e = std::abs(d[j] - exact);
    if (x[j] >= 1.0) err = std::max(err, e);
    werr += w[j] * e * e;
    wref += w[j] * exact * exact;
  }
  CHECK(err < 1e-12);
  CHECK(std::sqrt(werr / wref) < 128.0 * 128.0 * std::numeric_limits<double>::epsilon());
}

TEST_CASE("resample between radial grids keeps the functionals") {
  const Grid a = make_radial_grid(128, 15.0, 4.0);
  const Grid b = make_radial_grid(192, 20.0, 8.0);
  const FieldPair s = gaussian_pair(a, 1.0, -0.5, 1.3);
  const FieldPair t = resample(s, b);
  CHECK(rel_err(inner(t.u(), t.u(), b).real(), inner(s.u(), s.u(), a).real()) < 1e-10);
  CHECK(rel_err(gradient_norm_sq(t.v(), b), gradient_norm_sq(s.v(), a)) < 1e-10);
}

}
