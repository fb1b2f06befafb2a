#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "qnls/fields.hpp"

namespace testutil {

using qnls::cplx;
using qnls::FieldPair;
using qnls::Grid;

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

inline double sup_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

inline double sup_abs(std::span<const cplx> a) {
  double m = 0.0;
  for (const auto& x : a) m = std::max(m, std::abs(x));
  return m;
}

inline double state_distance(const FieldPair& a, const FieldPair& b) {
  return std::max(sup_diff(a.u(), b.u()), sup_diff(a.v(), b.v()));
}

inline double state_sup(const FieldPair& a) { return std::max(sup_abs(a.u()), sup_abs(a.v())); }

// ∫_0^∞ r^p e^{-a r²} dr
inline double gauss_moment(double p, double a) { return std::tgamma(0.5 * (p + 1.0)) / (2.0 * std::pow(a, 0.5 * (p + 1.0))); }

template <class F>
std::vector<cplx> sample(const Grid& g, F f) {
  std::vector<cplx> out(g.size());
  const auto x = g.nodes();
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = f(x[j]);
  return out;
}

inline FieldPair gaussian_pair(const Grid& g, double a, double b, double width, double x0 = 0.0) {
  auto u = sample(g, [&](double x) { return cplx(a * std::exp(-std::pow((x - x0) / width, 2))); });
  auto v = sample(g, [&](double x) { return cplx(b * std::exp(-std::pow((x - x0) / width, 2))); });
  return FieldPair(g, std::move(u), std::move(v));
}

// Smooth random field: a Gaussian envelope times a few random low modes.
inline std::vector<cplx> smooth_random(const Grid& g, std::mt19937_64& rng, double width = 1.5) {
  std::normal_distribution<double> nd;
  const int modes = 4;
  std::vector<cplx> coef(modes);
  for (auto& c : coef) c = cplx(nd(rng), nd(rng));
  const double shift = g.kind() == qnls::GridKind::Periodic1D ? 0.5 * nd(rng) : 0.0;
  return sample(g, [&](double x) {
    cplx s = 0.0;
    for (int k = 0; k < modes; ++k) s += coef[k] * std::pow(x - shift, 2 * k) / std::tgamma(k + 1.0);
    return s * std::exp(-std::pow((x - shift) / width, 2));
  });
}

inline FieldPair random_pair(const Grid& g, std::mt19937_64& rng, double width = 1.5) {
  return FieldPair(g, smooth_random(g, rng, width), smooth_random(g, rng, width));
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("qnls_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

// First positive root of tan x = x, found by bisection on (π, 3π/2).
inline double first_root_tan_x_eq_x() {
  double lo = M_PI + 1e-9, hi = 1.5 * M_PI - 1e-9;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::tan(mid) - mid > 0.0) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace testutil
