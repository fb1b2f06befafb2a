#include "qnls/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "qnls/errors.hpp"

namespace qnls::kernels {

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

namespace {

inline void rk4_point(cplx& u, cplx& v, double dt) {
  const cplx mi(0.0, -1.0);
  auto fu = [&](cplx a, cplx b) { return mi * b * std::conj(a); };
  auto fv = [&](cplx a) { return mi * a * a; };
  const cplx k1u = fu(u, v), k1v = fv(u);
  const cplx u2 = u + 0.5 * dt * k1u, v2 = v + 0.5 * dt * k1v;
  const cplx k2u = fu(u2, v2), k2v = fv(u2);
  const cplx u3 = u + 0.5 * dt * k2u, v3 = v + 0.5 * dt * k2v;
  const cplx k3u = fu(u3, v3), k3v = fv(u3);
  const cplx u4 = u + dt * k3u, v4 = v + dt * k3v;
  const cplx k4u = fu(u4, v4), k4v = fv(u4);
  u += (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  v += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
}

inline cplx row_dot(const double* row, const cplx* x, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    re += row[j] * x[j].real();
    im += row[j] * x[j].imag();
  }
  return {re, im};
}

void check_apply(const DenseMatrix& a, std::size_t nx, std::size_t ny) {
  if (nx != a.cols || ny != a.rows) throw ShapeError("dense apply: dimension mismatch");
}

// Blocked reduction: the sum of block partials is taken in block order so
// the value is independent of how blocks are shared among threads.
template <class F>
double blocked_sum(std::size_t n, F&& term, bool threaded) {
  const std::size_t nb = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(nb, 0.0);
  auto body = [&](std::size_t b) {
    const std::size_t lo = b * kReductionBlock, hi = std::min(n, lo + kReductionBlock);
    double s = 0.0;
    for (std::size_t j = lo; j < hi; ++j) s += term(j);
    partial[b] = s;
  };
  if (threaded) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) body(b);
  } else {
    for (std::size_t b = 0; b < nb; ++b) body(b);
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

}  // namespace

namespace serial {

void apply(const DenseMatrix& a, std::span<const cplx> x, std::span<cplx> y) {
  check_apply(a, x.size(), y.size());
  for (std::size_t i = 0; i < a.rows; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
}

void apply_pair(const DenseMatrix& a, std::span<const cplx> x1, std::span<const cplx> x2,
                std::span<cplx> y1, std::span<cplx> y2) {
  apply(a, x1, y1);
  apply(a, x2, y2);
}

void phase_rotate(std::span<cplx> c, std::span<const double> lambda, double t) {
  for (std::size_t m = 0; m < c.size(); ++m) c[m] *= std::polar(1.0, t * lambda[m]);
}

void scale(std::span<cplx> f, std::span<const double> m) {
  for (std::size_t j = 0; j < f.size(); ++j) f[j] *= m[j];
}

void rk4_quadratic(std::span<cplx> u, std::span<cplx> v, double dt) {
  for (std::size_t j = 0; j < u.size(); ++j) rk4_point(u[j], v[j], dt);
}

cplx weighted_dot(std::span<const double> w, std::span<const cplx> f, std::span<const cplx> g) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * std::conj(f[j]) * g[j];
  return s;
}

double weighted_abs_pow(std::span<const double> w, std::span<const cplx> f, double p) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * std::pow(std::abs(f[j]), p);
  return s;
}

double coupling(std::span<const double> w, std::span<const cplx> u, std::span<const cplx> v) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * std::real(u[j] * u[j] * std::conj(v[j]));
  return s;
}

double max_abs(std::span<const cplx> f) {
  double m = 0.0;
  for (const auto& z : f) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace serial

namespace parallel {

void apply(const DenseMatrix& a, std::span<const cplx> x, std::span<cplx> y) {
  check_apply(a, x.size(), y.size());
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) y[i] = row_dot(&a.data[i * a.cols], x.data(), a.cols);
}

void apply_pair(const DenseMatrix& a, std::span<const cplx> x1, std::span<const cplx> x2,
                std::span<cplx> y1, std::span<cplx> y2) {
  check_apply(a, x1.size(), y1.size());
  check_apply(a, x2.size(), y2.size());
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(a.rows);
  const std::size_t n = a.cols;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const double* row = &a.data[i * n];
    double r1 = 0.0, i1 = 0.0, r2 = 0.0, i2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      r1 += row[j] * x1[j].real();
      i1 += row[j] * x1[j].imag();
      r2 += row[j] * x2[j].real();
      i2 += row[j] * x2[j].imag();
    }
    y1[i] = {r1, i1};
    y2[i] = {r2, i2};
  }
}

void phase_rotate(std::span<cplx> c, std::span<const double> lambda, double t) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(c.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < n; ++m) c[m] *= std::polar(1.0, t * lambda[m]);
}

void scale(std::span<cplx> f, std::span<const double> m) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) f[j] *= m[j];
}

void rk4_quadratic(std::span<cplx> u, std::span<cplx> v, double dt) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) rk4_point(u[j], v[j], dt);
}

cplx weighted_dot(std::span<const double> w, std::span<const cplx> f, std::span<const cplx> g) {
  const double re = blocked_sum(
      w.size(), [&](std::size_t j) { return w[j] * std::real(std::conj(f[j]) * g[j]); }, true);
  const double im = blocked_sum(
      w.size(), [&](std::size_t j) { return w[j] * std::imag(std::conj(f[j]) * g[j]); }, true);
  return {re, im};
}

double weighted_abs_pow(std::span<const double> w, std::span<const cplx> f, double p) {
  return blocked_sum(
      w.size(), [&](std::size_t j) { return w[j] * std::pow(std::abs(f[j]), p); }, true);
}

double coupling(std::span<const double> w, std::span<const cplx> u, std::span<const cplx> v) {
  return blocked_sum(
      w.size(), [&](std::size_t j) { return w[j] * std::real(u[j] * u[j] * std::conj(v[j])); },
      true);
}

double max_abs(std::span<const cplx> f) {
  double m = 0.0;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) m = std::max(m, std::abs(f[j]));
  return m;
}

}  // namespace parallel

int configure_threads_from_env() {
  if (const char* env = std::getenv("QNLS_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) omp_set_num_threads(n);
    } catch (const std::exception&) {
      // ignored: a malformed override leaves the runtime default
    }
  }
  return omp_get_max_threads();
}

}  // namespace qnls::kernels
