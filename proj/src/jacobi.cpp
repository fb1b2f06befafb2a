#include "qnls/jacobi.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qnls/errors.hpp"

namespace qnls::jacobi {
namespace {

// P_n and P_{n-1} of the Jacobi family at x.
std::pair<double, double> jacobi_pair(int n, double a, double b, double x) {
  double p0 = 1.0;
  double p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
  if (n == 0) return {p0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * (k + 1) * (k + a + b + 1) * s;
    const double c2 = (s + 1) * ((s + 2) * s * x + a * a - b * b);
    const double c3 = 2.0 * (k + a) * (k + b) * (s + 2);
    const double p2 = (c2 * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

double jacobi_derivative(int n, double a, double b, double x, double pn, double pnm1) {
  const double s = 2.0 * n + a + b;
  return (n * ((a - b) - s * x) * pn + 2.0 * (n + a) * (n + b) * pnm1) / (s * (1.0 - x * x));
}

}  // namespace

Quadrature gauss_jacobi(int n, double alpha, double beta) {
  require(n >= 1, "gauss_jacobi: n must be positive");
  require(alpha > -1.0 && beta > -1.0, "gauss_jacobi: exponents must exceed -1");

  // Golub-Welsch starting values.
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + alpha + beta;
    diag(k) = (k == 0 && std::abs(s) < 1e-14)
                  ? (beta - alpha) / (alpha + beta + 2.0)
                  : (beta * beta - alpha * alpha) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + alpha + beta;
    sub(k - 1) = std::sqrt(4.0 * k * (k + alpha) * (k + beta) * (k + alpha + beta) /
                           (s * s * (s + 1.0) * (s - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);

  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double log_const = (alpha + beta + 1.0) * std::log(2.0) + std::lgamma(n + alpha + 1.0) +
                           std::lgamma(n + beta + 1.0) - std::lgamma(n + alpha + beta + 1.0) -
                           std::lgamma(n + 1.0);
  for (int j = 0; j < n; ++j) {
    double x = es.eigenvalues()(j);
    double dp = 1.0;
    for (int it = 0; it < 8; ++it) {
      auto [pn, pm] = jacobi_pair(n, alpha, beta, x);
      dp = jacobi_derivative(n, alpha, beta, x, pn, pm);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    auto [pn, pm] = jacobi_pair(n, alpha, beta, x);
    dp = jacobi_derivative(n, alpha, beta, x, pn, pm);
    q.nodes[j] = x;
    q.weights[j] = std::exp(log_const) / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

std::vector<double> barycentric_weights(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> logw(n), sign(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = x[j] - x[k];
      acc -= std::log(std::abs(d));
      if (d < 0) sign[j] = -sign[j];
    }
    logw[j] = acc;
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = sign[j] * std::exp(logw[j] - top);
  return w;
}

std::vector<double> differentiation_matrix(std::span<const double> x) {
  const std::size_t n = x.size();
  const auto lam = barycentric_weights(x);
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = lam[j] / lam[i] / (x[i] - x[j]);
      d[i * n + j] = v;
      diag -= v;
    }
    d[i * n + i] = diag;
  }
  return d;
}

double interpolate(std::span<const double> x, std::span<const double> bary,
                   std::span<const double> f, double t) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = t - x[j];
    if (d == 0.0) return f[j];
    const double c = bary[j] / d;
    num += c * f[j];
    den += c;
  }
  return num / den;
}

}  // namespace qnls::jacobi
