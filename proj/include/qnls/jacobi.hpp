#pragma once

#include <span>
#include <vector>

namespace qnls::jacobi {

struct Quadrature {
  std::vector<double> nodes;    // ascending, in (-1, 1)
  std::vector<double> weights;  // positive
};

/// n-point Gauss rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1].
/// Exact for polynomials of degree <= 2n-1. Nodes come from the
/// Golub-Welsch eigenproblem and are then polished by Newton iteration on
/// the three-term recurrence; weights use the closed-form Christoffel
/// expression, which keeps the small endpoint weights accurate.
Quadrature gauss_jacobi(int n, double alpha, double beta);

/// Barycentric weights 1 / prod_{k != j}(x_j - x_k), scaled so the
/// largest magnitude is 1. Computed in log space to avoid overflow.
std::vector<double> barycentric_weights(std::span<const double> x);

/// Row-major n x n matrix D with (D f)_i = p'(x_i) for the interpolant p
/// of f through the nodes x.
std::vector<double> differentiation_matrix(std::span<const double> x);

/// Evaluates the interpolant through (x_j, f_j) at t using the second
/// barycentric formula.
double interpolate(std::span<const double> x, std::span<const double> bary,
                   std::span<const double> f, double t);

}  // namespace qnls::jacobi
