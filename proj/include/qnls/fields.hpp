#pragma once

// Spatial discretization and the system state.
//
// Two grid kinds share one interface:
//
//  * Radial5D   radial functions on the ball |x| <= R in R^5 with a Dirichlet
//               condition at R. Fields are polynomials in a mapped variable
//               sigma in (0, 1), where (r/R)^2 = sigma / (1 + c (1 - sigma))
//               and c >= 0 is the node-clustering parameter (c = 0 gives the
//               plain Gauss-Jacobi grid; larger c moves nodes toward r = 0).
//               Samples live at the Gauss-Jacobi nodes for the weight
//               sigma^{3/2}, so no node sits at the origin or at R. The
//               Laplacian is the Galerkin stiffness A = G^T W G with G the
//               spectral radial derivative, which makes it self-adjoint in the
//               quadrature inner product by construction.
//  * Periodic1D uniform grid on [-a, a); the Laplacian is diagonal in the
//               discrete Fourier basis.
//
// Quadrature weights include the sphere area |S^4| = 8 pi^2 / 3 so integrals
// of radial functions equal full R^5 integrals.

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qnls/kernels.hpp"

namespace qnls {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
/// Surface area of the unit sphere S^4 in R^5.
inline constexpr double kSphereArea5 = 8.0 * kPi * kPi / 3.0;

enum class GridKind { Radial5D, Periodic1D };

std::string to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& name);

namespace detail {
struct GridData;
}

/// Immutable discretization descriptor. Copies share the precomputed
/// eigendecomposition.
class Grid {
 public:
  GridKind kind() const;
  std::size_t size() const;
  /// R_max for Radial5D, half-length a for Periodic1D.
  double extent() const;
  /// Node-clustering parameter of a radial grid (0 for periodic grids).
  double cluster() const;
  /// Volume (Radial5D, in R^5) or length (Periodic1D) of the truncated domain.
  double measure() const;

  std::span<const double> nodes() const;
  std::span<const double> weights() const;
  /// Laplacian spectrum in the order of the spectral coefficients (increasing
  /// magnitude on radial grids, FFT order on periodic grids). All entries <= 0.
  std::span<const double> eigenvalues() const;

  /// Coefficients in the weighted-orthonormal Laplacian eigenbasis.
  void to_spectral(std::span<const cplx> f, std::span<cplx> c) const;
  void from_spectral(std::span<const cplx> c, std::span<cplx> f) const;
  std::vector<cplx> to_spectral(std::span<const cplx> f) const;
  std::vector<cplx> from_spectral(std::span<const cplx> c) const;

  /// Discrete Laplacian applied through the eigenbasis.
  std::vector<cplx> laplacian(std::span<const cplx> f) const;
  /// d/dr (Radial5D) or d/dx (Periodic1D), evaluated spectrally.
  std::vector<cplx> derivative(std::span<const cplx> f) const;
  /// Value of the grid interpolant of f at coordinate x (radius or position).
  /// Radial interpolants vanish for x >= R; periodic ones wrap.
  cplx interpolate(std::span<const cplx> f, double x) const;

  /// Row-major eigenvector matrix: column m holds e_m at the nodes, scaled so
  /// sum_j w_j e_m(x_j) e_k(x_j) = delta_mk. Radial grids only.
  kernels::DenseMatrix eigenvector_matrix() const;

  bool same_discretization(const Grid& other) const;

 private:
  friend Grid make_radial_grid(int n, double r_max, double cluster);
  friend Grid make_periodic_grid(int n, double half_length);
  explicit Grid(std::shared_ptr<const detail::GridData> d) : data_(std::move(d)) {}
  std::shared_ptr<const detail::GridData> data_;
};

inline constexpr double kDefaultRadialCluster = 6.0;

/// Radial grid on the 5-ball of radius r_max. Requires n >= 16, r_max > 0,
/// cluster >= 0.
Grid make_radial_grid(int n, double r_max, double cluster = kDefaultRadialCluster);
/// Periodic grid on [-half_length, half_length). n must be a power of two >= 16.
Grid make_periodic_grid(int n, double half_length);

/// Parameters of the system i u_t + Δu = v conj(u), i v_t + κ Δv = u².
struct PhysicsParams {
  double kappa = 1.0;
  double omega = 1.0;

  void validate() const;
  bool mass_resonant() const { return kappa == 0.5; }
  bool operator==(const PhysicsParams&) const = default;
};

/// The state (u, v) sampled on a grid.
class FieldPair {
 public:
  FieldPair(Grid grid, std::vector<cplx> u, std::vector<cplx> v);
  static FieldPair zeros(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::span<const cplx> u() const { return u_; }
  std::span<const cplx> v() const { return v_; }
  std::span<cplx> u() { return u_; }
  std::span<cplx> v() { return v_; }
  std::size_t size() const { return u_.size(); }

  /// (a u, a v) for a real factor a.
  FieldPair scaled(double a) const;
  /// Componentwise complex conjugate.
  FieldPair conjugated() const;
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<cplx> u_;
  std::vector<cplx> v_;
};

/// sum_j w_j conj(f_j) g_j
cplx inner(std::span<const cplx> f, std::span<const cplx> g, const Grid& grid);
/// ||∇f||^2 = <-Δf, f>, evaluated as the quadrature of |f'|^2.
double gradient_norm_sq(std::span<const cplx> f, const Grid& grid);
/// Same quantity through the eigenbasis: sum_m |λ_m| |<e_m, f>|^2.
double gradient_norm_sq_spectral(std::span<const cplx> f, const Grid& grid);

/// Interpolates a state onto another grid of the same kind (radial values
/// beyond the source radius are 0; periodic data must share the box).
FieldPair resample(const FieldPair& state, const Grid& target);

/// Real-valued convenience wrapper.
std::vector<cplx> complexify(std::span<const double> f);

}  // namespace qnls
