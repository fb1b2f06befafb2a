#include <fftw3.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <mutex>

#include "qnls/errors.hpp"
#include "qnls/fields.hpp"
#include "qnls/jacobi.hpp"

namespace qnls {

namespace detail {

// FFTW planning is not thread safe; execution on distinct buffers is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  cplx* data() { return reinterpret_cast<cplx*>(ptr); }
  fftw_complex* ptr;
};

struct GridData {
  GridKind kind{};
  std::size_t n = 0;
  double extent = 0.0;
  double cluster = 0.0;
  double measure = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> eigvals;

  // Radial5D
  std::vector<double> sigma;        // mapped nodes in (0, 1)
  std::vector<double> sigma_bary;   // barycentric weights on sigma
  kernels::DenseMatrix forward;     // Q^T diag(sqrt w)
  kernels::DenseMatrix backward;    // diag(1/sqrt w) Q
  kernels::DenseMatrix derivative;  // d/dr at the nodes

  // Periodic1D
  std::vector<double> wavenumber;
  std::vector<double> parity;  // (-1)^m for the signed mode index
  fftw_plan plan_fwd = nullptr;
  fftw_plan plan_bwd = nullptr;

  ~GridData() {
    if (plan_fwd || plan_bwd) {
      std::lock_guard lock(fftw_planner_mutex());
      if (plan_fwd) fftw_destroy_plan(plan_fwd);
      if (plan_bwd) fftw_destroy_plan(plan_bwd);
    }
  }
};

}  // namespace detail

std::string to_string(GridKind kind) {
  return kind == GridKind::Radial5D ? "radial5d" : "periodic1d";
}

GridKind grid_kind_from_string(const std::string& name) {
  if (name == "radial5d" || name == "Radial5D") return GridKind::Radial5D;
  if (name == "periodic1d" || name == "Periodic1D") return GridKind::Periodic1D;
  throw InvalidParameter("unknown grid kind '" + name + "' (expected radial5d or periodic1d)");
}

Grid make_radial_grid(int n, double r_max, double cluster) {
  require(n >= 16, "make_radial_grid: n must be >= 16 (got " + std::to_string(n) + ")");
  require(std::isfinite(r_max) && r_max > 0.0, "make_radial_grid: r_max must be finite and > 0");
  require(std::isfinite(cluster) && cluster >= 0.0, "make_radial_grid: cluster must be >= 0");

  auto d = std::make_shared<detail::GridData>();
  d->kind = GridKind::Radial5D;
  d->n = static_cast<std::size_t>(n);
  d->extent = r_max;
  d->cluster = cluster;
  d->measure = kSphereArea5 * std::pow(r_max, 5) / 5.0;

  // Gauss rule for sigma^{3/2} on (0, 1).
  const auto q = jacobi::gauss_jacobi(n, 0.0, 1.5);
  const std::size_t N = d->n;
  d->sigma.resize(N);
  d->nodes.resize(N);
  d->weights.resize(N);
  std::vector<double> drdsig_inv(N);  // dsigma/dr
  const double r5 = std::pow(r_max, 5);
  for (std::size_t j = 0; j < N; ++j) {
    const double sig = 0.5 * (1.0 + q.nodes[j]);
    const double wgt = q.weights[j] / std::pow(2.0, 2.5);
    const double rho = 1.0 / (1.0 + cluster * (1.0 - sig));
    const double s = sig * rho;                    // (r/R)^2
    const double ds = (1.0 + cluster) * rho * rho;  // d s / d sigma
    d->sigma[j] = sig;
    d->nodes[j] = r_max * std::sqrt(s);
    // r^4 dr = (R^5 / 2) s^{3/2} ds = (R^5 / 2) sigma^{3/2} rho^{3/2} s'(sigma) dsigma
    d->weights[j] = kSphereArea5 * 0.5 * r5 * wgt * std::pow(rho, 1.5) * ds;
    drdsig_inv[j] = 2.0 * std::sqrt(s) / (r_max * ds);
  }
  d->sigma_bary = jacobi::barycentric_weights(d->sigma);

  // Derivative of the Dirichlet interpolant f = (1 - sigma) q(sigma).
  const auto dl = jacobi::differentiation_matrix(d->sigma);
  kernels::DenseMatrix g(N, N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      double v = (1.0 - d->sigma[i]) * dl[i * N + j] / (1.0 - d->sigma[j]);
      if (i == j) v -= 1.0 / (1.0 - d->sigma[i]);
      g(i, j) = v * drdsig_inv[i];
    }
  }

  // S = W^{-1/2} A W^{-1/2} = C^T C with C = W^{1/2} G W^{-1/2}.
  Eigen::MatrixXd c(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      c(i, j) = std::sqrt(d->weights[i]) * g(i, j) / std::sqrt(d->weights[j]);
  Eigen::MatrixXd s = c.transpose() * c;
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) throw StateError("make_radial_grid: eigensolver failed");

  d->eigvals.resize(N);
  d->forward = kernels::DenseMatrix(N, N);
  d->backward = kernels::DenseMatrix(N, N);
  for (std::size_t m = 0; m < N; ++m) d->eigvals[m] = -std::max(es.eigenvalues()(m), 0.0);
  for (std::size_t j = 0; j < N; ++j) {
    const double sw = std::sqrt(d->weights[j]);
    for (std::size_t m = 0; m < N; ++m) {
      d->forward(m, j) = es.eigenvectors()(j, m) * sw;
      d->backward(j, m) = es.eigenvectors()(j, m) / sw;
    }
  }
  d->derivative = std::move(g);
  return Grid(std::move(d));
}

Grid make_periodic_grid(int n, double half_length) {
  require(n >= 16 && (n & (n - 1)) == 0,
          "make_periodic_grid: n must be a power of two >= 16 (got " + std::to_string(n) + ")");
  require(std::isfinite(half_length) && half_length > 0.0,
          "make_periodic_grid: half_length must be finite and > 0");

  auto d = std::make_shared<detail::GridData>();
  d->kind = GridKind::Periodic1D;
  d->n = static_cast<std::size_t>(n);
  d->extent = half_length;
  d->measure = 2.0 * half_length;
  const double h = 2.0 * half_length / n;
  d->nodes.resize(n);
  d->weights.assign(n, h);
  d->wavenumber.resize(n);
  d->parity.resize(n);
  d->eigvals.resize(n);
  for (int j = 0; j < n; ++j) {
    d->nodes[j] = -half_length + j * h;
    const int m = j < n / 2 ? j : j - n;
    d->wavenumber[j] = kPi * m / half_length;
    d->parity[j] = (m % 2 == 0) ? 1.0 : -1.0;
  }
  // Eigenvalues sorted by magnitude; the transform itself keeps FFT order,
  // so eigvals are stored in FFT order and sorted only when reported.
  for (int j = 0; j < n; ++j) d->eigvals[j] = -d->wavenumber[j] * d->wavenumber[j];
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    detail::FftwBuffer a(n), b(n);
    d->plan_fwd = fftw_plan_dft_1d(n, a.ptr, b.ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    d->plan_bwd = fftw_plan_dft_1d(n, a.ptr, b.ptr, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  return Grid(std::move(d));
}

GridKind Grid::kind() const { return data_->kind; }
std::size_t Grid::size() const { return data_->n; }
double Grid::extent() const { return data_->extent; }
double Grid::cluster() const { return data_->cluster; }
double Grid::measure() const { return data_->measure; }
std::span<const double> Grid::nodes() const { return data_->nodes; }
std::span<const double> Grid::weights() const { return data_->weights; }
std::span<const double> Grid::eigenvalues() const { return data_->eigvals; }

namespace {

void check_len(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw ShapeError(std::string(what) + ": length " + std::to_string(got) +
                     " does not match grid size " + std::to_string(want));
}

}  // namespace

void Grid::to_spectral(std::span<const cplx> f, std::span<cplx> c) const {
  const auto& d = *data_;
  check_len(f.size(), d.n, "to_spectral");
  check_len(c.size(), d.n, "to_spectral");
  if (d.kind == GridKind::Radial5D) {
    kernels::parallel::apply(d.forward, f, c);
    return;
  }
  detail::FftwBuffer in(d.n), out(d.n);
  std::copy(f.begin(), f.end(), in.data());
  fftw_execute_dft(d.plan_fwd, in.ptr, out.ptr);
  const double s = d.weights[0] / std::sqrt(d.measure);
  for (std::size_t m = 0; m < d.n; ++m) c[m] = out.data()[m] * (s * d.parity[m]);
}

void Grid::from_spectral(std::span<const cplx> c, std::span<cplx> f) const {
  const auto& d = *data_;
  check_len(c.size(), d.n, "from_spectral");
  check_len(f.size(), d.n, "from_spectral");
  if (d.kind == GridKind::Radial5D) {
    kernels::parallel::apply(d.backward, c, f);
    return;
  }
  detail::FftwBuffer in(d.n), out(d.n);
  for (std::size_t m = 0; m < d.n; ++m) in.data()[m] = c[m] * d.parity[m];
  fftw_execute_dft(d.plan_bwd, in.ptr, out.ptr);
  const double s = 1.0 / std::sqrt(d.measure);
  for (std::size_t j = 0; j < d.n; ++j) f[j] = out.data()[j] * s;
}

std::vector<cplx> Grid::to_spectral(std::span<const cplx> f) const {
  std::vector<cplx> c(size());
  to_spectral(f, c);
  return c;
}

std::vector<cplx> Grid::from_spectral(std::span<const cplx> c) const {
  std::vector<cplx> f(size());
  from_spectral(c, f);
  return f;
}

std::vector<cplx> Grid::laplacian(std::span<const cplx> f) const {
  auto c = to_spectral(f);
  for (std::size_t m = 0; m < c.size(); ++m) c[m] *= data_->eigvals[m];
  return from_spectral(c);
}

std::vector<cplx> Grid::derivative(std::span<const cplx> f) const {
  const auto& d = *data_;
  check_len(f.size(), d.n, "derivative");
  std::vector<cplx> out(d.n);
  if (d.kind == GridKind::Radial5D) {
    kernels::parallel::apply(d.derivative, f, out);
    return out;
  }
  auto c = to_spectral(f);
  for (std::size_t m = 0; m < d.n; ++m) c[m] *= cplx(0.0, d.wavenumber[m]);
  from_spectral(c, out);
  return out;
}

cplx Grid::interpolate(std::span<const cplx> f, double x) const {
  const auto& d = *data_;
  check_len(f.size(), d.n, "interpolate");
  if (d.kind == GridKind::Radial5D) {
    x = std::abs(x);
    if (x >= d.extent) return 0.0;
    const double s = (x / d.extent) * (x / d.extent);
    const double sig = s * (1.0 + d.cluster) / (1.0 + d.cluster * s);
    std::vector<double> re(d.n), im(d.n);
    for (std::size_t j = 0; j < d.n; ++j) {
      re[j] = f[j].real() / (1.0 - d.sigma[j]);
      im[j] = f[j].imag() / (1.0 - d.sigma[j]);
    }
    const double qr = jacobi::interpolate(d.sigma, d.sigma_bary, re, sig);
    const double qi = jacobi::interpolate(d.sigma, d.sigma_bary, im, sig);
    return (1.0 - sig) * cplx(qr, qi);
  }
  // trigonometric interpolant
  const auto c = to_spectral(f);
  cplx acc = 0.0;
  for (std::size_t m = 0; m < d.n; ++m) acc += c[m] * std::polar(1.0, d.wavenumber[m] * x);
  return acc / std::sqrt(d.measure);
}

kernels::DenseMatrix Grid::eigenvector_matrix() const {
  if (data_->kind != GridKind::Radial5D)
    throw InvalidParameter("eigenvector_matrix: only available on radial grids");
  return data_->backward;
}

bool Grid::same_discretization(const Grid& other) const {
  if (data_ == other.data_) return true;
  return data_->kind == other.data_->kind && data_->n == other.data_->n &&
         data_->extent == other.data_->extent && data_->cluster == other.data_->cluster;
}

}  // namespace qnls
