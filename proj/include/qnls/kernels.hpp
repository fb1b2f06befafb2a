#pragma once

// Data-parallel inner loops shared by every module.
//
// Each kernel exists twice: `serial` is the plain reference loop kept for
// testing, `parallel` is the OpenMP version used by the library. Both take
// the same arguments and must agree to rounding (reductions are summed in
// fixed-size blocks so the parallel result does not depend on the thread
// count).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qnls::kernels {

using cplx = std::complex<double>;

/// Row-major dense real matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  DenseMatrix transposed() const;
};

/// Number of elements per reduction block.
inline constexpr std::size_t kReductionBlock = 512;

namespace serial {

// y = A x
void apply(const DenseMatrix& a, std::span<const cplx> x, std::span<cplx> y);
// (y1, y2) = (A x1, A x2) in one sweep over A
void apply_pair(const DenseMatrix& a, std::span<const cplx> x1, std::span<const cplx> x2,
                std::span<cplx> y1, std::span<cplx> y2);

// c_m <- c_m exp(i t lambda_m)
void phase_rotate(std::span<cplx> c, std::span<const double> lambda, double t);
// f_j <- f_j * m_j
void scale(std::span<cplx> f, std::span<const double> m);

// One classical RK4 step of u' = -i v conj(u), v' = -i u^2 at every point.
void rk4_quadratic(std::span<cplx> u, std::span<cplx> v, double dt);

// sum_j w_j conj(f_j) g_j
cplx weighted_dot(std::span<const double> w, std::span<const cplx> f, std::span<const cplx> g);
// sum_j w_j |f_j|^p
double weighted_abs_pow(std::span<const double> w, std::span<const cplx> f, double p);
// Re sum_j w_j u_j^2 conj(v_j)
double coupling(std::span<const double> w, std::span<const cplx> u, std::span<const cplx> v);
// max_j |f_j|
double max_abs(std::span<const cplx> f);

}  // namespace serial

namespace parallel {

void apply(const DenseMatrix& a, std::span<const cplx> x, std::span<cplx> y);
void apply_pair(const DenseMatrix& a, std::span<const cplx> x1, std::span<const cplx> x2,
                std::span<cplx> y1, std::span<cplx> y2);
void phase_rotate(std::span<cplx> c, std::span<const double> lambda, double t);
void scale(std::span<cplx> f, std::span<const double> m);
void rk4_quadratic(std::span<cplx> u, std::span<cplx> v, double dt);
cplx weighted_dot(std::span<const double> w, std::span<const cplx> f, std::span<const cplx> g);
double weighted_abs_pow(std::span<const double> w, std::span<const cplx> f, double p);
double coupling(std::span<const double> w, std::span<const cplx> u, std::span<const cplx> v);
double max_abs(std::span<const cplx> f);

}  // namespace parallel

/// Applies the QNLS_THREADS environment override, if set, to the OpenMP
/// runtime. Returns the thread count in effect afterwards.
int configure_threads_from_env();

}  // namespace qnls::kernels
