// serial reference vs OpenMP kernels, same inputs
#include <benchmark/benchmark.h>

#include <random>

#include "qnls/kernels.hpp"

namespace k = qnls::kernels;
using k::cplx;

namespace {

std::vector<cplx> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {nd(rng), nd(rng)};
  return v;
}

std::vector<double> positive(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = 1.0 + double(j % 7);
  return w;
}

k::DenseMatrix dense(std::size_t n) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  k::DenseMatrix a(n, n);
  for (auto& x : a.data) x = ud(rng);
  return a;
}

template <bool Par>
void BM_apply(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = dense(n);
  const auto x = random_vec(n, 1);
  std::vector<cplx> y(n);
  for (auto _ : st) {
    if constexpr (Par) k::parallel::apply(a, x, y); else k::serial::apply(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * int64_t(n * n));
}

template <bool Par>
void BM_apply_pair(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto a = dense(n);
  const auto x1 = random_vec(n, 1), x2 = random_vec(n, 2);
  std::vector<cplx> y1(n), y2(n);
  for (auto _ : st) {
    if constexpr (Par) k::parallel::apply_pair(a, x1, x2, y1, y2); else k::serial::apply_pair(a, x1, x2, y1, y2);
    benchmark::DoNotOptimize(y1.data());
    benchmark::DoNotOptimize(y2.data());
  }
  st.SetItemsProcessed(st.iterations() * int64_t(2 * n * n));
}

template <bool Par>
void BM_rk4(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto u = random_vec(n, 1), v = random_vec(n, 2);
  for (auto& x : u) x *= 1e-3;
  for (auto& x : v) x *= 1e-3;
  for (auto _ : st) {
    if constexpr (Par) k::parallel::rk4_quadratic(u, v, 1e-3); else k::serial::rk4_quadratic(u, v, 1e-3);
    benchmark::DoNotOptimize(u.data());
  }
  st.SetItemsProcessed(st.iterations() * int64_t(n));
}

template <bool Par>
void BM_phase_rotate(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  auto c = random_vec(n, 1);
  const auto lam = positive(n);
  for (auto _ : st) {
    if constexpr (Par) k::parallel::phase_rotate(c, lam, 1e-3); else k::serial::phase_rotate(c, lam, 1e-3);
    benchmark::DoNotOptimize(c.data());
  }
  st.SetItemsProcessed(st.iterations() * int64_t(n));
}

template <bool Par>
void BM_weighted_dot(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto f = random_vec(n, 1), g = random_vec(n, 2);
  const auto w = positive(n);
  for (auto _ : st) {
    cplx d = Par ? k::parallel::weighted_dot(w, f, g) : k::serial::weighted_dot(w, f, g);
    benchmark::DoNotOptimize(d);
  }
  st.SetItemsProcessed(st.iterations() * int64_t(n));
}

template <bool Par>
void BM_coupling(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto u = random_vec(n, 1), v = random_vec(n, 2);
  const auto w = positive(n);
  for (auto _ : st) {
    double c = Par ? k::parallel::coupling(w, u, v) : k::serial::coupling(w, u, v);
    benchmark::DoNotOptimize(c);
  }
  st.SetItemsProcessed(st.iterations() * int64_t(n));
}

template <bool Par>
void BM_abs_pow(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto f = random_vec(n, 1);
  const auto w = positive(n);
  for (auto _ : st) {
    double c = Par ? k::parallel::weighted_abs_pow(w, f, 3.0) : k::serial::weighted_abs_pow(w, f, 3.0);
    benchmark::DoNotOptimize(c);
  }
  st.SetItemsProcessed(st.iterations() * int64_t(n));
}

// the radial Laplacian is two dense transforms, so matrix sizes follow the grid sizes in use
BENCHMARK(BM_apply<false>)->Name("apply/serial")->Arg(256)->Arg(512)->Arg(1024)->UseRealTime();
BENCHMARK(BM_apply<true>)->Name("apply/parallel")->Arg(256)->Arg(512)->Arg(1024)->UseRealTime();
BENCHMARK(BM_apply_pair<false>)->Name("apply_pair/serial")->Arg(256)->Arg(1024)->UseRealTime();
BENCHMARK(BM_apply_pair<true>)->Name("apply_pair/parallel")->Arg(256)->Arg(1024)->UseRealTime();
BENCHMARK(BM_rk4<false>)->Name("rk4_quadratic/serial")->Arg(1024)->Arg(1 << 16)->UseRealTime();
BENCHMARK(BM_rk4<true>)->Name("rk4_quadratic/parallel")->Arg(1024)->Arg(1 << 16)->UseRealTime();
BENCHMARK(BM_phase_rotate<false>)->Name("phase_rotate/serial")->Arg(1 << 16)->UseRealTime();
BENCHMARK(BM_phase_rotate<true>)->Name("phase_rotate/parallel")->Arg(1 << 16)->UseRealTime();
BENCHMARK(BM_weighted_dot<false>)->Name("weighted_dot/serial")->Arg(1024)->Arg(1 << 16)->UseRealTime();
BENCHMARK(BM_weighted_dot<true>)->Name("weighted_dot/parallel")->Arg(1024)->Arg(1 << 16)->UseRealTime();
BENCHMARK(BM_coupling<false>)->Name("coupling/serial")->Arg(1 << 16)->UseRealTime();
BENCHMARK(BM_coupling<true>)->Name("coupling/parallel")->Arg(1 << 16)->UseRealTime();
BENCHMARK(BM_abs_pow<false>)->Name("weighted_abs_pow/serial")->Arg(1 << 16)->UseRealTime();
BENCHMARK(BM_abs_pow<true>)->Name("weighted_abs_pow/parallel")->Arg(1 << 16)->UseRealTime();

}  // namespace

int main(int argc, char** argv) {
  k::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
