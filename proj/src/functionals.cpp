#include "qnls/functionals.hpp"

#include <cmath>

#include "qnls/errors.hpp"
#include "qnls/ground_state.hpp"
#include "qnls/trajectory.hpp"

namespace qnls {

namespace kp = kernels::parallel;

std::string to_string(Observed o) {
  switch (o) {
    case Observed::Scattered: return "Scattered";
    case Observed::BlewUp: return "BlewUp";
    default: return "Undetermined";
  }
}

std::string to_string(Predicted p) {
  switch (p) {
    case Predicted::Scatter: return "Scatter";
    case Predicted::BlowUp: return "BlowUp";
    default: return "OutOfScope";
  }
}

FunctionalReport evaluate_all(const FieldPair& state, const PhysicsParams& params) {
  const Grid& g = state.grid();
  const auto w = g.weights();
  const auto u = state.u();
  const auto v = state.v();
  const auto du = g.derivative(u);
  const auto dv = g.derivative(v);

  FunctionalReport r;
  const double mu = kp::weighted_abs_pow(w, u, 2.0);
  const double mv = kp::weighted_abs_pow(w, v, 2.0);
  r.M = mu + mv;
  r.L = kp::weighted_abs_pow(w, du, 2.0) + 0.5 * params.kappa * kp::weighted_abs_pow(w, dv, 2.0);
  r.N = kp::coupling(w, u, v);
  r.E = r.L + r.N;
  r.K = r.L + 1.25 * r.N;
  r.I_omega = 0.5 * r.E + 0.5 * params.omega * r.M;
  r.J_omega = 0.1 * r.L + 0.5 * params.omega * r.M;
  r.threshold_product = r.E * r.M;
  if (g.kind() == GridKind::Periodic1D) {
    const double pu = kp::weighted_dot(w, u, du).imag();
    const double pv = kp::weighted_dot(w, v, dv).imag();
    r.P = pu + 0.5 * pv;
    r.P_tilde = pu + params.kappa * pv;
  }
  return r;
}

double threshold_ratio(const FieldPair& state, const PhysicsParams& params, const GroundState& gs) {
  if (!gs.converged) throw StateError("threshold_ratio: ground state did not converge");
  const double ref = gs.functionals.threshold_product;
  if (!(ref > 0.0)) throw StateError("threshold_ratio: ground-state product E*M is not positive");
  return evaluate_all(state, params).threshold_product / ref;
}

double cutoff_chi(double r, double R) {
  require(R > 0.0 && std::isfinite(R), "cutoff_chi: R must be > 0");
  const double s = r / R;
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double t = s - 1.0;
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double cutoff_chi_derivative(double r, double R) {
  require(R > 0.0 && std::isfinite(R), "cutoff_chi_derivative: R must be > 0");
  const double s = r / R;
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const double t = s - 1.0;
  return -30.0 * t * t * (1.0 - t) * (1.0 - t) / R;
}

double virial_truncated(const FieldPair& state, double center, double R) {
  require(R > 0.0 && std::isfinite(R), "virial_truncated: R must be > 0");
  const Grid& g = state.grid();
  if (g.kind() == GridKind::Radial5D && center != 0.0)
    throw InvalidParameter("virial_truncated: radial grids only allow center = 0");
  const auto x = g.nodes();
  const auto w = g.weights();
  const auto u = state.u();
  const auto v = state.v();
  const auto du = g.derivative(u);
  const auto dv = g.derivative(v);
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double y = x[j] - center;
    const double wt = w[j] * cutoff_chi(std::abs(y), R) * y;
    if (wt == 0.0) continue;
    s += wt * (std::conj(u[j]) * du[j] + 0.5 * std::conj(v[j]) * dv[j]).imag();
  }
  return 2.0 * s;
}

std::vector<double> center_quantity_X(const TrajectoryRecord& history) {
  if (history.times.empty()) throw StateError("center_quantity_X: empty history");
  const auto& rep = history.reports;
  auto rate = [&](std::size_t k) { return rep[k].M > 0.0 ? 2.0 * rep[k].P_tilde / rep[k].M : 0.0; };
  std::vector<double> x(history.times.size(), 0.0);
  for (std::size_t k = 1; k < x.size(); ++k)
    x[k] = x[k - 1] + 0.5 * (history.times[k] - history.times[k - 1]) * (rate(k - 1) + rate(k));
  return x;
}

double l3_norm(std::span<const cplx> f, const Grid& grid) {
  if (f.size() != grid.size()) throw ShapeError("l3_norm: length does not match grid");
  return std::cbrt(kp::weighted_abs_pow(grid.weights(), f, 3.0));
}

}  // namespace qnls
