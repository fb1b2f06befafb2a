#include <cmath>

#include "qnls/errors.hpp"
#include "qnls/fields.hpp"

namespace qnls {

void PhysicsParams::validate() const {
  require(std::isfinite(kappa) && kappa > 0.0, "kappa must be finite and > 0");
  require(std::isfinite(omega) && omega > 0.0, "omega must be finite and > 0");
}

FieldPair::FieldPair(Grid grid, std::vector<cplx> u, std::vector<cplx> v)
    : grid_(std::move(grid)), u_(std::move(u)), v_(std::move(v)) {
  if (u_.size() != grid_.size() || v_.size() != grid_.size())
    throw ShapeError("FieldPair: u has " + std::to_string(u_.size()) + " and v has " +
                     std::to_string(v_.size()) + " samples, grid has " +
                     std::to_string(grid_.size()));
}

FieldPair FieldPair::zeros(const Grid& grid) {
  return FieldPair(grid, std::vector<cplx>(grid.size()), std::vector<cplx>(grid.size()));
}

FieldPair FieldPair::scaled(double a) const {
  FieldPair out = *this;
  for (auto& z : out.u_) z *= a;
  for (auto& z : out.v_) z *= a;
  return out;
}

FieldPair FieldPair::conjugated() const {
  FieldPair out = *this;
  for (auto& z : out.u_) z = std::conj(z);
  for (auto& z : out.v_) z = std::conj(z);
  return out;
}

bool FieldPair::all_finite() const {
  for (const auto& z : u_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  for (const auto& z : v_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

cplx inner(std::span<const cplx> f, std::span<const cplx> g, const Grid& grid) {
  if (f.size() != grid.size() || g.size() != grid.size())
    throw ShapeError("inner: length does not match grid");
  return kernels::parallel::weighted_dot(grid.weights(), f, g);
}

double gradient_norm_sq(std::span<const cplx> f, const Grid& grid) {
  const auto df = grid.derivative(f);
  return kernels::parallel::weighted_abs_pow(grid.weights(), df, 2.0);
}

double gradient_norm_sq_spectral(std::span<const cplx> f, const Grid& grid) {
  const auto c = grid.to_spectral(f);
  const auto lam = grid.eigenvalues();
  double s = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) s += -lam[m] * std::norm(c[m]);
  return s;
}

FieldPair resample(const FieldPair& state, const Grid& target) {
  const Grid& src = state.grid();
  if (src.kind() != target.kind()) throw InvalidParameter("resample: grid kinds differ");
  if (src.same_discretization(target)) return FieldPair(target, {state.u().begin(), state.u().end()},
                                                        {state.v().begin(), state.v().end()});
  if (src.kind() == GridKind::Periodic1D && src.extent() != target.extent())
    throw InvalidParameter("resample: periodic grids must share the box");
  FieldPair out = FieldPair::zeros(target);
  const auto x = target.nodes();
  for (std::size_t j = 0; j < target.size(); ++j) {
    out.u()[j] = src.interpolate(state.u(), x[j]);
    out.v()[j] = src.interpolate(state.v(), x[j]);
  }
  return out;
}

std::vector<cplx> complexify(std::span<const double> f) {
  return std::vector<cplx>(f.begin(), f.end());
}

}  // namespace qnls
