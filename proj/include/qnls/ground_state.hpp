#pragma once

// Ground states of the elliptic system
//
//   -ω φ + Δφ = φ ψ,      -2ω ψ + κ Δψ = φ²
//
// on a radial grid. ψ is eliminated through ψ = -(2ω - κΔ)^{-1} φ², which
// leaves the scalar equation (ω - Δ) φ = φ (-ψ) with a nonlinearity that is
// homogeneous of degree 3 in φ. That equation is solved by Petviashvili's
// renormalized iteration
//
//   φ <- m^{3/2} (ω - Δ)^{-1} (φ (-ψ)),   m = <(ω-Δ)φ, φ> / <φ (-ψ), φ>,
//
// with every inverse applied diagonally in the Laplacian eigenbasis.
// Converged output has φ > 0 and ψ < 0.

#include <cstdint>
#include <vector>

#include "qnls/fields.hpp"
#include "qnls/functionals.hpp"

namespace qnls {

struct SolverOptions {
  int max_iter = 5000;
  double residual_tol = 1e-10;  // relative to ||φ||_∞ + ||ψ||_∞
  double pohozaev_tol = 1e-8;   // on |K| / L
  /// Initial guess A exp(-(r sqrt(ω) / width)^2). A = 0 selects A by a
  /// one-parameter scan minimizing the residual of the guess.
  double initial_amplitude = 0.0;
  double initial_width = 2.0;
  /// Start from φ = 0 (only useful to check that zero is rejected).
  bool zero_guess = false;

  void validate() const;
  bool operator==(const SolverOptions&) const = default;
};

struct GroundState {
  Grid grid;
  std::vector<double> phi{};
  std::vector<double> psi{};
  double omega = 1.0;
  double kappa = 1.0;
  double residual = 0.0;  // sup-norm of the defect divided by ||φ||_∞ + ||ψ||_∞
  FunctionalReport functionals{};
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history{};
  std::string message{};

  PhysicsParams params() const { return {kappa, omega}; }
  FieldPair state() const;
};

GroundState solve_ground_state(const Grid& grid, const PhysicsParams& params,
                               const SolverOptions& opts = {});

/// Solves from several initial widths. Converged candidates are kept; the
/// one with the smallest I_ω is reported as best. distinct is set when two
/// converged profiles differ by more than 1e-6 in relative sup-norm.
struct GroundStateSearch {
  std::vector<GroundState> candidates;
  std::size_t best = 0;
  bool any_converged = false;
  bool distinct = false;
};
GroundStateSearch search_ground_state(const Grid& grid, const PhysicsParams& params,
                                      const SolverOptions& opts,
                                      const std::vector<double>& widths);

/// Residual of the elliptic system at (φ, ψ), relative as in GroundState.
double elliptic_residual(const Grid& grid, const PhysicsParams& params,
                         std::span<const double> phi, std::span<const double> psi);

/// μ_ω = I_ω(φ_ω, ψ_ω). Throws StateError on an unconverged ground state.
double mu_omega(const GroundState& gs);

/// Samples random smooth perturbations of the ground state, scales each by a
/// real factor until K <= 0, and records J_ω there. The infimum
/// characterization requires J_ω >= μ_ω on every such state.
struct InfimumProbe {
  double mu = 0.0;
  double min_J = 0.0;
  double max_K = 0.0;  // largest K among the probed states (must be <= 0)
  int samples = 0;
  bool holds = false;  // min_J >= mu - tol
};
InfimumProbe probe_infimum(const GroundState& gs, int samples = 20, std::uint64_t seed = 1,
                           double rel_tol = 1e-6);

/// (ω'/ω) (φ, ψ)(sqrt(ω'/ω) r) interpolated onto the same grid, with
/// functionals and residual recomputed at ω'.
GroundState rescale_ground_state(const GroundState& gs, double omega_new);

/// λ^{5/2} f(λ r) for both components, interpolated on the same grid.
FieldPair dilate(const FieldPair& state, double lambda);
/// The same dilation carried out exactly: nodal values are multiplied by
/// λ^{5/2} and the grid radius is divided by λ.
FieldPair dilate_on_scaled_grid(const FieldPair& state, double lambda);

}  // namespace qnls
