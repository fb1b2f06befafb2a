#pragma once

// Scalar functionals of a state (u, v):
//
//   M = ||u||^2 + ||v||^2                     L = ||∇u||^2 + (κ/2)||∇v||^2
//   N = Re ∫ u^2 conj(v)                       E = L + N
//   K = L + (5/4) N                            P = Im ∫ conj(u)∇u + (1/2) conj(v)∇v
//   I_ω = E/2 + ωM/2                           J_ω = L/10 + ωM/2 = I_ω - (2/5)K
//   P̃ = Im ∫ conj(u)∇u + κ conj(v)∇v
//
// On radial grids P and P̃ are reported as 0: the momentum vector of a radial
// state vanishes by symmetry.

#include <span>
#include <vector>

#include "qnls/fields.hpp"

namespace qnls {

struct GroundState;
struct TrajectoryRecord;

struct FunctionalReport {
  double M = 0.0;
  double E = 0.0;
  double P = 0.0;
  double K = 0.0;
  double L = 0.0;
  double N = 0.0;
  double I_omega = 0.0;
  double J_omega = 0.0;
  double threshold_product = 0.0;  // E * M
  double P_tilde = 0.0;
};

FunctionalReport evaluate_all(const FieldPair& state, const PhysicsParams& params);

/// E(state) M(state) / (E(gs) M(gs)). Throws StateError if gs did not converge.
double threshold_ratio(const FieldPair& state, const PhysicsParams& params, const GroundState& gs);

/// Smooth cutoff χ_R(r) = χ_1(r / R): 1 on [0, 1], quintic smoothstep down to 0
/// on [1, 2], 0 beyond. Requires R > 0.
double cutoff_chi(double r, double R);
/// d/dr of cutoff_chi.
double cutoff_chi_derivative(double r, double R);

/// 2 Im ∫ χ_R(|x - c|) (x - c)·(conj(u)∇u + (1/2) conj(v)∇v) dx.
/// Radial grids require center == 0.
double virial_truncated(const FieldPair& state, double center, double R);

/// Cumulative trapezoid integral of 2 P̃(s) / M over the samples of history.
std::vector<double> center_quantity_X(const TrajectoryRecord& history);

/// ||f||_{L^3} on the grid.
double l3_norm(std::span<const cplx> f, const Grid& grid);

}  // namespace qnls
