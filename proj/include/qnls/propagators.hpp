#pragma once

// Time stepping for i u_t + Δu = v conj(u), i v_t + κΔv = u².
//
// One Strang step is: half a linear flow (exact, diagonal in the Laplacian
// eigenbasis), a full RK4 step of the pointwise system u' = -i v conj(u),
// v' = -i u², another half linear flow, then the absorber mask
// exp(-dt σ(x)).

#include <functional>

#include "qnls/fields.hpp"
#include "qnls/functionals.hpp"
#include "qnls/trajectory.hpp"

namespace qnls {

/// strang: one Strang step per dt. yoshida4: the fourth-order triple-jump
/// composition of three Strang steps (w1, w0, w1) dt with
/// w1 = 1 / (2 - 2^{1/3}), w0 = 1 - 2 w1; the absorber is applied once.
enum class Scheme { Strang, Yoshida4 };
std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

struct EvolveOptions {
  Scheme scheme = Scheme::Strang;
  double dt = 1e-3;
  double t_end = 1.0;
  bool adapt = false;
  double dt_min = 1e-8;
  double absorber_strength = 0.0;
  double absorber_start_fraction = 0.8;
  int sample_every = 1;    // steps between samples
  int snapshot_every = 0;  // samples between stored snapshots (0: none)
  double virial_radius = 0.0;  // 0 selects half the grid extent
  /// Adaptive mode also keeps dt <= nonlinear_cfl / max(|u|, |v|)
  /// (0 disables the cap).
  double nonlinear_cfl = 0.02;
  /// Blow-up proxy threshold on L(t) / L(0).
  double blowup_growth = 100.0;

  void validate() const;
  bool operator==(const EvolveOptions&) const = default;
};

struct StepResult {
  FieldPair state;
  double t = 0.0;
  double dt_used = 0.0;
  bool blowup_flag = false;
  double absorbed_mass = 0.0;
};

/// U_κ(t): e^{itλ} on u-coefficients and e^{iκtλ} on v-coefficients.
FieldPair linear_flow(const FieldPair& state, double t, const PhysicsParams& params);

/// One RK4 step of the pointwise nonlinear system. Non-finite input or
/// output is left to the caller to detect (FieldPair::all_finite).
FieldPair nonlinear_substep(const FieldPair& state, double dt);

/// Absorber rate σ at the grid nodes: a quintic ramp from 0 at
/// absorber_start_fraction * extent up to absorber_strength at the edge.
std::vector<double> absorber_profile(const Grid& grid, const EvolveOptions& opts);

/// One Strang step from time t. absorbed_before is added to the mass removed
/// by the absorber in this step. On a non-finite result the input state is
/// returned unchanged with blowup_flag set.
StepResult strang_step(const FieldPair& state, double dt, const PhysicsParams& params,
                       const EvolveOptions& opts, double t = 0.0, double absorbed_before = 0.0);

/// Called at each sample; snapshot is non-null when a snapshot is stored.
using SampleSink =
    std::function<void(double t, const FunctionalReport& report, const FieldPair* snapshot)>;

/// Repeated Strang steps up to t_end or until the blow-up proxy fires. In
/// adaptive mode a step is retried at dt/2 when L grows by more than 10%,
/// down to dt_min. The blow-up proxy requires dt at dt_min, L > blowup_growth
/// L(0), and a doubling time of L that decreased over the last three steps.
TrajectoryRecord evolve(const FieldPair& initial, const PhysicsParams& params,
                        const EvolveOptions& opts, const SampleSink& sink = {});

/// (e^{iξx} u, e^{2iξx} v) on a periodic grid; ξ must be a multiple of
/// π / half_length.
FieldPair galilean_boost(const FieldPair& state, double xi);

/// f(x - shift) for both components, by Fourier translation.
FieldPair translate(const FieldPair& state, double shift);

/// Galilean image of a solution at time t:
/// (e^{iξx} e^{-itξ²} u(x - 2tξ), e^{2iξx} e^{-2itξ²} v(x - 2tξ)).
FieldPair galilean_transform(const FieldPair& state, double xi, double t);

}  // namespace qnls
