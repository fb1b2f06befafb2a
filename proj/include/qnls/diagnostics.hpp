#pragma once

// Post-processing of trajectories: dichotomy classification, K-sign
// tracking, virial rate, Galilean covariance and the S-norm.

#include <limits>
#include <vector>

#include "qnls/fields.hpp"
#include "qnls/propagators.hpp"
#include "qnls/trajectory.hpp"

namespace qnls {

struct ClassifierOptions {
  double n_remnant = 0.05;        // |N(t_end)| <= n_remnant |N(0)|
  double l_stabilization = 0.01;  // (max L - min L) / max L over the final window
  double s_saturation = 0.01;     // relative S-norm growth over the final window
  double final_fraction = 0.2;    // length of the final window as a fraction of the run

  void validate() const;
  bool operator==(const ClassifierOptions&) const = default;
};

struct Verdict {
  Predicted predicted = Predicted::OutOfScope;
  Observed observed = Observed::Undetermined;
  bool agree = false;
  double threshold_ratio = 0.0;
  double n_ratio = 0.0;         // |N(t_end)| / |N(0)|
  double l_variation = 0.0;     // over the final window
  double s_increase = 0.0;      // relative S-norm growth over the final window
  bool s_saturated = false;
};

/// Prediction from the threshold ratio and the sign of K(0): below the
/// threshold, K(0) >= 0 predicts scattering and K(0) < 0 predicts blow-up.
/// Zero data is out of scope.
Predicted predict(double threshold_ratio, double K0, bool zero_data);

/// Requires record.completed and record.threshold_ratio. Zero data counts
/// as scattered; agreement for zero data follows the convention that it
/// scatters.
Verdict classify(const TrajectoryRecord& record, const ClassifierOptions& opts = {});

/// Relative growth of the cumulative S-norm over the final window.
double s_norm_increase(const TrajectoryRecord& record, double final_fraction);

struct KSignReport {
  bool all_positive = true;
  double min_K = 0.0;
  /// Largest δ with K(t) >= min{(μ_ω - I_ω(0)) / 8, δ L(t)} at every sample
  /// (+inf when the first branch always holds).
  double delta_max = std::numeric_limits<double>::infinity();
  /// min_t K(t) / L(t): largest δ with K >= δ L outright, finite whenever L > 0.
  double min_K_over_L = std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  bool vacuous = false;
};

/// Requires threshold_ratio < 1 and K(0) > 0 unless the data is zero.
KSignReport k_sign_track(const TrajectoryRecord& record, double mu_omega);

struct VirialReport {
  double max_relative_defect = 0.0;  // max |V' - 4K| / (|4K| + ε)
  double max_abs_defect = 0.0;       // max |V' - 4K|
  double scale = 0.0;                // max |4K|, for normalizing the absolute defect
  std::size_t points = 0;
};

/// Central differences of the truncated virial at radius R over the stored
/// snapshots, compared with 4K. Needs a radial run without absorber and at
/// least three snapshots.
VirialReport virial_rate_check(const TrajectoryRecord& record, double R);

/// Sup-norm distance between evolve-then-transform and boost-then-evolve,
/// divided by the sup-norm of the transformed solution.
double mass_resonance_check(const FieldPair& data, double xi, const PhysicsParams& params, double t,
                            const EvolveOptions& opts);

/// max_t |X(t) - 2 P t / M| / max_t (|2 P / M| + 2 sqrt(L / M)) t, with P, L
/// and M from the first sample.
double x_of_t_check(const TrajectoryRecord& record);

/// Cumulative (∫ (||u||_3 + ||v||_3)^6 dt)^{1/6} at every sample, by the
/// trapezoid rule over record.l3_sum.
std::vector<double> s_norm_monitor(const TrajectoryRecord& record);

}  // namespace qnls
