#include "qnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "qnls/errors.hpp"

namespace qnls {

void ClassifierOptions::validate() const {
  require(n_remnant > 0.0 && n_remnant < 1.0, "diagnostics.n_remnant must be in (0, 1)");
  require(l_stabilization > 0.0, "diagnostics.l_stabilization must be > 0");
  require(s_saturation > 0.0, "diagnostics.s_saturation must be > 0");
  require(final_fraction > 0.0 && final_fraction < 1.0, "diagnostics.final_fraction must be in (0, 1)");
}

Predicted predict(double threshold_ratio, double K0, bool zero_data) {
  if (zero_data || !(threshold_ratio < 1.0)) return Predicted::OutOfScope;
  return K0 >= 0.0 ? Predicted::Scatter : Predicted::BlowUp;
}

namespace {

std::size_t window_start(const TrajectoryRecord& r, double fraction) {
  const double t0 = r.times.front(), t1 = r.times.back();
  const double cut = t1 - fraction * (t1 - t0);
  std::size_t k = 0;
  while (k + 1 < r.times.size() && r.times[k] < cut) ++k;
  return k;
}

}  // namespace

double s_norm_increase(const TrajectoryRecord& record, double final_fraction) {
  if (record.s_norm_cum.empty()) throw StateError("s_norm_increase: empty record");
  const auto k = window_start(record, final_fraction);
  const double last = record.s_norm_cum.back();
  return last > 0.0 ? (last - record.s_norm_cum[k]) / last : 0.0;
}

Verdict classify(const TrajectoryRecord& record, const ClassifierOptions& opts) {
  opts.validate();
  if (!record.completed || record.times.empty())
    throw StateError("classify: trajectory record is incomplete");
  if (!record.threshold_ratio)
    throw StateError("classify: record has no threshold ratio (ground state not supplied)");

  Verdict v;
  v.threshold_ratio = *record.threshold_ratio;
  const auto& first = record.reports.front();
  const auto& last = record.reports.back();
  v.predicted = predict(v.threshold_ratio, first.K, record.zero_data);

  v.n_ratio = first.N != 0.0 ? std::abs(last.N) / std::abs(first.N) : 0.0;
  const auto k = window_start(record, opts.final_fraction);
  double lmax = 0.0, lmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = k; i < record.reports.size(); ++i) {
    lmax = std::max(lmax, record.reports[i].L);
    lmin = std::min(lmin, record.reports[i].L);
  }
  v.l_variation = lmax > 0.0 ? (lmax - lmin) / lmax : 0.0;
  v.s_increase = s_norm_increase(record, opts.final_fraction);
  v.s_saturated = v.s_increase < opts.s_saturation;

  if (record.zero_data) {
    v.observed = Observed::Scattered;
  } else if (record.blowup) {
    v.observed = Observed::BlewUp;
  } else if (record.absorber_on && std::abs(last.N) <= opts.n_remnant * std::abs(first.N) &&
             v.l_variation < opts.l_stabilization) {
    v.observed = Observed::Scattered;
  } else {
    v.observed = Observed::Undetermined;
  }

  switch (v.predicted) {
    case Predicted::Scatter: v.agree = v.observed == Observed::Scattered; break;
    case Predicted::BlowUp: v.agree = v.observed == Observed::BlewUp; break;
    case Predicted::OutOfScope: v.agree = record.zero_data && v.observed == Observed::Scattered; break;
  }
  return v;
}

KSignReport k_sign_track(const TrajectoryRecord& record, double mu_omega) {
  if (record.times.empty()) throw StateError("k_sign_track: empty record");
  KSignReport rep;
  rep.samples = record.size();
  if (record.zero_data) {
    rep.vacuous = true;
    return rep;
  }
  if (!record.threshold_ratio || !(*record.threshold_ratio < 1.0) || !(record.reports.front().K > 0.0))
    throw InvalidParameter("k_sign_track: requires threshold ratio < 1 and K(0) > 0");

  const double gap = (mu_omega - record.reports.front().I_omega) / 8.0;
  rep.min_K = std::numeric_limits<double>::infinity();
  for (const auto& r : record.reports) {
    rep.min_K = std::min(rep.min_K, r.K);
    if (!(r.K > 0.0)) rep.all_positive = false;
    if (r.L > 0.0) rep.min_K_over_L = std::min(rep.min_K_over_L, r.K / r.L);
    if (r.K < gap) rep.delta_max = std::min(rep.delta_max, r.L > 0.0 ? r.K / r.L : 0.0);
  }
  return rep;
}

VirialReport virial_rate_check(const TrajectoryRecord& record, double R) {
  require(R > 0.0 && std::isfinite(R), "virial_rate_check: R must be > 0");
  if (record.absorber_on) throw InvalidParameter("virial_rate_check: requires the absorber to be off");
  const auto& snaps = record.snapshots;
  if (snaps.size() < 3) throw StateError("virial_rate_check: needs at least three snapshots");
  if (snaps.front().state.grid().kind() != GridKind::Radial5D)
    throw InvalidParameter("virial_rate_check: requires a radial run");

  std::vector<double> V(snaps.size()), K4(snaps.size());
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    V[i] = virial_truncated(snaps[i].state, 0.0, R);
    K4[i] = 4.0 * evaluate_all(snaps[i].state, record.params).K;
  }
  VirialReport rep;
  for (double k : K4) rep.scale = std::max(rep.scale, std::abs(k));
  const double eps = 1e-12 * std::max(rep.scale, 1e-300);
  for (std::size_t i = 1; i + 1 < snaps.size(); ++i) {
    const double dv = (V[i + 1] - V[i - 1]) / (snaps[i + 1].t - snaps[i - 1].t);
    const double d = std::abs(dv - K4[i]);
    rep.max_abs_defect = std::max(rep.max_abs_defect, d);
    rep.max_relative_defect = std::max(rep.max_relative_defect, d / (std::abs(K4[i]) + eps));
    ++rep.points;
  }
  if (rep.scale == 0.0) rep.max_relative_defect = 0.0;
  return rep;
}

double mass_resonance_check(const FieldPair& data, double xi, const PhysicsParams& params, double t,
                            const EvolveOptions& opts) {
  require(std::isfinite(t) && t > 0.0, "mass_resonance_check: t must be > 0");
  EvolveOptions o = opts;
  o.t_end = t;
  o.snapshot_every = 1;
  o.sample_every = std::numeric_limits<int>::max();
  o.absorber_strength = 0.0;
  auto final_state = [&](const FieldPair& s) {
    auto rec = evolve(s, params, o);
    if (rec.blowup) throw StateError("mass_resonance_check: evolution blew up");
    return rec.snapshots.back().state;
  };
  const FieldPair a = final_state(galilean_boost(data, xi));
  const FieldPair b = galilean_transform(final_state(data), xi, t);
  double diff = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    diff = std::max({diff, std::abs(a.u()[j] - b.u()[j]), std::abs(a.v()[j] - b.v()[j])});
    scale = std::max({scale, std::abs(b.u()[j]), std::abs(b.v()[j])});
  }
  return scale > 0.0 ? diff / scale : diff;
}

double x_of_t_check(const TrajectoryRecord& record) {
  const auto X = center_quantity_X(record);
  const auto& r0 = record.reports.front();
  if (r0.M == 0.0) return 0.0;
  const double rate = 2.0 * r0.P / r0.M;
  // scale: the drift itself plus the kinematic speed 2 sqrt(L/M), so data
  // with no momentum compares rounding against a meaningful size
  const double speed = std::abs(rate) + 2.0 * std::sqrt(std::max(r0.L, 0.0) / r0.M);
  double scale = 0.0, worst = 0.0;
  for (std::size_t k = 0; k < X.size(); ++k) {
    scale = std::max(scale, speed * record.times[k]);
    worst = std::max(worst, std::abs(X[k] - rate * record.times[k]));
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

std::vector<double> s_norm_monitor(const TrajectoryRecord& record) {
  std::vector<double> out(record.l3_sum.size(), 0.0);
  double acc = 0.0;
  for (std::size_t k = 1; k < out.size(); ++k) {
    acc += 0.5 * (record.times[k] - record.times[k - 1]) *
           (std::pow(record.l3_sum[k - 1], 6.0) + std::pow(record.l3_sum[k], 6.0));
    out[k] = std::pow(acc, 1.0 / 6.0);
  }
  return out;
}

}  // namespace qnls
