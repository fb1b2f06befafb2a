#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnls/fields.hpp"
#include "qnls/functionals.hpp"

namespace qnls {

enum class Observed { Scattered, BlewUp, Undetermined };
enum class Predicted { Scatter, BlowUp, OutOfScope };

std::string to_string(Observed o);
std::string to_string(Predicted p);

struct Snapshot {
  double t = 0.0;
  FieldPair state;
};

/// Output of a time evolution: one entry per sample in every series.
struct TrajectoryRecord {
  PhysicsParams params;
  std::vector<double> times;
  std::vector<FunctionalReport> reports;
  std::vector<double> l3_sum;  // ||u||_{L^3} + ||v||_{L^3}
  std::vector<double> s_norm_cum;
  std::vector<double> virial;
  std::vector<double> absorbed_mass;
  std::vector<Snapshot> snapshots;

  double virial_radius = 0.0;
  bool absorber_on = false;
  bool blowup = false;
  double blowup_time = 0.0;
  bool completed = false;  // reached t_end or stopped on the blow-up proxy
  bool zero_data = false;
  std::size_t steps = 0;
  double final_dt = 0.0;
  double min_dt = 0.0;

  // Filled by the caller when a ground state is available.
  std::optional<double> threshold_ratio;
  int k_sign_initial = 0;
  Observed verdict = Observed::Undetermined;

  std::size_t size() const { return times.size(); }
};

}  // namespace qnls
