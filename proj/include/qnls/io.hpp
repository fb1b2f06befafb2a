#pragma once

// Serialization: time-series CSV, verdict JSON, binary field snapshots with
// JSON sidecars, and ground-state checkpoints.
//
// Snapshot layout: little-endian 64-bit floats, u then v, each as
// interleaved (re, im) pairs, 4 n values in total.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "qnls/diagnostics.hpp"
#include "qnls/ground_state.hpp"
#include "qnls/trajectory.hpp"

namespace qnls {

using json = nlohmann::json;

inline constexpr const char* kCsvHeader = "t,M,E,P,K,L,N,I_omega,J_omega,S_cum,virial,absorbed_mass";

json to_json(const FunctionalReport& r);
FunctionalReport report_from_json(const json& j);
json grid_to_json(const Grid& g);
Grid grid_from_json(const json& j);
json to_json(const Verdict& v);

/// Writes the time-series CSV (17 significant digits).
void write_timeseries_csv(const TrajectoryRecord& record, const std::filesystem::path& path);

/// Writes timeseries.csv, verdict.json (record summary plus `extra`) and,
/// when the record holds snapshots, snapshots/snap_NNNNN.{bin,json}.
void emit_timeseries(const TrajectoryRecord& record, const json& extra,
                     const std::filesystem::path& dir);

void write_snapshot(const FieldPair& state, double t, const PhysicsParams& params,
                    const std::filesystem::path& bin_path);
/// Reads a snapshot written by write_snapshot; the grid is rebuilt from the
/// sidecar next to it (same stem, .json).
FieldPair read_snapshot(const std::filesystem::path& bin_path);

void save_checkpoint(const GroundState& gs, const std::filesystem::path& path);
GroundState load_checkpoint(const std::filesystem::path& path);

void write_json(const json& j, const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);

}  // namespace qnls
