#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "flowrom/closure.hpp"
#include "flowrom/ensemble.hpp"
#include "flowrom/galerkin.hpp"
#include "flowrom/pod.hpp"
#include "flowrom/rom.hpp"

#include <json.hpp>

namespace flowrom::io {

/// FNV-1a 64-bit digest as a hex string.
std::string fnv1a64_hex(const std::string& data);

/// Digest of the ensemble manifest content; embedded in every downstream
/// artifact so incompatible files cannot be mixed.
std::string compute_case_hash(const SnapshotEnsemble& ensemble);

// Ensemble directory: manifest.json plus one little-endian float64 binary
// file per variable (snapshot-major: snapshot j's fluid-cell values are
// contiguous).
void save_ensemble(SnapshotEnsemble& ensemble, const std::string& dir);
SnapshotEnsemble load_ensemble(const std::string& dir);

// Basis files: <variable>.pod.bin (mean, then each mode contiguous) and
// <variable>.pod.json (labels, rank, eigenvalue spectrum, grid, case hash).
void save_basis(const PodBasis& basis, const std::string& dir);
PodBasis load_basis(const std::string& dir, const std::string& variable);

// Operator bundle: one binary file with a text (JSON) header carrying the
// ranks, viscosity variant and case hash, followed by raw tensor blocks.
void save_operators(const GalerkinOperators& ops, const std::string& path);
GalerkinOperators load_operators(const std::string& path);

// Closure models: self-describing binary with a JSON header (kind, sizes,
// seed, normalization parameters) followed by the weight blocks.
void save_closure(const ClosureModel& model, const std::string& path);
ClosureModel load_closure(const std::string& path);

// Trajectory CSV: '#' metadata lines, then a header row of column labels
// (t, u_i, p_l, closure c_i) and one row per output time at full precision.
void save_trajectory_csv(const RomTrajectory& traj, const RomModel& model,
                         const std::string& path);

struct LoadedTrajectory {
    RomTrajectory trajectory;
    std::string variant;
    bool has_closure = false;
};
LoadedTrajectory load_trajectory_csv(const std::string& path);

// Generic numeric CSV with one header row; values round-trip exactly.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows);
std::pair<std::vector<std::string>, Eigen::MatrixXd> read_csv(const std::string& path);

/// Minimal polyline SVG of one or more series over a shared x-axis.
void write_svg_lines(const std::string& path, const std::string& title,
                     const std::vector<double>& x,
                     const std::vector<Eigen::VectorXd>& series,
                     const std::vector<std::string>& labels);

nlohmann::json grid_spec_to_json(const StructuredGrid& grid);
GridPtr grid_from_json(const nlohmann::json& j);

}  // namespace flowrom::io
