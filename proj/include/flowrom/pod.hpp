#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "flowrom/ensemble.hpp"
#include "flowrom/grid.hpp"

namespace flowrom {

/// Hook for time-varying boundary contributions to the reconstruction.
/// Steady conditions are absorbed into the ensemble mean, so bundled cases
/// carry no lift; the type exists so a time-varying extension stays local.
struct BoundaryLift {
    std::vector<Eigen::VectorXd> functions;  // one stacked field per boundary
    Eigen::VectorXd values;                  // b_i

    Eigen::VectorXd contribution(int size) const;
};

/// Orthonormal basis for one variable: ensemble mean, modes and the full
/// (clamped, descending) eigenvalue spectrum of the snapshot correlation
/// matrix. Velocity components are stacked into a single vector-valued
/// basis; pressure and turbulent viscosity use scalar bases.
struct PodBasis {
    std::string variable;                       // "velocity" | "p" | "nu_t"
    std::vector<std::string> component_labels;  // stacked block order
    GridPtr grid;
    Eigen::VectorXd mean;         // size components * N
    Eigen::MatrixXd modes;        // (components * N) x rank
    Eigen::VectorXd eigenvalues;  // length = snapshot count, lambda_1 >= ...
    int rank = 0;
    std::string case_hash;

    int num_components() const { return static_cast<int>(component_labels.size()); }
    int points_per_component() const { return grid->num_fluid_cells(); }
    int stacked_size() const { return num_components() * points_per_component(); }

    /// Cell volumes repeated per component (the weighted inner product).
    Eigen::VectorXd weights() const;

    double total_energy() const { return eigenvalues.sum(); }
};

/// Modal coefficient time series a_i(t_j), rows = modes, columns = times.
struct ModalTrajectory {
    std::string variable;
    std::vector<double> times;
    Eigen::MatrixXd coefficients;  // rank x num_times

    int rank() const { return static_cast<int>(coefficients.rows()); }
    int num_times() const { return static_cast<int>(coefficients.cols()); }
};

/// Arithmetic temporal mean of one scalar variable.
Field compute_mean(const SnapshotEnsemble& ensemble, const std::string& variable);

/// Method of snapshots: eigendecomposition of the volume-weighted temporal
/// correlation matrix C_jk = (1/M) (w'_j, w'_k). Modes with eigenvalues
/// below cutoff_rel * lambda_1 are discarded; the retained set is
/// re-orthonormalized and sign-fixed (largest-magnitude entry positive).
/// `variable` is "velocity" (stacked components), "p" or "nu_t".
PodBasis pod_modes(const SnapshotEnsemble& ensemble, const std::string& variable,
                   int max_rank, double cutoff_rel = 1e-12);

/// Stacked snapshot vector for the basis' variable at snapshot j.
Eigen::VectorXd stacked_snapshot(const SnapshotEnsemble& ensemble, const PodBasis& basis, int j);

/// a_i = (field - mean, phi_i) under the weighted inner product.
Eigen::VectorXd project_coefficients(const PodBasis& basis, const Eigen::VectorXd& stacked);
Eigen::VectorXd project_coefficients(const PodBasis& basis, const Field& field);
Eigen::VectorXd project_coefficients(const PodBasis& basis, const VectorField& field);

/// mean + modes * coefficients (+ boundary lift when configured).
Eigen::VectorXd reconstruct(const PodBasis& basis, const Eigen::VectorXd& coefficients,
                            const BoundaryLift* lift = nullptr);

/// Split a stacked vector into per-component fields.
VectorField unstack(const PodBasis& basis, const Eigen::VectorXd& stacked);

/// Coefficient trajectories of the whole ensemble.
ModalTrajectory project_trajectory(const PodBasis& basis, const SnapshotEnsemble& ensemble);

struct RankCriterion {
    enum class Kind { EnergyFraction, Explicit };
    Kind kind = Kind::EnergyFraction;
    double eta = 1.0;
    int rank = 0;

    static RankCriterion energy(double eta);
    static RankCriterion explicit_rank(int r);
};

/// Smallest r whose cumulative energy fraction reaches eta, or the explicit
/// rank; both clamped to the retained rank.
int choose_rank(const PodBasis& basis, const RankCriterion& criterion);

}  // namespace flowrom
