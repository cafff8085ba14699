#include "flowrom/pod.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace flowrom {

Eigen::VectorXd BoundaryLift::contribution(int size) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(size);
    if (static_cast<int>(functions.size()) != values.size()) {
        throw DimensionError("boundary lift has " + std::to_string(functions.size()) +
                             " functions for " + std::to_string(values.size()) + " values");
    }
    for (std::size_t q = 0; q < functions.size(); ++q) {
        if (functions[q].size() != size) throw DimensionError("boundary lift size mismatch");
        out += values[static_cast<int>(q)] * functions[q];
    }
    return out;
}

Eigen::VectorXd PodBasis::weights() const {
    const Eigen::VectorXd& v = grid->cell_volumes();
    Eigen::VectorXd w(stacked_size());
    for (int k = 0; k < num_components(); ++k) w.segment(k * v.size(), v.size()) = v;
    return w;
}

Field compute_mean(const SnapshotEnsemble& ensemble, const std::string& variable) {
    const Eigen::MatrixXd& data = ensemble.variable(variable);
    if (data.cols() == 0) throw ConfigError("cannot average an empty ensemble");
    return Field(variable, ensemble.grid, data.rowwise().mean());
}

namespace {

std::vector<std::string> components_for(const SnapshotEnsemble& ensemble,
                                        const std::string& variable) {
    if (variable == "velocity") return ensemble.velocity_components;
    return {variable};
}

Eigen::MatrixXd stacked_matrix(const SnapshotEnsemble& ensemble,
                               const std::vector<std::string>& components) {
    int n = ensemble.grid->num_fluid_cells();
    int m = ensemble.num_snapshots();
    Eigen::MatrixXd x(static_cast<int>(components.size()) * n, m);
    for (std::size_t k = 0; k < components.size(); ++k) {
        x.middleRows(static_cast<int>(k) * n, n) = ensemble.variable(components[k]);
    }
    return x;
}

}  // namespace

Eigen::VectorXd stacked_snapshot(const SnapshotEnsemble& ensemble, const PodBasis& basis, int j) {
    int n = ensemble.grid->num_fluid_cells();
    Eigen::VectorXd x(basis.stacked_size());
    for (int k = 0; k < basis.num_components(); ++k) {
        const Eigen::MatrixXd& data = ensemble.variable(basis.component_labels[k]);
        if (j < 0 || j >= data.cols()) throw DimensionError("snapshot index out of range");
        x.segment(k * n, n) = data.col(j);
    }
    return x;
}

PodBasis pod_modes(const SnapshotEnsemble& ensemble, const std::string& variable, int max_rank,
                   double cutoff_rel) {
    if (ensemble.num_snapshots() < 2) {
        throw ConfigError("POD needs at least two snapshots");
    }
    PodBasis basis;
    basis.variable = variable;
    basis.component_labels = components_for(ensemble, variable);
    basis.grid = ensemble.grid;
    basis.case_hash = ensemble.case_hash;

    Eigen::MatrixXd x = stacked_matrix(ensemble, basis.component_labels);
    const int m = static_cast<int>(x.cols());
    basis.mean = x.rowwise().mean();
    x.colwise() -= basis.mean;

    Eigen::VectorXd w = basis.weights();
    Eigen::MatrixXd corr = x.transpose() * w.asDiagonal() * x / static_cast<double>(m);
    corr = 0.5 * (corr + corr.transpose().eval());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
    if (eig.info() != Eigen::Success) throw SolverError("correlation eigendecomposition failed");

    // Eigen sorts ascending; flip to descending and clamp tiny negatives.
    Eigen::VectorXd lambda = eig.eigenvalues().reverse();
    Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();
    double lambda1 = lambda.size() ? std::max(lambda[0], 0.0) : 0.0;
    for (int i = 0; i < lambda.size(); ++i) lambda[i] = std::max(lambda[i], 0.0);
    basis.eigenvalues = lambda;

    // absolute floor: fluctuation eigenvalues at the round-off scale of the
    // mean-inclusive snapshot energy are treated as zero (identical
    // snapshots must give rank 0, not a normalized noise mode)
    double energy_scale = 0.0;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd col = x.col(j) + basis.mean;
        energy_scale += col.dot(w.cwiseProduct(col));
    }
    energy_scale /= m;
    double floor = 1e-28 * energy_scale;

    int limit = std::min({max_rank, m - 1, static_cast<int>(lambda.size())});
    int rank = 0;
    while (rank < limit && lambda[rank] > cutoff_rel * lambda1 && lambda[rank] > floor) ++rank;

    basis.rank = rank;
    basis.modes.resize(basis.stacked_size(), rank);
    for (int i = 0; i < rank; ++i) {
        Eigen::VectorXd mode = x * vectors.col(i);
        double norm = std::sqrt(mode.dot(w.cwiseProduct(mode)));
        basis.modes.col(i) = mode / norm;
    }

    // Re-orthonormalize: raw snapshot combinations lose orthogonality for
    // small eigenvalues. Two modified Gram-Schmidt passes in the weighted
    // inner product keep the span and restore orthonormality to roundoff.
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < rank; ++i) {
            auto mode = basis.modes.col(i);
            for (int k = 0; k < i; ++k) {
                double proj = basis.modes.col(k).dot(w.cwiseProduct(mode));
                mode -= proj * basis.modes.col(k);
            }
            mode /= std::sqrt(mode.dot(w.cwiseProduct(mode)));
        }
    }

    // Deterministic sign: largest-magnitude entry positive.
    for (int i = 0; i < rank; ++i) {
        int idx = 0;
        basis.modes.col(i).cwiseAbs().maxCoeff(&idx);
        if (basis.modes(idx, i) < 0.0) basis.modes.col(i) = -basis.modes.col(i);
    }
    return basis;
}

Eigen::VectorXd project_coefficients(const PodBasis& basis, const Eigen::VectorXd& stacked) {
    if (stacked.size() != basis.stacked_size()) {
        throw DimensionError("projection input has size " + std::to_string(stacked.size()) +
                             ", basis expects " + std::to_string(basis.stacked_size()));
    }
    Eigen::VectorXd w = basis.weights();
    return basis.modes.transpose() * w.cwiseProduct(stacked - basis.mean);
}

Eigen::VectorXd project_coefficients(const PodBasis& basis, const Field& field) {
    if (basis.num_components() != 1) {
        throw DimensionError("scalar projection against a vector-valued basis");
    }
    if (!(*field.grid == *basis.grid)) throw DimensionError("field grid differs from basis grid");
    return project_coefficients(basis, field.values);
}

Eigen::VectorXd project_coefficients(const PodBasis& basis, const VectorField& field) {
    if (static_cast<int>(field.size()) != basis.num_components()) {
        throw DimensionError("component count mismatch in projection");
    }
    int n = basis.points_per_component();
    Eigen::VectorXd stacked(basis.stacked_size());
    for (int k = 0; k < basis.num_components(); ++k) {
        if (!(*field[k].grid == *basis.grid)) {
            throw DimensionError("field grid differs from basis grid");
        }
        stacked.segment(k * n, n) = field[k].values;
    }
    return project_coefficients(basis, stacked);
}

Eigen::VectorXd reconstruct(const PodBasis& basis, const Eigen::VectorXd& coefficients,
                            const BoundaryLift* lift) {
    if (coefficients.size() != basis.rank) {
        throw DimensionError("coefficient length " + std::to_string(coefficients.size()) +
                             " does not match basis rank " + std::to_string(basis.rank));
    }
    Eigen::VectorXd out = basis.mean + basis.modes * coefficients;
    if (lift) out += lift->contribution(basis.stacked_size());
    return out;
}

VectorField unstack(const PodBasis& basis, const Eigen::VectorXd& stacked) {
    if (stacked.size() != basis.stacked_size()) throw DimensionError("unstack size mismatch");
    int n = basis.points_per_component();
    VectorField out;
    for (int k = 0; k < basis.num_components(); ++k) {
        out.emplace_back(basis.component_labels[k], basis.grid,
                         stacked.segment(k * n, n).eval());
    }
    return out;
}

ModalTrajectory project_trajectory(const PodBasis& basis, const SnapshotEnsemble& ensemble) {
    ModalTrajectory traj;
    traj.variable = basis.variable;
    traj.times = ensemble.times;
    traj.coefficients.resize(basis.rank, ensemble.num_snapshots());
    for (int j = 0; j < ensemble.num_snapshots(); ++j) {
        traj.coefficients.col(j) = project_coefficients(basis, stacked_snapshot(ensemble, basis, j));
    }
    return traj;
}

RankCriterion RankCriterion::energy(double eta) {
    RankCriterion c;
    c.kind = Kind::EnergyFraction;
    c.eta = eta;
    return c;
}

RankCriterion RankCriterion::explicit_rank(int r) {
    RankCriterion c;
    c.kind = Kind::Explicit;
    c.rank = r;
    return c;
}

int choose_rank(const PodBasis& basis, const RankCriterion& criterion) {
    if (criterion.kind == RankCriterion::Kind::Explicit) {
        if (criterion.rank < 0) throw ConfigError("explicit rank must be non-negative");
        return std::min(criterion.rank, basis.rank);
    }
    if (!(criterion.eta > 0.0 && criterion.eta <= 1.0)) {
        throw ConfigError("energy fraction must lie in (0, 1]");
    }
    double total = basis.eigenvalues.sum();
    if (total <= 0.0) return 0;
    double acc = 0.0;
    for (int r = 1; r <= basis.eigenvalues.size(); ++r) {
        acc += basis.eigenvalues[r - 1];
        if (acc / total >= criterion.eta) return std::min(r, basis.rank);
    }
    return basis.rank;
}

}  // namespace flowrom
