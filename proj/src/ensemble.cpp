#include "flowrom/ensemble.hpp"

#include <cmath>

namespace flowrom {

Field SnapshotEnsemble::field_at(const std::string& name, int snapshot) const {
    const Eigen::MatrixXd& data = variable(name);
    if (snapshot < 0 || snapshot >= data.cols()) {
        throw DimensionError("snapshot index " + std::to_string(snapshot) + " out of range");
    }
    return Field(name, grid, data.col(snapshot));
}

VectorField SnapshotEnsemble::velocity_at(int snapshot) const {
    VectorField out;
    for (const auto& comp : velocity_components) out.push_back(field_at(comp, snapshot));
    return out;
}

int SnapshotEnsemble::snapshot_index_at(double t) const {
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (std::abs(times[j] - t) <= 1e-9 * std::max(1.0, std::abs(t))) {
            return static_cast<int>(j);
        }
    }
    throw ConfigError("time " + std::to_string(t) + " is not a snapshot time");
}

void SnapshotEnsemble::validate() const {
    if (times.empty()) throw ConfigError("ensemble has no snapshots");
    if (snapshot_interval > 0.0) {
        long expected = std::lround(horizon / snapshot_interval) + 1;
        if (static_cast<long>(times.size()) != expected) {
            throw ConfigError("snapshot count " + std::to_string(times.size()) +
                              " does not match horizon/interval + 1 = " + std::to_string(expected));
        }
        for (std::size_t j = 1; j < times.size(); ++j) {
            double dt = times[j] - times[j - 1];
            if (std::abs(dt - snapshot_interval) > 1e-9 * snapshot_interval) {
                throw ConfigError("snapshot times are not uniformly spaced");
            }
        }
    }
    for (const auto& [name, data] : snapshots) {
        if (data.rows() != grid->num_fluid_cells() ||
            data.cols() != static_cast<int>(times.size())) {
            throw DimensionError("snapshot matrix for '" + name + "' has wrong shape");
        }
        if (!data.allFinite()) throw ConfigError("non-finite values in variable '" + name + "'");
    }
}

}  // namespace flowrom
