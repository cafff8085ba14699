#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "flowrom/grid.hpp"

namespace flowrom {

/// Time-stamped snapshot data for all variables of one full-order run.
/// Snapshot matrices are (fluid cells) x (snapshot count), column j at t_j.
struct SnapshotEnsemble {
    GridPtr grid;
    FluidConstants fluid;
    std::vector<double> times;
    std::map<std::string, Eigen::MatrixXd> snapshots;
    std::map<std::string, BoundaryConditions> bcs;
    std::vector<std::string> velocity_components;  // {"u"} or {"u", "v"}
    std::string case_kind;
    std::string case_hash;
    double snapshot_interval = 0.0;
    double horizon = 0.0;
    std::uint64_t seed = 0;  // the generating configuration's seed

    int num_snapshots() const { return static_cast<int>(times.size()); }

    const Eigen::MatrixXd& variable(const std::string& name) const {
        auto it = snapshots.find(name);
        if (it == snapshots.end()) throw ConfigError("ensemble has no variable '" + name + "'");
        return it->second;
    }

    const BoundaryConditions& bc(const std::string& name) const {
        auto it = bcs.find(name);
        if (it == bcs.end()) throw ConfigError("ensemble has no boundary spec for '" + name + "'");
        return it->second;
    }

    std::vector<BoundaryConditions> velocity_bcs() const {
        std::vector<BoundaryConditions> out;
        for (const auto& comp : velocity_components) out.push_back(bc(comp));
        return out;
    }

    Field field_at(const std::string& name, int snapshot) const;
    VectorField velocity_at(int snapshot) const;

    int snapshot_index_at(double t) const;  // exact time lookup, throws if absent

    /// Checks uniform spacing, count = horizon/interval + 1, shared times
    /// across variables and finiteness.
    void validate() const;
};

}  // namespace flowrom
