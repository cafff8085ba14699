#pragma once

#include <cmath>
#include <memory>

#include "flowrom/config.hpp"
#include "flowrom/ensemble.hpp"
#include "flowrom/fom.hpp"
#include "flowrom/grid.hpp"
#include "flowrom/rng.hpp"

namespace flowrom::test {

constexpr double kPi = 3.14159265358979323846;

inline GridPtr periodic_grid_1d(int n, double length) {
    return std::make_shared<StructuredGrid>(n, 1, length / n, 1.0, true, true);
}

inline GridPtr periodic_grid_2d(int n, double length) {
    return std::make_shared<StructuredGrid>(n, n, length / n, length / n, true, true);
}

inline BoundaryConditions periodic_bc() { return BoundaryConditions{}; }

inline BoundaryConditions uniform_bc(BcKind kind, double value = 0.0) {
    BoundaryConditions bc;
    for (auto label : {BoundaryLabel::West, BoundaryLabel::East, BoundaryLabel::South,
                       BoundaryLabel::North, BoundaryLabel::Body}) {
        bc.set(label, {kind, value});
    }
    return bc;
}

inline Field random_field(const GridPtr& grid, Rng& rng, const std::string& name = "f") {
    Field f(name, grid);
    for (int c = 0; c < grid->num_fluid_cells(); ++c) f[c] = rng.uniform_pm1();
    return f;
}

/// Discretely divergence-free periodic 2D velocity from a random streamfunction,
/// matching the face-based divergence stencil.
inline VectorField random_solenoidal(const GridPtr& grid, Rng& rng) {
    Field psi = random_field(grid, rng, "psi");
    const StructuredGrid& g = *grid;
    Field u("u", grid), v("v", grid);
    for (int c = 0; c < g.num_fluid_cells(); ++c) {
        int ix = g.fluid_ix(c), iy = g.fluid_iy(c);
        int jm = g.fluid_index(ix, (iy - 1 + g.ny()) % g.ny());
        int im = g.fluid_index((ix - 1 + g.nx()) % g.nx(), iy);
        u[c] = (psi[c] - psi[jm]) / g.dy();
        v[c] = -(psi[c] - psi[im]) / g.dx();
    }
    return {u, v};
}

/// Small decaying Burgers ensemble used across the POD/Galerkin/closure tests.
inline FomConfig quick_burgers_config() {
    FomConfig config;
    config.kind = CaseKind::Burgers1d;
    config.grid = {128, 1, 1.0 / 128, 1.0, true, true, {}};
    config.fluid = {1.0, 0.02};
    config.dt = 0.001;
    config.snapshot_interval = 0.02;
    config.horizon = 2.0;
    config.seed = 11;
    config.ic.type = "sine_sum";
    config.ic.mean = 1.0;
    config.ic.components = {{0.05, 1, 0.0}, {0.02, 2, 1.3}};
    return config;
}

/// Tiny periodic 2D ensemble (decaying random vortices with eddy viscosity)
/// for the pressure-coupled Galerkin paths.
inline FomConfig quick_ns2d_periodic_config() {
    FomConfig config;
    config.kind = CaseKind::Ns2dPeriodic;
    int n = 24;
    double l = 2.0 * kPi;
    config.grid = {n, n, l / n, l / n, true, true, {}};
    config.fluid = {1.0, 0.02};
    config.smagorinsky_cs = 0.1;
    config.dt = 0.005;
    config.snapshot_interval = 0.05;
    config.horizon = 1.0;
    config.seed = 3;
    config.ic.type = "random_solenoidal";
    config.ic.amplitude = 0.6;
    return config;
}

}  // namespace flowrom::test
