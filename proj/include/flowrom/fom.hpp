#pragma once

#include "flowrom/config.hpp"
#include "flowrom/ensemble.hpp"
#include "flowrom/grid.hpp"
#include "flowrom/operators.hpp"

namespace flowrom {

/// Instantaneous solver state. Pressure is kinematic (p/rho).
struct FomState {
    double time = 0.0;
    VectorField velocity;
    Field pressure;
    Field nu_t;
    double max_divergence = 0.0;  // after the latest projection step
    int poisson_iterations = 0;
};

/// Smagorinsky eddy viscosity nu_T = (cs * Delta)^2 |S| with
/// Delta = sqrt(dx dy) and |S| = sqrt(2 S_ij S_ij) from central-difference
/// strain rates. Non-negative by construction.
Field smagorinsky_nu_t(const VectorField& velocity,
                       const std::vector<BoundaryConditions>& velocity_bcs, double cs);

struct PoissonResult {
    Field phi;
    int iterations = 0;
    double residual = 0.0;  // final relative residual
};

/// Preconditioned CG on the pressure Laplacian (the fused
/// divergence-of-gradient operator with the pressure boundary conditions),
/// assembled once per grid/bc pair. Singular all-Neumann/periodic systems
/// are deflated against constants. `dt` enters the stopping rule so the
/// post-correction divergence meets settings.div_tol.
class PressurePoisson {
public:
    PressurePoisson(GridPtr grid, const BoundaryConditions& p_bc);
    ~PressurePoisson();
    PressurePoisson(PressurePoisson&&) noexcept;
    PressurePoisson& operator=(PressurePoisson&&) noexcept;

    PoissonResult solve(const Field& rhs, const PoissonSettings& settings, double dt,
                        const Field* warm_start = nullptr) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

PoissonResult solve_pressure_poisson(const Field& rhs, const BoundaryConditions& p_bc,
                                     const PoissonSettings& settings, double dt,
                                     const Field* warm_start = nullptr);

/// One explicit RK4 step of the 1D periodic viscous Burgers equation
/// u_t = -u u_x + nu_e u_xx in the skew-symmetric (conservative) split form.
/// Throws StabilityError on CFL violation dt * max|u| / dx > 1.
FomState step_burgers(const FomState& state, double dt, double nu_e,
                      const BoundaryConditions& u_bc, ConvectionScheme scheme);

/// Reusable pieces of the 2D fractional-step solver for one configuration.
struct Ns2dSetup {
    GridPtr grid;
    std::map<std::string, BoundaryConditions> bcs;
    FluidConstants fluid;
    double cs = 0.17;
    ConvectionScheme scheme = ConvectionScheme::SkewCentral;
    PoissonSettings poisson;
    std::shared_ptr<const PressurePoisson> poisson_op;
};

Ns2dSetup make_ns2d_setup(const FomConfig& config, GridPtr grid);

/// Chorin projection step: explicit predictor with convection and
/// effective-viscosity diffusion, pressure-Poisson solve, velocity
/// correction. The returned state satisfies max|div| <= poisson.div_tol.
FomState step_ns2d(const FomState& state, double dt, const Ns2dSetup& setup);

FomState make_initial_state(const FomConfig& config, GridPtr grid);

/// Runs the configured case from its initial condition, discards the
/// spin-up interval and records snapshots of all case variables every
/// snapshot_interval. Deterministic for a given config and seed.
SnapshotEnsemble run_and_collect(const FomConfig& config);

}  // namespace flowrom
