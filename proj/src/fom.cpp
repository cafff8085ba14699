#include "flowrom/fom.hpp"

#include <cmath>

#include <Eigen/Sparse>

#include "flowrom/rng.hpp"

namespace flowrom {

namespace {

constexpr double kPi = 3.14159265358979323846;

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Field smagorinsky_nu_t(const VectorField& velocity,
                       const std::vector<BoundaryConditions>& velocity_bcs, double cs) {
    if (velocity.size() != 2 || velocity_bcs.size() != 2) {
        throw DimensionError("smagorinsky_nu_t expects a 2D velocity");
    }
    const Field& u = velocity[0];
    const Field& v = velocity[1];
    const StructuredGrid& grid = *u.grid;

    Field out("nu_t", u.grid);
    if (cs == 0.0) return out;

    Field s11 = central_derivative(u, velocity_bcs[0], 0);
    Field s22 = central_derivative(v, velocity_bcs[1], 1);
    Field dudy = central_derivative(u, velocity_bcs[0], 1);
    Field dvdx = central_derivative(v, velocity_bcs[1], 0);

    double delta2 = cs * cs * grid.dx() * grid.dy();
    for (int c = 0; c < grid.num_fluid_cells(); ++c) {
        double s12 = 0.5 * (dudy[c] + dvdx[c]);
        double mag = std::sqrt(2.0 * (s11[c] * s11[c] + s22[c] * s22[c]) + 4.0 * s12 * s12);
        out[c] = delta2 * mag;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pressure Poisson
// ---------------------------------------------------------------------------

namespace {

// Linear part of the pressure Laplacian as a sparse SPD system B = -A plus
// the affine offset A(0) from inhomogeneous fixed values.
struct PoissonOperator {
    Eigen::SparseMatrix<double> B;
    Eigen::VectorXd offset;
    Eigen::VectorXd inv_diag;
    bool singular = false;
};

PoissonOperator build_poisson_operator(const GridPtr& grid, const BoundaryConditions& p_bc) {
    const StructuredGrid& g = *grid;
    int n = g.num_fluid_cells();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(n) * 5);
    bool has_dirichlet = false;

    Field zero("p", grid);
    Field offset_field = laplacian(zero, p_bc);

    for (int c = 0; c < n; ++c) {
        double diag = 0.0;
        int ix = g.fluid_ix(c), iy = g.fluid_iy(c);
        for (int a = 0; a < g.dims(); ++a) {
            double h2 = (a == 0 ? g.dx() * g.dx() : g.dy() * g.dy());
            for (int dir : {-1, +1}) {
                int jx = ix + (a == 0 ? dir : 0);
                int jy = iy + (a == 1 ? dir : 0);
                BoundaryLabel label;
                bool outside = false;
                if (a == 0) {
                    if (g.periodic_x()) jx = (jx + g.nx()) % g.nx();
                    else if (jx < 0) { outside = true; label = BoundaryLabel::West; }
                    else if (jx >= g.nx()) { outside = true; label = BoundaryLabel::East; }
                } else {
                    if (g.periodic_y()) jy = (jy + g.ny()) % g.ny();
                    else if (jy < 0) { outside = true; label = BoundaryLabel::South; }
                    else if (jy >= g.ny()) { outside = true; label = BoundaryLabel::North; }
                }
                int nb = outside ? -1 : g.fluid_index(jx, jy);
                if (!outside && nb < 0) {
                    outside = true;
                    label = BoundaryLabel::Body;
                }
                if (!outside) {
                    if (nb == c) continue;  // single-cell periodic direction
                    triplets.emplace_back(c, nb, -1.0 / h2);
                    diag += 1.0 / h2;
                } else {
                    const BcSpec& spec = p_bc.at(label);
                    if (spec.kind == BcKind::FixedValue) {
                        diag += 2.0 / h2;
                        has_dirichlet = true;
                    }
                }
            }
        }
        triplets.emplace_back(c, c, diag);
    }

    PoissonOperator op;
    op.B.resize(n, n);
    op.B.setFromTriplets(triplets.begin(), triplets.end());
    op.offset = offset_field.values;
    op.singular = !has_dirichlet;
    op.inv_diag.resize(n);
    for (int c = 0; c < n; ++c) {
        double d = op.B.coeff(c, c);
        op.inv_diag[c] = d > 0.0 ? 1.0 / d : 1.0;
    }
    return op;
}

PoissonResult solve_with_operator(const PoissonOperator& op, const Field& rhs,
                                  const PoissonSettings& settings, double dt,
                                  const Field* warm_start) {
    int n = static_cast<int>(rhs.values.size());
    Eigen::VectorXd c = op.offset - rhs.values;
    if (op.singular) c.array() -= c.mean();

    PoissonResult result;
    result.phi = Field("p", rhs.grid);

    double c_norm = c.norm();
    if (c_norm == 0.0) return result;

    Eigen::VectorXd x = warm_start ? warm_start->values : Eigen::VectorXd::Zero(n);
    if (op.singular && warm_start) x.array() -= x.mean();

    Eigen::VectorXd r = c - op.B * x;
    Eigen::VectorXd z = op.inv_diag.cwiseProduct(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);

    auto converged = [&](const Eigen::VectorXd& res) {
        if (res.norm() > settings.tol * c_norm) return false;
        return dt * max_abs(res) <= settings.div_tol;
    };

    int it = 0;
    while (!converged(r)) {
        if (it >= settings.max_iters) {
            throw SolverError("pressure Poisson did not converge: relative residual " +
                              std::to_string(r.norm() / c_norm) + " after " +
                              std::to_string(it) + " iterations");
        }
        Eigen::VectorXd Bp = op.B * p;
        double alpha = rz / p.dot(Bp);
        x += alpha * p;
        r -= alpha * Bp;
        z = op.inv_diag.cwiseProduct(r);
        double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
        ++it;
    }

    if (op.singular) x.array() -= x.mean();
    result.phi.values = x;
    result.iterations = it;
    result.residual = r.norm() / c_norm;
    return result;
}

}  // namespace

struct PressurePoisson::Impl {
    PoissonOperator op;
};

PressurePoisson::PressurePoisson(GridPtr grid, const BoundaryConditions& p_bc)
    : impl_(std::make_unique<Impl>()) {
    impl_->op = build_poisson_operator(grid, p_bc);
}

PressurePoisson::~PressurePoisson() = default;
PressurePoisson::PressurePoisson(PressurePoisson&&) noexcept = default;
PressurePoisson& PressurePoisson::operator=(PressurePoisson&&) noexcept = default;

PoissonResult PressurePoisson::solve(const Field& rhs, const PoissonSettings& settings, double dt,
                                     const Field* warm_start) const {
    return solve_with_operator(impl_->op, rhs, settings, dt, warm_start);
}

PoissonResult solve_pressure_poisson(const Field& rhs, const BoundaryConditions& p_bc,
                                     const PoissonSettings& settings, double dt,
                                     const Field* warm_start) {
    return PressurePoisson(rhs.grid, p_bc).solve(rhs, settings, dt, warm_start);
}

// ---------------------------------------------------------------------------
// 1D Burgers
// ---------------------------------------------------------------------------

FomState step_burgers(const FomState& state, double dt, double nu_e,
                      const BoundaryConditions& u_bc, ConvectionScheme scheme) {
    const Field& u = state.velocity.at(0);
    const StructuredGrid& grid = *u.grid;
    if (grid.dims() != 1) throw DimensionError("step_burgers expects a 1D grid");

    double cfl = dt * max_abs(u.values) / grid.dx();
    if (cfl > 1.0) {
        throw StabilityError("CFL violation in Burgers step: dt*max|u|/dx = " +
                             std::to_string(cfl));
    }

    auto rhs = [&](const Eigen::VectorXd& values) {
        Field w("u", u.grid, values);
        VectorField vel{w};
        Field conv = convection(vel, {u_bc}, w, u_bc, scheme);
        Field visc = laplacian(w, u_bc);
        return (nu_e * visc.values - conv.values).eval();
    };

    Eigen::VectorXd k1 = rhs(u.values);
    Eigen::VectorXd k2 = rhs(u.values + 0.5 * dt * k1);
    Eigen::VectorXd k3 = rhs(u.values + 0.5 * dt * k2);
    Eigen::VectorXd k4 = rhs(u.values + dt * k3);

    FomState next = state;
    next.time = state.time + dt;
    next.velocity[0].values = u.values + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return next;
}

// ---------------------------------------------------------------------------
// 2D incompressible Navier-Stokes (Chorin projection)
// ---------------------------------------------------------------------------

Ns2dSetup make_ns2d_setup(const FomConfig& config, GridPtr grid) {
    Ns2dSetup setup;
    setup.grid = std::move(grid);
    setup.bcs = case_boundary_conditions(config);
    setup.fluid = config.fluid;
    setup.cs = config.smagorinsky_cs;
    setup.scheme = config.convection;
    setup.poisson = config.poisson;
    setup.poisson_op = std::make_shared<PressurePoisson>(setup.grid, setup.bcs.at("p"));
    return setup;
}

FomState step_ns2d(const FomState& state, double dt, const Ns2dSetup& setup) {
    const StructuredGrid& grid = *setup.grid;
    if (grid.dims() != 2) throw DimensionError("step_ns2d expects a 2D grid");
    std::vector<BoundaryConditions> vel_bcs{setup.bcs.at("u"), setup.bcs.at("v")};
    const BoundaryConditions& p_bc = setup.bcs.at("p");

    // predictor: convection + effective-viscosity diffusion
    VectorField star = state.velocity;
    for (int k = 0; k < 2; ++k) {
        Field conv = convection(state.velocity, vel_bcs, state.velocity[k], vel_bcs[k],
                                setup.scheme);
        Field visc = diffusion(state.velocity[k], vel_bcs[k], setup.fluid.nu_m, &state.nu_t);
        star[k].values += dt * (visc.values - conv.values);
    }

    Field div_star = divergence(star, vel_bcs);
    Field rhs("rhs", setup.grid, (div_star.values / dt).eval());
    if (!setup.poisson_op) throw ConfigError("Ns2dSetup is missing its Poisson operator");
    PoissonResult pres = setup.poisson_op->solve(rhs, setup.poisson, dt, &state.pressure);

    VectorField grad_phi = gradient(pres.phi, p_bc);
    FomState next;
    next.time = state.time + dt;
    next.velocity = std::move(star);
    for (int k = 0; k < 2; ++k) next.velocity[k].values -= dt * grad_phi[k].values;
    next.pressure = pres.phi;
    next.nu_t = smagorinsky_nu_t(next.velocity, vel_bcs, setup.cs);
    next.max_divergence = max_abs(divergence(next.velocity, vel_bcs).values);
    next.poisson_iterations = pres.iterations;
    return next;
}

// ---------------------------------------------------------------------------
// Initial conditions and ensemble collection
// ---------------------------------------------------------------------------

FomState make_initial_state(const FomConfig& config, GridPtr grid) {
    FomState state;
    state.time = 0.0;

    if (config.kind == CaseKind::Burgers1d) {
        Field u("u", grid);
        double length = grid->nx() * grid->dx();
        for (int c = 0; c < grid->num_fluid_cells(); ++c) {
            double x = grid->x_center(c);
            double value = config.ic.mean;
            for (const auto& comp : config.ic.components) {
                value += comp.amplitude *
                         std::sin(2.0 * kPi * comp.wavenumber * x / length + comp.phase);
            }
            u[c] = value;
        }
        state.velocity = {u};
        state.pressure = Field("p", grid);
        state.nu_t = Field("nu_t", grid);
        return state;
    }

    Field u("u", grid), v("v", grid);
    double lx = grid->nx() * grid->dx();
    double ly = grid->ny() * grid->dy();
    if (config.ic.type == "taylor_green") {
        double a = config.ic.amplitude;
        double k = 2.0 * kPi / lx;
        for (int c = 0; c < grid->num_fluid_cells(); ++c) {
            double x = grid->x_center(c), y = grid->y_center(c);
            u[c] = a * std::cos(k * x) * std::sin(k * y);
            v[c] = -a * std::sin(k * x) * std::cos(k * y);
        }
    } else if (config.ic.type == "random_solenoidal") {
        // velocity from a seeded random smooth streamfunction; the first
        // projection step enforces the discrete divergence constraint
        Rng rng(config.seed);
        struct Wave { double amp, kx, ky, phase_x, phase_y; };
        std::vector<Wave> waves;
        for (int mx = 1; mx <= 3; ++mx) {
            for (int my = 1; my <= 3; ++my) {
                Wave wave;
                wave.amp = config.ic.amplitude / (mx * mx + my * my);
                wave.kx = 2.0 * kPi * mx / lx;
                wave.ky = 2.0 * kPi * my / ly;
                wave.phase_x = 2.0 * kPi * rng.uniform01();
                wave.phase_y = 2.0 * kPi * rng.uniform01();
                waves.push_back(wave);
            }
        }
        for (int c = 0; c < grid->num_fluid_cells(); ++c) {
            double x = grid->x_center(c), y = grid->y_center(c);
            for (const auto& w : waves) {
                // u = d(psi)/dy, v = -d(psi)/dx for psi = amp sin(..x) sin(..y)
                u[c] += w.amp * w.ky * std::sin(w.kx * x + w.phase_x) *
                        std::cos(w.ky * y + w.phase_y);
                v[c] -= w.amp * w.kx * std::cos(w.kx * x + w.phase_x) *
                        std::sin(w.ky * y + w.phase_y);
            }
        }
    } else {
        // uniform inflow with a seeded smooth perturbation on v to trigger
        // the wake instability reproducibly
        Rng rng(config.seed);
        std::array<double, 3> phase_x{}, phase_y{};
        for (int m = 0; m < 3; ++m) {
            phase_x[m] = 2.0 * kPi * rng.uniform01();
            phase_y[m] = 2.0 * kPi * rng.uniform01();
        }
        for (int c = 0; c < grid->num_fluid_cells(); ++c) {
            double x = grid->x_center(c), y = grid->y_center(c);
            u[c] = config.u_in;
            double pert = 0.0;
            for (int m = 1; m <= 3; ++m) {
                pert += (config.ic.amplitude / m) *
                        std::sin(2.0 * kPi * m * x / lx + phase_x[m - 1]) *
                        std::sin(kPi * m * y / ly + phase_y[m - 1]);
            }
            v[c] = pert;
        }
    }
    state.velocity = {u, v};
    state.pressure = Field("p", grid);
    auto bcs = case_boundary_conditions(config);
    state.nu_t = smagorinsky_nu_t(state.velocity, {bcs.at("u"), bcs.at("v")},
                                  config.smagorinsky_cs);
    return state;
}

SnapshotEnsemble run_and_collect(const FomConfig& config) {
    config.validate();
    GridPtr grid = make_grid(config.grid);
    FomState state = make_initial_state(config, grid);

    long steps_per_snapshot = std::lround(config.snapshot_interval / config.dt);
    long spin_up_steps = std::lround(config.spin_up / config.dt);
    int num_snapshots = static_cast<int>(std::lround(config.horizon / config.snapshot_interval)) + 1;

    SnapshotEnsemble ensemble;
    ensemble.grid = grid;
    ensemble.fluid = config.fluid;
    ensemble.bcs = case_boundary_conditions(config);
    ensemble.velocity_components = case_velocity_components(config.kind);
    ensemble.case_kind = to_string(config.kind);
    ensemble.snapshot_interval = config.snapshot_interval;
    ensemble.horizon = config.horizon;
    ensemble.seed = config.seed;

    int n = grid->num_fluid_cells();
    for (const auto& var : case_variables(config.kind)) {
        ensemble.snapshots[var] = Eigen::MatrixXd::Zero(n, num_snapshots);
    }

    Ns2dSetup setup;
    if (config.kind != CaseKind::Burgers1d) setup = make_ns2d_setup(config, grid);
    const BoundaryConditions u_bc =
        config.kind == CaseKind::Burgers1d ? ensemble.bcs.at("u") : BoundaryConditions{};

    auto advance = [&](FomState& s) {
        try {
            if (config.kind == CaseKind::Burgers1d) {
                s = step_burgers(s, config.dt, config.fluid.nu_m, u_bc, config.convection);
            } else {
                s = step_ns2d(s, config.dt, setup);
                if (s.max_divergence > 10.0 * config.poisson.div_tol) {
                    throw SolverError("post-projection divergence " +
                                      std::to_string(s.max_divergence) + " exceeds tolerance");
                }
            }
        } catch (const StabilityError& e) {
            throw StabilityError(std::string(e.what()) + " at t = " + std::to_string(s.time));
        } catch (const SolverError& e) {
            throw SolverError(std::string(e.what()) + " at t = " + std::to_string(s.time));
        }
    };

    for (long step = 0; step < spin_up_steps; ++step) advance(state);

    auto record = [&](int j) {
        ensemble.times.push_back(j * config.snapshot_interval);
        for (const auto& var : case_variables(config.kind)) {
            Eigen::MatrixXd& data = ensemble.snapshots.at(var);
            if (var == "u") data.col(j) = state.velocity[0].values;
            else if (var == "v") data.col(j) = state.velocity[1].values;
            else if (var == "p") data.col(j) = state.pressure.values;
            else data.col(j) = state.nu_t.values;
        }
    };

    record(0);
    for (int j = 1; j < num_snapshots; ++j) {
        for (long step = 0; step < steps_per_snapshot; ++step) advance(state);
        record(j);
    }

    ensemble.validate();
    return ensemble;
}

}  // namespace flowrom
