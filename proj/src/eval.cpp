#include "flowrom/eval.hpp"

#include <chrono>
#include <cmath>

namespace flowrom {

RmseReport rmse_per_mode(const ModalTrajectory& predicted, const ModalTrajectory& exact) {
    if (predicted.rank() != exact.rank()) {
        throw DimensionError("rank mismatch: predicted " + std::to_string(predicted.rank()) +
                             " vs exact " + std::to_string(exact.rank()));
    }
    if (exact.num_times() < 2) throw ConfigError("exact trajectory needs at least two samples");
    if (predicted.num_times() < 1) throw ConfigError("empty predicted trajectory");

    double spacing = exact.times[1] - exact.times[0];
    RmseReport report;
    report.variable = predicted.variable;
    report.n_samples = predicted.num_times();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(predicted.rank());
    for (int j = 0; j < predicted.num_times(); ++j) {
        double t = predicted.times[j];
        long idx = std::lround((t - exact.times[0]) / spacing);
        if (idx < 0 || idx >= exact.num_times() ||
            std::abs(exact.times[idx] - t) > 0.5 * spacing + 1e-12) {
            throw ConfigError("predicted time " + std::to_string(t) +
                              " has no matching exact snapshot");
        }
        acc += (predicted.coefficients.col(j) - exact.coefficients.col(idx))
                   .array()
                   .square()
                   .matrix();
    }
    report.rmse = (acc / predicted.num_times()).cwiseSqrt();
    return report;
}

ForceSample compute_forces(const Field& pressure, const VectorField& velocity, const Field& nu_e,
                           BoundaryLabel body, double rho, double p_ref) {
    const StructuredGrid& grid = *pressure.grid;
    if (grid.dims() != 2 || velocity.size() != 2) {
        throw DimensionError("force computation expects a 2D velocity field");
    }
    auto faces = grid.faces_with_label(body);
    if (faces.empty()) {
        throw ConfigError("no boundary faces carry label '" + to_string(body) + "'");
    }

    ForceSample sample;
    for (const auto& face : faces) {
        int c = face.fluid_cell;
        double h = face.axis == 0 ? grid.dx() : grid.dy();

        sample.pressure_force[0] += rho * face.area[0] * (pressure[c] - p_ref);
        sample.pressure_force[1] += rho * face.area[1] * (pressure[c] - p_ref);

        // one-sided velocity gradient into the fluid; wall velocity is zero
        double grad[2][2] = {{0.0, 0.0}, {0.0, 0.0}};  // grad[a][k] = d u_k / d x_a
        for (int k = 0; k < 2; ++k) {
            grad[face.axis][k] = -face.direction * 2.0 * velocity[k][c] / h;
        }
        double t[2][2];
        for (int a = 0; a < 2; ++a) {
            for (int k = 0; k < 2; ++k) t[a][k] = grad[a][k] + grad[k][a];
        }
        double trace_third = (t[0][0] + t[1][1]) / 3.0;
        t[0][0] -= trace_third;
        t[1][1] -= trace_third;

        double nu_face = nu_e[c];
        for (int k = 0; k < 2; ++k) {
            double s_dot = face.area[0] * t[0][k] + face.area[1] * t[1][k];
            sample.viscous_force[k] += rho * nu_face * s_dot;
        }
    }
    return sample;
}

FieldDeviation field_deviation(const Field& reconstructed, const Field& exact, double scale) {
    if (!(*reconstructed.grid == *exact.grid)) {
        throw DimensionError("deviation fields live on different grids");
    }
    if (!(scale > 0.0)) throw ConfigError("normalization scale must be positive");

    FieldDeviation out;
    out.deviation = Field("deviation", reconstructed.grid,
                          ((reconstructed.values - exact.values) / scale).eval());
    const Eigen::VectorXd& d = out.deviation.values;
    out.stats.max_abs = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
    out.stats.mean_abs = d.size() ? d.cwiseAbs().mean() : 0.0;
    out.stats.rms = d.size() ? std::sqrt(d.squaredNorm() / d.size()) : 0.0;
    return out;
}

SpeedupReport benchmark_speedup(const FomConfig& config, const RomModel& model,
                                const Eigen::VectorXd& a0, double fom_sim_seconds,
                                double rom_sim_seconds, double rom_dt, double output_interval) {
    if (!(fom_sim_seconds > 0.0) || !(rom_sim_seconds > 0.0)) {
        throw ConfigError("benchmark durations must be positive");
    }

    SpeedupReport report;
    report.rom_modes = model.ops.velocity_rank;
    report.fom_measured_sim_seconds = fom_sim_seconds;
    report.rom_measured_sim_seconds = rom_sim_seconds;

    GridPtr grid = make_grid(config.grid);
    report.fom_cells = grid->num_fluid_cells();
    FomState state = make_initial_state(config, grid);
    long steps = std::lround(fom_sim_seconds / config.dt);

    auto t0 = std::chrono::steady_clock::now();
    if (config.kind == CaseKind::Burgers1d) {
        auto bcs = case_boundary_conditions(config);
        for (long s = 0; s < steps; ++s) {
            state = step_burgers(state, config.dt, config.fluid.nu_m, bcs.at("u"),
                                 config.convection);
        }
    } else {
        Ns2dSetup setup = make_ns2d_setup(config, grid);
        for (long s = 0; s < steps; ++s) state = step_ns2d(state, config.dt, setup);
    }
    auto t1 = std::chrono::steady_clock::now();
    report.fom_seconds_per_sim_second =
        std::chrono::duration<double>(t1 - t0).count() / fom_sim_seconds;

    auto t2 = std::chrono::steady_clock::now();
    RomTrajectory traj = integrate(model, a0, 0.0, rom_sim_seconds, rom_dt, output_interval);
    auto t3 = std::chrono::steady_clock::now();
    report.rom_seconds_per_sim_second =
        std::chrono::duration<double>(t3 - t2).count() / rom_sim_seconds;
    if (traj.diverged) {
        throw SolverError("ROM diverged during the speedup benchmark at t = " +
                          std::to_string(traj.divergence_time));
    }

    if (!(report.fom_seconds_per_sim_second > 0.0) ||
        !(report.rom_seconds_per_sim_second > 0.0)) {
        throw SolverError("benchmark produced non-positive timings");
    }
    report.ratio = report.fom_seconds_per_sim_second / report.rom_seconds_per_sim_second;
    return report;
}

}  // namespace flowrom
