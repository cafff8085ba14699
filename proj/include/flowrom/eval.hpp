#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "flowrom/config.hpp"
#include "flowrom/fom.hpp"
#include "flowrom/pod.hpp"
#include "flowrom/rom.hpp"

namespace flowrom {

struct RmseReport {
    std::string variable;
    std::string variant;
    Eigen::VectorXd rmse;  // per mode
    int n_samples = 0;
};

/// RMSE = sqrt(1/n_T sum_j [(a_ij)_P - (a_ij)_E]^2) per mode. The exact
/// trajectory is resampled to the predicted times by nearest-snapshot match;
/// a mismatch beyond half the exact spacing is an error.
RmseReport rmse_per_mode(const ModalTrajectory& predicted, const ModalTrajectory& exact);

struct ForceSample {
    double time = 0.0;
    Eigen::Vector2d pressure_force{0.0, 0.0};  // F_p [N per unit depth]
    Eigen::Vector2d viscous_force{0.0, 0.0};   // F_v
    Eigen::Vector2d total() const { return pressure_force + viscous_force; }
};

struct ForceSeries {
    std::vector<ForceSample> samples;
    double p_ref = 0.0;
};

/// Surface forces on a closed no-slip body: F_p = rho sum_i s_i (p_i - p_ref)
/// and F_v = rho sum_i s_i . (nu_E R_i) with R the deviatoric rate-of-strain
/// tensor from one-sided face gradients into the fluid.
ForceSample compute_forces(const Field& pressure, const VectorField& velocity, const Field& nu_e,
                           BoundaryLabel body, double rho, double p_ref);

struct DeviationStats {
    double max_abs = 0.0;
    double mean_abs = 0.0;
    double rms = 0.0;
};

struct FieldDeviation {
    Field deviation;
    DeviationStats stats;
};

/// (reconstructed - exact) / scale per fluid cell with summary statistics.
FieldDeviation field_deviation(const Field& reconstructed, const Field& exact, double scale);

struct SpeedupReport {
    double fom_seconds_per_sim_second = 0.0;
    double rom_seconds_per_sim_second = 0.0;
    double ratio = 0.0;
    int fom_cells = 0;
    int rom_modes = 0;
    double fom_measured_sim_seconds = 0.0;  // both runs may be time-scaled
    double rom_measured_sim_seconds = 0.0;
};

/// Wall-clocks the full-order solver and the assembled ROM over the given
/// simulated durations and reports the per-simulated-second cost ratio.
SpeedupReport benchmark_speedup(const FomConfig& config, const RomModel& model,
                                const Eigen::VectorXd& a0, double fom_sim_seconds,
                                double rom_sim_seconds, double rom_dt, double output_interval);

}  // namespace flowrom
