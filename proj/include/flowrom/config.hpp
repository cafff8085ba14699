#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "flowrom/grid.hpp"
#include "flowrom/operators.hpp"

#include <json.hpp>

namespace flowrom {

enum class CaseKind { Burgers1d, Ns2dObstacle, Ns2dPeriodic };

CaseKind case_kind_from_string(const std::string& s);
std::string to_string(CaseKind kind);

struct GridSpec {
    int nx = 1, ny = 1;
    double dx = 1.0, dy = 1.0;
    bool periodic_x = false, periodic_y = false;
    ObstacleSpec obstacle;
};

struct SineComponent {
    double amplitude = 0.0;
    int wavenumber = 1;
    double phase = 0.0;
};

struct InitialConditionSpec {
    std::string type = "uniform";  // uniform | sine_sum | taylor_green | uniform_perturbed
    double mean = 0.0;
    std::vector<SineComponent> components;  // sine_sum
    double amplitude = 0.0;                 // taylor_green / uniform_perturbed
};

struct PoissonSettings {
    double tol = 1e-8;          // relative residual
    double div_tol = 1e-8;      // absolute bound on max|div| after correction
    int max_iters = 10000;
};

/// Full-order solver configuration (one bundled case).
struct FomConfig {
    CaseKind kind = CaseKind::Burgers1d;
    GridSpec grid;
    FluidConstants fluid;
    double u_in = 0.0;              // inflow velocity [m/s]
    double smagorinsky_cs = 0.17;
    double dt = 0.0;                // solver step [s]
    double snapshot_interval = 0.0; // delta t_E [s]
    double horizon = 0.0;           // T_E [s]
    double spin_up = 0.0;           // discarded interval [s]
    std::uint64_t seed = 0;
    InitialConditionSpec ic;
    ConvectionScheme convection = ConvectionScheme::SkewCentral;
    PoissonSettings poisson;

    void validate() const;
};

GridPtr make_grid(const GridSpec& spec);

std::vector<std::string> case_variables(CaseKind kind);
std::vector<std::string> case_velocity_components(CaseKind kind);

/// Boundary conditions per variable for the bundled case kinds. For the
/// obstacle case: fixed inflow at west, zero-gradient outflow at east with
/// p = 0, slip walls at south/north (normal velocity fixed at zero,
/// tangential zero-gradient), no-slip body.
std::map<std::string, BoundaryConditions> case_boundary_conditions(const FomConfig& config);

FomConfig fom_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FomConfig& config);
FomConfig load_fom_config(const std::string& path);

}  // namespace flowrom
