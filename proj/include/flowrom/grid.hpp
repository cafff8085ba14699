#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "flowrom/errors.hpp"

namespace flowrom {

/// Boundary labels of a rectangular domain plus the surface of any masked
/// solid body. West/east are the x-min/x-max sides, south/north y-min/y-max.
enum class BoundaryLabel { West, East, South, North, Body };

std::string to_string(BoundaryLabel label);
BoundaryLabel boundary_label_from_string(const std::string& s);

enum class BcKind { FixedValue, ZeroGradient };

struct BcSpec {
    BcKind kind = BcKind::ZeroGradient;
    double value = 0.0;
};

/// Per-label boundary conditions for one variable. Periodic directions are a
/// grid property, not a per-variable one, so they never appear here.
class BoundaryConditions {
public:
    BoundaryConditions() = default;

    void set(BoundaryLabel label, BcSpec spec) { specs_[label] = spec; }

    const BcSpec& at(BoundaryLabel label) const {
        auto it = specs_.find(label);
        if (it == specs_.end()) {
            throw ConfigError("no boundary condition for label '" + to_string(label) + "'");
        }
        return it->second;
    }

    bool has(BoundaryLabel label) const { return specs_.count(label) != 0; }

    const std::map<BoundaryLabel, BcSpec>& all() const { return specs_; }

    /// Same conditions with all fixed values replaced by zero. POD modes are
    /// fluctuation fields, so they satisfy the homogeneous problem.
    BoundaryConditions homogeneous() const {
        BoundaryConditions out;
        for (const auto& [label, spec] : specs_) {
            out.set(label, BcSpec{spec.kind, 0.0});
        }
        return out;
    }

private:
    std::map<BoundaryLabel, BcSpec> specs_;
};

/// One face of the boundary between a fluid cell and the outside of the
/// fluid region (domain edge or solid body). The area vector points out of
/// the fluid; its magnitude is the face length times a unit depth.
struct BoundaryFace {
    std::array<double, 2> area{0.0, 0.0};  // s_f [m^2 per unit depth]
    int fluid_cell = -1;
    BoundaryLabel label = BoundaryLabel::Body;
    int axis = 0;       // 0 = x-face, 1 = y-face
    int direction = 0;  // +1 if the outside lies toward +axis, else -1
};

/// Axis-aligned block of solid cells (the bundled obstacle geometry).
struct ObstacleSpec {
    int i0 = 0, j0 = 0, ni = 0, nj = 0;
    bool empty() const { return ni == 0 || nj == 0; }
};

/// Uniform structured grid with cell-centered unknowns. Solid cells are
/// masked out; only fluid cells carry values. ny == 1 gives a 1D grid.
class StructuredGrid {
public:
    StructuredGrid(int nx, int ny, double dx, double dy, bool periodic_x, bool periodic_y,
                   const ObstacleSpec& obstacle = {});

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    bool periodic_x() const { return periodic_x_; }
    bool periodic_y() const { return periodic_y_; }
    int dims() const { return ny_ == 1 ? 1 : 2; }
    const ObstacleSpec& obstacle() const { return obstacle_; }

    int num_cells() const { return nx_ * ny_; }
    int num_fluid_cells() const { return static_cast<int>(fluid_to_cell_.size()); }

    bool is_fluid(int ix, int iy) const { return fluid_index_[cell_index(ix, iy)] >= 0; }
    int cell_index(int ix, int iy) const { return iy * nx_ + ix; }
    int fluid_index(int ix, int iy) const { return fluid_index_[cell_index(ix, iy)]; }
    int fluid_cell(int f) const { return fluid_to_cell_[f]; }
    int fluid_ix(int f) const { return fluid_to_cell_[f] % nx_; }
    int fluid_iy(int f) const { return fluid_to_cell_[f] / nx_; }

    double cell_volume(int f) const { return cell_volumes_[f]; }
    const Eigen::VectorXd& cell_volumes() const { return cell_volumes_; }
    double total_fluid_volume() const { return cell_volumes_.sum(); }

    /// Cell-center coordinates of fluid cell f.
    double x_center(int f) const { return (fluid_ix(f) + 0.5) * dx_; }
    double y_center(int f) const { return (fluid_iy(f) + 0.5) * dy_; }

    const std::vector<BoundaryFace>& boundary_faces() const { return boundary_faces_; }

    /// Faces carrying the given label (e.g. the closed body surface).
    std::vector<BoundaryFace> faces_with_label(BoundaryLabel label) const;

    bool operator==(const StructuredGrid& other) const;

private:
    void build_mask(const ObstacleSpec& obstacle);
    void build_boundary_faces();

    int nx_, ny_;
    double dx_, dy_;
    bool periodic_x_, periodic_y_;
    ObstacleSpec obstacle_;
    std::vector<int> fluid_index_;    // per cell, -1 for solid
    std::vector<int> fluid_to_cell_;  // fluid ordinal -> cell index
    Eigen::VectorXd cell_volumes_;    // per fluid cell [m^3 per unit depth]
    std::vector<BoundaryFace> boundary_faces_;
};

using GridPtr = std::shared_ptr<const StructuredGrid>;

/// Scalar field over the fluid cells of a grid.
struct Field {
    Field() = default;
    Field(std::string variable_, GridPtr grid_)
        : variable(std::move(variable_)),
          grid(std::move(grid_)),
          values(Eigen::VectorXd::Zero(grid->num_fluid_cells())) {}
    Field(std::string variable_, GridPtr grid_, Eigen::VectorXd values_)
        : variable(std::move(variable_)), grid(std::move(grid_)), values(std::move(values_)) {
        if (values.size() != grid->num_fluid_cells()) {
            throw DimensionError("field '" + variable + "' has " + std::to_string(values.size()) +
                                 " values for " + std::to_string(grid->num_fluid_cells()) +
                                 " fluid cells");
        }
    }

    std::string variable;
    GridPtr grid;
    Eigen::VectorXd values;

    double& operator[](int f) { return values[f]; }
    double operator[](int f) const { return values[f]; }
    int size() const { return static_cast<int>(values.size()); }
};

/// Velocity as one Field per component (1 in 1D, 2 in 2D).
using VectorField = std::vector<Field>;

struct FluidConstants {
    double rho = 1.0;    // [kg/m^3]
    double nu_m = 1e-4;  // molecular kinematic viscosity [m^2/s]
};

void validate(const FluidConstants& fluid);

}  // namespace flowrom
