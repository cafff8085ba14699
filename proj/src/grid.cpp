#include "flowrom/grid.hpp"

#include <cmath>

namespace flowrom {

std::string to_string(BoundaryLabel label) {
    switch (label) {
        case BoundaryLabel::West: return "west";
        case BoundaryLabel::East: return "east";
        case BoundaryLabel::South: return "south";
        case BoundaryLabel::North: return "north";
        case BoundaryLabel::Body: return "body";
    }
    return "?";
}

BoundaryLabel boundary_label_from_string(const std::string& s) {
    if (s == "west") return BoundaryLabel::West;
    if (s == "east") return BoundaryLabel::East;
    if (s == "south") return BoundaryLabel::South;
    if (s == "north") return BoundaryLabel::North;
    if (s == "body") return BoundaryLabel::Body;
    throw ConfigError("unknown boundary label '" + s + "'");
}

StructuredGrid::StructuredGrid(int nx, int ny, double dx, double dy, bool periodic_x,
                               bool periodic_y, const ObstacleSpec& obstacle)
    : nx_(nx), ny_(ny), dx_(dx), dy_(dy), periodic_x_(periodic_x), periodic_y_(periodic_y),
      obstacle_(obstacle) {
    if (nx < 1 || ny < 1) throw ConfigError("grid must have at least one cell per direction");
    if (!(dx > 0.0) || !(dy > 0.0)) throw ConfigError("cell sizes must be strictly positive");
    build_mask(obstacle);
    build_boundary_faces();
}

void StructuredGrid::build_mask(const ObstacleSpec& obstacle) {
    fluid_index_.assign(num_cells(), -1);
    fluid_to_cell_.clear();
    for (int iy = 0; iy < ny_; ++iy) {
        for (int ix = 0; ix < nx_; ++ix) {
            bool solid = !obstacle.empty() && ix >= obstacle.i0 && ix < obstacle.i0 + obstacle.ni &&
                         iy >= obstacle.j0 && iy < obstacle.j0 + obstacle.nj;
            if (!solid) {
                fluid_index_[cell_index(ix, iy)] = static_cast<int>(fluid_to_cell_.size());
                fluid_to_cell_.push_back(cell_index(ix, iy));
            }
        }
    }
    if (fluid_to_cell_.empty()) throw ConfigError("grid has no fluid cells");
    cell_volumes_ = Eigen::VectorXd::Constant(num_fluid_cells(), dx_ * dy_);
}

void StructuredGrid::build_boundary_faces() {
    boundary_faces_.clear();
    auto add_face = [&](int f, BoundaryLabel label, int axis, int dir) {
        BoundaryFace face;
        face.fluid_cell = f;
        face.label = label;
        face.axis = axis;
        face.direction = dir;
        face.area[axis] = dir * (axis == 0 ? dy_ : dx_);
        boundary_faces_.push_back(face);
    };
    for (int f = 0; f < num_fluid_cells(); ++f) {
        int ix = fluid_ix(f), iy = fluid_iy(f);
        // domain edges (absent along periodic directions)
        if (!periodic_x_) {
            if (ix == 0) add_face(f, BoundaryLabel::West, 0, -1);
            if (ix == nx_ - 1) add_face(f, BoundaryLabel::East, 0, +1);
        }
        if (!periodic_y_ && ny_ > 1) {
            if (iy == 0) add_face(f, BoundaryLabel::South, 1, -1);
            if (iy == ny_ - 1) add_face(f, BoundaryLabel::North, 1, +1);
        }
        // faces shared with solid neighbors
        auto solid_neighbor = [&](int sx, int sy) {
            int jx = ix + sx, jy = iy + sy;
            if (periodic_x_) jx = (jx + nx_) % nx_;
            if (periodic_y_) jy = (jy + ny_) % ny_;
            if (jx < 0 || jx >= nx_ || jy < 0 || jy >= ny_) return false;
            return !(fluid_index_[cell_index(jx, jy)] >= 0);
        };
        if (solid_neighbor(-1, 0)) add_face(f, BoundaryLabel::Body, 0, -1);
        if (solid_neighbor(+1, 0)) add_face(f, BoundaryLabel::Body, 0, +1);
        if (ny_ > 1) {
            if (solid_neighbor(0, -1)) add_face(f, BoundaryLabel::Body, 1, -1);
            if (solid_neighbor(0, +1)) add_face(f, BoundaryLabel::Body, 1, +1);
        }
    }
}

std::vector<BoundaryFace> StructuredGrid::faces_with_label(BoundaryLabel label) const {
    std::vector<BoundaryFace> out;
    for (const auto& face : boundary_faces_) {
        if (face.label == label) out.push_back(face);
    }
    return out;
}

bool StructuredGrid::operator==(const StructuredGrid& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_ && dx_ == other.dx_ && dy_ == other.dy_ &&
           periodic_x_ == other.periodic_x_ && periodic_y_ == other.periodic_y_ &&
           fluid_index_ == other.fluid_index_;
}

void validate(const FluidConstants& fluid) {
    if (!(fluid.rho > 0.0)) throw ConfigError("density must be positive");
    if (!(fluid.nu_m > 0.0)) throw ConfigError("molecular viscosity must be positive");
}

}  // namespace flowrom
