#include "flowrom/operators.hpp"

#include <cmath>

namespace flowrom {

namespace {

void check_same_grid(const Field& f, const Field& g) {
    if (!f.grid || !g.grid) throw DimensionError("field without grid");
    if (f.grid != g.grid && !(*f.grid == *g.grid)) {
        throw DimensionError("fields '" + f.variable + "' and '" + g.variable +
                             "' live on different grids");
    }
    if (f.size() != g.size()) {
        throw DimensionError("fluid-cell count mismatch: " + std::to_string(f.size()) + " vs " +
                             std::to_string(g.size()));
    }
}

// Classification of the neighbor of a fluid cell along (axis, dir).
struct Neighbor {
    bool fluid = false;
    int index = -1;             // fluid index when fluid
    BoundaryLabel label{};      // boundary label otherwise
};

Neighbor neighbor_of(const StructuredGrid& grid, int f, int axis, int dir) {
    int ix = grid.fluid_ix(f), iy = grid.fluid_iy(f);
    int jx = ix + (axis == 0 ? dir : 0);
    int jy = iy + (axis == 1 ? dir : 0);
    Neighbor nb;
    if (axis == 0) {
        if (grid.periodic_x()) {
            jx = (jx + grid.nx()) % grid.nx();
        } else if (jx < 0) {
            nb.label = BoundaryLabel::West;
            return nb;
        } else if (jx >= grid.nx()) {
            nb.label = BoundaryLabel::East;
            return nb;
        }
    } else {
        if (grid.periodic_y()) {
            jy = (jy + grid.ny()) % grid.ny();
        } else if (jy < 0) {
            nb.label = BoundaryLabel::South;
            return nb;
        } else if (jy >= grid.ny()) {
            nb.label = BoundaryLabel::North;
            return nb;
        }
    }
    int fi = grid.fluid_index(jx, jy);
    if (fi < 0) {
        nb.label = BoundaryLabel::Body;
        return nb;
    }
    nb.fluid = true;
    nb.index = fi;
    return nb;
}

double spacing(const StructuredGrid& grid, int axis) { return axis == 0 ? grid.dx() : grid.dy(); }

// Face sample of a velocity component for the divergence stencil: interior
// faces take the low-side cell value, boundary faces the condition value.
double face_value(const StructuredGrid& grid, const Eigen::VectorXd& values,
                  const BoundaryConditions& bc, int f, int axis, int dir) {
    Neighbor nb = neighbor_of(grid, f, axis, dir);
    if (nb.fluid) return dir > 0 ? values[f] : values[nb.index];
    const BcSpec& spec = bc.at(nb.label);
    return spec.kind == BcKind::FixedValue ? spec.value : values[f];
}

}  // namespace

namespace detail {

double reflected_neighbor(const StructuredGrid& grid, const Eigen::VectorXd& values,
                          const BoundaryConditions& bc, int f, int axis, int dir) {
    Neighbor nb = neighbor_of(grid, f, axis, dir);
    if (nb.fluid) return values[nb.index];
    const BcSpec& spec = bc.at(nb.label);
    return spec.kind == BcKind::FixedValue ? 2.0 * spec.value - values[f] : values[f];
}

double face_gradient(const StructuredGrid& grid, const Eigen::VectorXd& values,
                     const BoundaryConditions& bc, int f, int axis, int dir) {
    double h = spacing(grid, axis);
    Neighbor nb = neighbor_of(grid, f, axis, dir);
    if (nb.fluid) return dir * (values[nb.index] - values[f]) / h;
    const BcSpec& spec = bc.at(nb.label);
    if (spec.kind == BcKind::FixedValue) return dir * 2.0 * (spec.value - values[f]) / h;
    return 0.0;
}

}  // namespace detail

double inner_product(const Field& f, const Field& g) {
    check_same_grid(f, g);
    return f.grid->cell_volumes().cwiseProduct(f.values).dot(g.values);
}

double inner_product(const VectorField& f, const VectorField& g) {
    if (f.size() != g.size()) throw DimensionError("vector fields with different component counts");
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) sum += inner_product(f[k], g[k]);
    return sum;
}

Field laplacian(const Field& f, const BoundaryConditions& bc) {
    const StructuredGrid& grid = *f.grid;
    Field out(f.variable, f.grid);
    for (int c = 0; c < grid.num_fluid_cells(); ++c) {
        double acc = 0.0;
        for (int a = 0; a < grid.dims(); ++a) {
            double h = spacing(grid, a);
            double g_hi = detail::face_gradient(grid, f.values, bc, c, a, +1);
            double g_lo = detail::face_gradient(grid, f.values, bc, c, a, -1);
            acc += (g_hi - g_lo) / h;
        }
        out[c] = acc;
    }
    return out;
}

Field diffusion(const Field& f, const BoundaryConditions& bc, double nu_const,
                const Field* nu_t) {
    const StructuredGrid& grid = *f.grid;
    if (nu_t) check_same_grid(f, *nu_t);
    Field out(f.variable, f.grid);
    for (int c = 0; c < grid.num_fluid_cells(); ++c) {
        double acc = 0.0;
        for (int a = 0; a < grid.dims(); ++a) {
            double h = spacing(grid, a);
            double nu_hi = nu_const, nu_lo = nu_const;
            if (nu_t) {
                Neighbor hi = neighbor_of(grid, c, a, +1);
                Neighbor lo = neighbor_of(grid, c, a, -1);
                // zero-gradient face extrapolation for the viscosity field
                nu_hi += hi.fluid ? 0.5 * (nu_t->values[c] + nu_t->values[hi.index])
                                  : nu_t->values[c];
                nu_lo += lo.fluid ? 0.5 * (nu_t->values[c] + nu_t->values[lo.index])
                                  : nu_t->values[c];
            }
            double g_hi = detail::face_gradient(grid, f.values, bc, c, a, +1);
            double g_lo = detail::face_gradient(grid, f.values, bc, c, a, -1);
            acc += (nu_hi * g_hi - nu_lo * g_lo) / h;
        }
        out[c] = acc;
    }
    return out;
}

VectorField gradient(const Field& f, const BoundaryConditions& bc) {
    const StructuredGrid& grid = *f.grid;
    VectorField out;
    for (int a = 0; a < grid.dims(); ++a) {
        Field comp("grad_" + f.variable + (a == 0 ? "_x" : "_y"), f.grid);
        for (int c = 0; c < grid.num_fluid_cells(); ++c) {
            comp[c] = detail::face_gradient(grid, f.values, bc, c, a, +1);
        }
        out.push_back(std::move(comp));
    }
    return out;
}

Field divergence(const VectorField& vel, const std::vector<BoundaryConditions>& bcs) {
    if (vel.empty()) throw DimensionError("divergence of empty vector field");
    const StructuredGrid& grid = *vel[0].grid;
    if (static_cast<int>(vel.size()) != grid.dims() || bcs.size() != vel.size()) {
        throw DimensionError("divergence needs one component and one bc set per grid dimension");
    }
    Field out("div", vel[0].grid);
    for (int a = 0; a < grid.dims(); ++a) {
        check_same_grid(vel[0], vel[a]);
        double h = spacing(grid, a);
        for (int c = 0; c < grid.num_fluid_cells(); ++c) {
            double w_hi = face_value(grid, vel[a].values, bcs[a], c, a, +1);
            double w_lo = face_value(grid, vel[a].values, bcs[a], c, a, -1);
            out[c] += (w_hi - w_lo) / h;
        }
    }
    return out;
}

ConvectionScheme convection_scheme_from_string(const std::string& s) {
    if (s == "skew_central") return ConvectionScheme::SkewCentral;
    if (s == "upwind") return ConvectionScheme::Upwind;
    throw ConfigError("unknown convection scheme '" + s + "'");
}

std::string to_string(ConvectionScheme scheme) {
    return scheme == ConvectionScheme::SkewCentral ? "skew_central" : "upwind";
}

Field convection(const VectorField& vel, const std::vector<BoundaryConditions>& vel_bcs,
                 const Field& f, const BoundaryConditions& f_bc, ConvectionScheme scheme) {
    if (vel.empty()) throw DimensionError("convection with empty velocity");
    const StructuredGrid& grid = *f.grid;
    if (static_cast<int>(vel.size()) != grid.dims() || vel_bcs.size() != vel.size()) {
        throw DimensionError("convection needs one velocity component per grid dimension");
    }
    for (const auto& comp : vel) check_same_grid(comp, f);

    Field out("conv_" + f.variable, f.grid);
    for (int a = 0; a < grid.dims(); ++a) {
        double h = spacing(grid, a);
        const Eigen::VectorXd& ua = vel[a].values;
        for (int c = 0; c < grid.num_fluid_cells(); ++c) {
            double f_hi = detail::reflected_neighbor(grid, f.values, f_bc, c, a, +1);
            double f_lo = detail::reflected_neighbor(grid, f.values, f_bc, c, a, -1);
            if (scheme == ConvectionScheme::SkewCentral) {
                double u_hi = detail::reflected_neighbor(grid, ua, vel_bcs[a], c, a, +1);
                double u_lo = detail::reflected_neighbor(grid, ua, vel_bcs[a], c, a, -1);
                double advective = ua[c] * (f_hi - f_lo) / (2.0 * h);
                double flux = (u_hi * f_hi - u_lo * f_lo) / (2.0 * h);
                out[c] += 0.5 * (advective + flux);
            } else {
                out[c] += ua[c] >= 0.0 ? ua[c] * (f.values[c] - f_lo) / h
                                       : ua[c] * (f_hi - f.values[c]) / h;
            }
        }
    }
    return out;
}

Field central_derivative(const Field& f, const BoundaryConditions& bc, int axis) {
    const StructuredGrid& grid = *f.grid;
    if (axis < 0 || axis >= grid.dims()) throw DimensionError("derivative axis out of range");
    double h = spacing(grid, axis);
    Field out("d_" + f.variable, f.grid);
    for (int c = 0; c < grid.num_fluid_cells(); ++c) {
        double hi = detail::reflected_neighbor(grid, f.values, bc, c, axis, +1);
        double lo = detail::reflected_neighbor(grid, f.values, bc, c, axis, -1);
        out[c] = (hi - lo) / (2.0 * h);
    }
    return out;
}

}  // namespace flowrom
