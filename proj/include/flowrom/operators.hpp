#pragma once

#include "flowrom/grid.hpp"

namespace flowrom {

/// Volume-weighted inner product over fluid cells: sum_c V_c f_c g_c.
double inner_product(const Field& f, const Field& g);

/// Inner product of vector fields (component-wise sum).
double inner_product(const VectorField& f, const VectorField& g);

/// Compact second-order Laplacian (3-point in 1D, 5-point in 2D) built from
/// face gradients with ghost-cell boundary handling. On periodic grids it is
/// exactly divergence(gradient(f)).
Field laplacian(const Field& f, const BoundaryConditions& bc);

/// Conservative variable-viscosity diffusion d/dx_a (nu_face * df/dx_a) with
/// nu_face = nu_const + arithmetic face mean of nu_t (nu_t may be null).
/// Linear in (nu_const, nu_t) for fixed f, which the Galerkin viscosity
/// splitting relies on.
Field diffusion(const Field& f, const BoundaryConditions& bc, double nu_const,
                const Field* nu_t);

/// Face-forward gradient: component a of the result at cell c is the
/// gradient across the cell's high-side a-face. Dual to divergence(), so the
/// pressure-projection update u -= dt * gradient(phi) cancels divergence
/// exactly (up to the Poisson solve residual).
VectorField gradient(const Field& f, const BoundaryConditions& bc);

/// Face-based divergence: each axis differences the two face samples of the
/// normal component (interior faces take the low-side cell value, boundary
/// faces the boundary condition value).
Field divergence(const VectorField& vel, const std::vector<BoundaryConditions>& bcs);

enum class ConvectionScheme { SkewCentral, Upwind };

ConvectionScheme convection_scheme_from_string(const std::string& s);
std::string to_string(ConvectionScheme scheme);

/// (vel . grad) f. SkewCentral is the energy-neutral split form
/// 0.5 * [vel . grad_central f + div_central(vel f)]; on periodic grids
/// (convection(vel,f), f) vanishes identically. Upwind is first-order.
Field convection(const VectorField& vel, const std::vector<BoundaryConditions>& vel_bcs,
                 const Field& f, const BoundaryConditions& f_bc, ConvectionScheme scheme);

/// Central cell-centered derivative along one axis (used for strain rates
/// and face-tangential gradients, not for the projection pair).
Field central_derivative(const Field& f, const BoundaryConditions& bc, int axis);

namespace detail {

/// Reflected ghost-cell value of the neighbor of fluid cell f along
/// (axis, dir): FixedValue v -> 2v - f_c, ZeroGradient -> f_c, periodic
/// wraps, solid neighbors use the Body condition.
double reflected_neighbor(const StructuredGrid& grid, const Eigen::VectorXd& values,
                          const BoundaryConditions& bc, int f, int axis, int dir);

/// Gradient across the (axis, dir) face of fluid cell f.
double face_gradient(const StructuredGrid& grid, const Eigen::VectorXd& values,
                     const BoundaryConditions& bc, int f, int axis, int dir);

}  // namespace detail

}  // namespace flowrom
