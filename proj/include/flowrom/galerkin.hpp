#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "flowrom/ensemble.hpp"
#include "flowrom/operators.hpp"
#include "flowrom/pod.hpp"

namespace flowrom {

/// The three turbulent-viscosity treatments: a space-time averaged scalar,
/// a temporally averaged field, and the averaged field plus the leading POD
/// mode of the viscosity fluctuations scaled online by a1(t).
enum class ViscosityVariant {
    SpatioTemporalMean = 1,
    TemporalMean = 2,
    TemporalMeanPlusMode1 = 3,
};

ViscosityVariant viscosity_variant_from_int(int v);

struct ViscosityModel {
    ViscosityVariant variant = ViscosityVariant::SpatioTemporalMean;
    double nu_m = 0.0;
    double nu_bar = 0.0;  // volume/time average of nu_t
    Field nu_t_mean;      // temporal mean field
    Field nu_t_mode1;     // leading fluctuation mode (zero field if none)
    double lambda1 = 0.0;
    std::vector<double> a1_times;
    Eigen::VectorXd a1_values;

    /// Static contribution entering the offline projection: a constant
    /// viscosity plus an optional field.
    double static_nu_const() const {
        return variant == ViscosityVariant::SpatioTemporalMean ? nu_m + nu_bar : nu_m;
    }
    const Field* static_nu_field() const {
        return variant == ViscosityVariant::SpatioTemporalMean ? nullptr : &nu_t_mean;
    }
    bool has_mode1() const { return variant == ViscosityVariant::TemporalMeanPlusMode1; }
};

/// Builds the requested viscosity model from the nu_t ensemble. The
/// pointwise positivity of nu_m + model over the training window is checked
/// here. Identically-constant nu_t yields a variant-3 model whose
/// fluctuation term is exactly zero.
ViscosityModel build_viscosity_model(const SnapshotEnsemble& ensemble, ViscosityVariant variant,
                                     double nu_m);

/// Offline projection tensors for the coefficient ODE system
///   da/dt = c + (L + a1(t) L_nu1) a + Q(a,a) + P a_p + a1(t) c_nu1
/// with the pressure coefficients supplied by A_p a_p = c_p + L_p a + Q_p(a,a).
struct GalerkinOperators {
    std::string case_hash;
    int velocity_rank = 0;
    int pressure_rank = 0;
    int dims = 1;
    ViscosityVariant variant = ViscosityVariant::SpatioTemporalMean;
    double nu_m = 0.0;
    double nu_bar = 0.0;

    Eigen::VectorXd c;
    Eigen::MatrixXd L;
    std::vector<Eigen::MatrixXd> Q;  // Q[i](j, k)
    Eigen::MatrixXd P;               // velocity_rank x pressure_rank
    Eigen::VectorXd c_nu1;           // variant 3 only (otherwise empty)
    Eigen::MatrixXd L_nu1;

    Eigen::MatrixXd A_p;
    Eigen::VectorXd c_p;
    Eigen::MatrixXd L_p;               // pressure_rank x velocity_rank
    std::vector<Eigen::MatrixXd> Q_p;  // Q_p[l](j, k)

    // a1(t) knots for the online spline (variant 3; empty otherwise)
    std::vector<double> a1_times;
    Eigen::VectorXd a1_values;

    std::shared_ptr<const Eigen::PartialPivLU<Eigen::MatrixXd>> a_p_lu;

    bool has_pressure() const { return pressure_rank > 0; }
    bool has_mode1() const { return variant == ViscosityVariant::TemporalMeanPlusMode1; }

    /// Factors A_p and validates invertibility (smallest singular value
    /// above 1e-12 of the largest). Called after building or loading.
    void finalize();
};

/// Momentum-equation tensors c, L, Q, P (and the variant-3 extras) by
/// Galerkin projection of the discrete operators onto the velocity modes.
GalerkinOperators build_momentum_operators(const PodBasis& velocity_basis,
                                           const PodBasis* pressure_basis,
                                           const ViscosityModel& viscosity,
                                           const std::map<std::string, BoundaryConditions>& bcs,
                                           ConvectionScheme scheme);

/// Pressure-equation tensors A_p, c_p, L_p, Q_p from the projected
/// pressure-Poisson equation lap(p) = -div((u . grad) u).
void build_pressure_operators(GalerkinOperators& ops, const PodBasis& velocity_basis,
                              const PodBasis& pressure_basis,
                              const std::map<std::string, BoundaryConditions>& bcs,
                              ConvectionScheme scheme);

/// a_p solving A_p a_p = c_p + L_p a_u + Q_p(a_u, a_u).
Eigen::VectorXd solve_pressure_coefficients(const GalerkinOperators& ops,
                                            const Eigen::VectorXd& a_u);

/// Tensor evaluation of the projected momentum right-hand side. a1vt is the
/// online viscosity-mode coefficient (ignored unless variant 3).
Eigen::VectorXd eval_rhs(const GalerkinOperators& ops, const Eigen::VectorXd& a_u,
                         const Eigen::VectorXd& a_p, double a1vt = 0.0);

/// Direct grid-space oracle: reconstructs the fields for the given
/// coefficients, applies the discrete PDE operators and projects onto the
/// velocity modes. Independent of the tensor path; eval_rhs must match it.
Eigen::VectorXd direct_momentum_rhs(const PodBasis& velocity_basis,
                                    const PodBasis* pressure_basis,
                                    const ViscosityModel& viscosity,
                                    const std::map<std::string, BoundaryConditions>& bcs,
                                    ConvectionScheme scheme, const Eigen::VectorXd& a_u,
                                    const Eigen::VectorXd& a_p, double a1vt = 0.0);

/// Direct-projection counterpart of the pressure equation right-hand side
/// (c_p + L_p a + Q_p(a,a)).
Eigen::VectorXd direct_pressure_rhs(const PodBasis& velocity_basis,
                                    const PodBasis& pressure_basis,
                                    const std::map<std::string, BoundaryConditions>& bcs,
                                    ConvectionScheme scheme, const Eigen::VectorXd& a_u);

}  // namespace flowrom
