#include "flowrom/galerkin.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace flowrom {

ViscosityVariant viscosity_variant_from_int(int v) {
    switch (v) {
        case 1: return ViscosityVariant::SpatioTemporalMean;
        case 2: return ViscosityVariant::TemporalMean;
        case 3: return ViscosityVariant::TemporalMeanPlusMode1;
    }
    throw ConfigError("viscosity variant must be 1, 2 or 3");
}

ViscosityModel build_viscosity_model(const SnapshotEnsemble& ensemble, ViscosityVariant variant,
                                     double nu_m) {
    ViscosityModel model;
    model.variant = variant;
    model.nu_m = nu_m;
    model.nu_t_mean = compute_mean(ensemble, "nu_t");

    const Eigen::VectorXd& volumes = ensemble.grid->cell_volumes();
    double total_volume = volumes.sum();
    model.nu_bar = volumes.dot(model.nu_t_mean.values) / total_volume;

    model.nu_t_mode1 = Field("nu_t_mode1", ensemble.grid);
    if (variant == ViscosityVariant::TemporalMeanPlusMode1) {
        PodBasis basis = pod_modes(ensemble, "nu_t", 1);
        model.lambda1 = basis.eigenvalues.size() ? basis.eigenvalues[0] : 0.0;
        model.a1_times = ensemble.times;
        if (basis.rank >= 1) {
            model.nu_t_mode1.values = basis.modes.col(0);
            ModalTrajectory traj = project_trajectory(basis, ensemble);
            model.a1_values = traj.coefficients.row(0);
        } else {
            // constant-in-time nu_t: the fluctuation term is exactly zero
            model.a1_values = Eigen::VectorXd::Zero(ensemble.num_snapshots());
        }
    }

    // nu_m + model evaluation must stay non-negative over the training window
    double min_static = nu_m;
    if (variant != ViscosityVariant::SpatioTemporalMean) {
        min_static = (nu_m + model.nu_t_mean.values.array()).minCoeff();
    } else {
        min_static = nu_m + model.nu_bar;
    }
    if (variant == ViscosityVariant::TemporalMeanPlusMode1 && model.a1_values.size()) {
        for (int j = 0; j < model.a1_values.size(); ++j) {
            double m = (nu_m + model.nu_t_mean.values.array() +
                        model.a1_values[j] * model.nu_t_mode1.values.array())
                           .minCoeff();
            min_static = std::min(min_static, m);
        }
    }
    if (min_static < 0.0) {
        throw DegeneracyError("effective viscosity becomes negative (min " +
                              std::to_string(min_static) + ") for the requested variant");
    }
    return model;
}

namespace {

struct ModeSet {
    VectorField mean;                    // mean field components
    std::vector<VectorField> modes;      // one VectorField per mode
    std::vector<BoundaryConditions> bc;  // inhomogeneous (mean) conditions
    std::vector<BoundaryConditions> bc_hom;
};

ModeSet velocity_mode_set(const PodBasis& basis,
                          const std::map<std::string, BoundaryConditions>& bcs) {
    ModeSet set;
    set.mean = unstack(basis, basis.mean);
    for (int i = 0; i < basis.rank; ++i) {
        set.modes.push_back(unstack(basis, basis.modes.col(i)));
    }
    for (const auto& label : basis.component_labels) {
        auto it = bcs.find(label);
        if (it == bcs.end()) throw ConfigError("missing boundary spec for '" + label + "'");
        set.bc.push_back(it->second);
        set.bc_hom.push_back(it->second.homogeneous());
    }
    return set;
}

VectorField convect(const VectorField& adv, const std::vector<BoundaryConditions>& adv_bc,
                    const VectorField& field, const std::vector<BoundaryConditions>& field_bc,
                    ConvectionScheme scheme) {
    VectorField out;
    for (std::size_t k = 0; k < field.size(); ++k) {
        out.push_back(convection(adv, adv_bc, field[k], field_bc[k], scheme));
    }
    return out;
}

VectorField diffuse(const VectorField& field, const std::vector<BoundaryConditions>& field_bc,
                    double nu_const, const Field* nu_field) {
    VectorField out;
    for (std::size_t k = 0; k < field.size(); ++k) {
        out.push_back(diffusion(field[k], field_bc[k], nu_const, nu_field));
    }
    return out;
}

Eigen::VectorXd stack(const VectorField& field) {
    int n = field[0].size();
    Eigen::VectorXd out(static_cast<int>(field.size()) * n);
    for (std::size_t k = 0; k < field.size(); ++k) {
        out.segment(static_cast<int>(k) * n, n) = field[k].values;
    }
    return out;
}

// projection of a stacked vector field onto all basis modes
Eigen::VectorXd project_all(const PodBasis& basis, const Eigen::VectorXd& w,
                            const Eigen::VectorXd& stacked) {
    return basis.modes.transpose() * w.cwiseProduct(stacked);
}

VectorField axpy(double alpha, const VectorField& x, const VectorField& y) {
    VectorField out = y;
    for (std::size_t k = 0; k < out.size(); ++k) out[k].values += alpha * x[k].values;
    return out;
}

BoundaryConditions all_zero_gradient() {
    BoundaryConditions bc;
    for (auto label : {BoundaryLabel::West, BoundaryLabel::East, BoundaryLabel::South,
                       BoundaryLabel::North, BoundaryLabel::Body}) {
        bc.set(label, {BcKind::ZeroGradient, 0.0});
    }
    return bc;
}

}  // namespace

void GalerkinOperators::finalize() {
    if (!has_pressure()) {
        a_p_lu.reset();
        return;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A_p);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > 1e-12 * smax)) {
        throw SolverError("projected pressure operator is singular (sigma_min/sigma_max = " +
                          std::to_string(smin / smax) + ")");
    }
    a_p_lu = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(A_p);
}

GalerkinOperators build_momentum_operators(const PodBasis& velocity_basis,
                                           const PodBasis* pressure_basis,
                                           const ViscosityModel& viscosity,
                                           const std::map<std::string, BoundaryConditions>& bcs,
                                           ConvectionScheme scheme) {
    GalerkinOperators ops;
    ops.case_hash = velocity_basis.case_hash;
    ops.velocity_rank = velocity_basis.rank;
    ops.pressure_rank = pressure_basis ? pressure_basis->rank : 0;
    ops.dims = velocity_basis.num_components();
    ops.variant = viscosity.variant;
    ops.nu_m = viscosity.nu_m;
    ops.nu_bar = viscosity.nu_bar;
    ops.a1_times = viscosity.a1_times;
    ops.a1_values = viscosity.a1_values;

    const int r = velocity_basis.rank;
    ModeSet vel = velocity_mode_set(velocity_basis, bcs);
    Eigen::VectorXd w = velocity_basis.weights();

    double nu_const = viscosity.static_nu_const();
    const Field* nu_field = viscosity.static_nu_field();

    // constant term: mean convection, mean diffusion, mean pressure gradient
    VectorField rhs_mean = diffuse(vel.mean, vel.bc, nu_const, nu_field);
    rhs_mean = axpy(-1.0, convect(vel.mean, vel.bc, vel.mean, vel.bc, scheme), rhs_mean);
    if (pressure_basis) {
        VectorField mean_p = unstack(*pressure_basis, pressure_basis->mean);
        VectorField grad_p = gradient(mean_p[0], bcs.at("p"));
        rhs_mean = axpy(-1.0, grad_p, rhs_mean);
    }
    ops.c = project_all(velocity_basis, w, stack(rhs_mean));

    ops.L.resize(r, r);
    for (int j = 0; j < r; ++j) {
        VectorField lin = diffuse(vel.modes[j], vel.bc_hom, nu_const, nu_field);
        lin = axpy(-1.0, convect(vel.mean, vel.bc, vel.modes[j], vel.bc_hom, scheme), lin);
        lin = axpy(-1.0, convect(vel.modes[j], vel.bc_hom, vel.mean, vel.bc, scheme), lin);
        ops.L.col(j) = project_all(velocity_basis, w, stack(lin));
    }

    ops.Q.assign(r, Eigen::MatrixXd::Zero(r, r));
    for (int j = 0; j < r; ++j) {
        for (int k = 0; k < r; ++k) {
            VectorField q = convect(vel.modes[j], vel.bc_hom, vel.modes[k], vel.bc_hom, scheme);
            Eigen::VectorXd proj = project_all(velocity_basis, w, stack(q));
            for (int i = 0; i < r; ++i) ops.Q[i](j, k) = -proj[i];
        }
    }

    if (pressure_basis) {
        BoundaryConditions p_hom = bcs.at("p").homogeneous();
        ops.P.resize(r, pressure_basis->rank);
        for (int l = 0; l < pressure_basis->rank; ++l) {
            Field psi("p", pressure_basis->grid, pressure_basis->modes.col(l));
            VectorField grad_psi = gradient(psi, p_hom);
            ops.P.col(l) = -project_all(velocity_basis, w, stack(grad_psi));
        }
    } else {
        ops.P.resize(r, 0);
    }

    if (viscosity.has_mode1()) {
        ops.c_nu1 = project_all(velocity_basis, w,
                                stack(diffuse(vel.mean, vel.bc, 0.0, &viscosity.nu_t_mode1)));
        ops.L_nu1.resize(r, r);
        for (int j = 0; j < r; ++j) {
            VectorField d = diffuse(vel.modes[j], vel.bc_hom, 0.0, &viscosity.nu_t_mode1);
            ops.L_nu1.col(j) = project_all(velocity_basis, w, stack(d));
        }
    }
    return ops;
}

void build_pressure_operators(GalerkinOperators& ops, const PodBasis& velocity_basis,
                              const PodBasis& pressure_basis,
                              const std::map<std::string, BoundaryConditions>& bcs,
                              ConvectionScheme scheme) {
    const int r = velocity_basis.rank;
    const int rp = pressure_basis.rank;
    ops.pressure_rank = rp;

    ModeSet vel = velocity_mode_set(velocity_basis, bcs);
    const BoundaryConditions& p_bc = bcs.at("p");
    BoundaryConditions p_hom = p_bc.homogeneous();
    BoundaryConditions div_bc = all_zero_gradient();
    std::vector<BoundaryConditions> div_bcs(vel.mean.size(), div_bc);
    Eigen::VectorXd wp = pressure_basis.weights();

    auto project_p = [&](const Field& f) {
        return (pressure_basis.modes.transpose() * wp.cwiseProduct(f.values)).eval();
    };
    auto neg_div_conv = [&](const VectorField& a, const std::vector<BoundaryConditions>& a_bc,
                            const VectorField& b, const std::vector<BoundaryConditions>& b_bc) {
        VectorField conv = convect(a, a_bc, b, b_bc, scheme);
        Field div = divergence(conv, div_bcs);
        div.values = -div.values;
        return div;
    };

    ops.A_p.resize(rp, rp);
    for (int m = 0; m < rp; ++m) {
        Field psi("p", pressure_basis.grid, pressure_basis.modes.col(m));
        ops.A_p.col(m) = project_p(laplacian(psi, p_hom));
    }

    Field mean_p("p", pressure_basis.grid,
                 pressure_basis.mean.head(pressure_basis.points_per_component()).eval());
    Field c_field = neg_div_conv(vel.mean, vel.bc, vel.mean, vel.bc);
    c_field.values -= laplacian(mean_p, p_bc).values;
    ops.c_p = project_p(c_field);

    ops.L_p.resize(rp, r);
    for (int j = 0; j < r; ++j) {
        Field f1 = neg_div_conv(vel.mean, vel.bc, vel.modes[j], vel.bc_hom);
        Field f2 = neg_div_conv(vel.modes[j], vel.bc_hom, vel.mean, vel.bc);
        f1.values += f2.values;
        ops.L_p.col(j) = project_p(f1);
    }

    ops.Q_p.assign(rp, Eigen::MatrixXd::Zero(r, r));
    for (int j = 0; j < r; ++j) {
        for (int k = 0; k < r; ++k) {
            Field q = neg_div_conv(vel.modes[j], vel.bc_hom, vel.modes[k], vel.bc_hom);
            Eigen::VectorXd proj = project_p(q);
            for (int l = 0; l < rp; ++l) ops.Q_p[l](j, k) = proj[l];
        }
    }
    ops.finalize();
}

Eigen::VectorXd solve_pressure_coefficients(const GalerkinOperators& ops,
                                            const Eigen::VectorXd& a_u) {
    if (!ops.has_pressure()) return Eigen::VectorXd();
    if (a_u.size() != ops.velocity_rank) {
        throw DimensionError("velocity coefficient length does not match operator rank");
    }
    Eigen::VectorXd rhs = ops.c_p + ops.L_p * a_u;
    for (int l = 0; l < ops.pressure_rank; ++l) {
        rhs[l] += a_u.dot(ops.Q_p[l] * a_u);
    }
    if (!ops.a_p_lu) {
        return Eigen::PartialPivLU<Eigen::MatrixXd>(ops.A_p).solve(rhs);
    }
    return ops.a_p_lu->solve(rhs);
}

Eigen::VectorXd eval_rhs(const GalerkinOperators& ops, const Eigen::VectorXd& a_u,
                         const Eigen::VectorXd& a_p, double a1vt) {
    if (a_u.size() != ops.velocity_rank || a_p.size() != ops.pressure_rank) {
        throw DimensionError("coefficient lengths do not match operator ranks");
    }
    if (!a_u.allFinite() || !a_p.allFinite() || !std::isfinite(a1vt)) {
        throw DimensionError("non-finite coefficients passed to eval_rhs");
    }
    Eigen::VectorXd out = ops.c + ops.L * a_u;
    for (int i = 0; i < ops.velocity_rank; ++i) {
        out[i] += a_u.dot(ops.Q[i] * a_u);
    }
    if (ops.has_pressure()) out += ops.P * a_p;
    if (ops.has_mode1() && a1vt != 0.0) {
        out += a1vt * (ops.c_nu1 + ops.L_nu1 * a_u);
    }
    return out;
}

Eigen::VectorXd direct_momentum_rhs(const PodBasis& velocity_basis,
                                    const PodBasis* pressure_basis,
                                    const ViscosityModel& viscosity,
                                    const std::map<std::string, BoundaryConditions>& bcs,
                                    ConvectionScheme scheme, const Eigen::VectorXd& a_u,
                                    const Eigen::VectorXd& a_p, double a1vt) {
    ModeSet vel = velocity_mode_set(velocity_basis, bcs);
    VectorField u = unstack(velocity_basis, reconstruct(velocity_basis, a_u));

    // effective viscosity field for the reconstructed state
    double nu_const = viscosity.static_nu_const();
    Field nu_eff = viscosity.nu_t_mean;
    const Field* nu_field = nullptr;
    if (viscosity.variant != ViscosityVariant::SpatioTemporalMean) {
        if (viscosity.has_mode1() && a1vt != 0.0) {
            nu_eff.values += a1vt * viscosity.nu_t_mode1.values;
        }
        nu_field = &nu_eff;
    }

    VectorField rhs = diffuse(u, vel.bc, nu_const, nu_field);
    rhs = axpy(-1.0, convect(u, vel.bc, u, vel.bc, scheme), rhs);
    if (pressure_basis) {
        Eigen::VectorXd p_rec = reconstruct(*pressure_basis, a_p);
        Field p("p", pressure_basis->grid, p_rec);
        rhs = axpy(-1.0, gradient(p, bcs.at("p")), rhs);
    }
    return project_all(velocity_basis, velocity_basis.weights(), stack(rhs));
}

Eigen::VectorXd direct_pressure_rhs(const PodBasis& velocity_basis,
                                    const PodBasis& pressure_basis,
                                    const std::map<std::string, BoundaryConditions>& bcs,
                                    ConvectionScheme scheme, const Eigen::VectorXd& a_u) {
    ModeSet vel = velocity_mode_set(velocity_basis, bcs);
    VectorField u = unstack(velocity_basis, reconstruct(velocity_basis, a_u));
    BoundaryConditions div_bc = all_zero_gradient();
    std::vector<BoundaryConditions> div_bcs(u.size(), div_bc);

    VectorField conv = convect(u, vel.bc, u, vel.bc, scheme);
    Field rhs = divergence(conv, div_bcs);
    rhs.values = -rhs.values;
    Field mean_p("p", pressure_basis.grid,
                 pressure_basis.mean.head(pressure_basis.points_per_component()).eval());
    rhs.values -= laplacian(mean_p, bcs.at("p")).values;

    Eigen::VectorXd wp = pressure_basis.weights();
    return pressure_basis.modes.transpose() * wp.cwiseProduct(rhs.values);
}

}  // namespace flowrom
