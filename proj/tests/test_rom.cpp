#include <doctest.h>

#include <cmath>

#include "flowrom/fom.hpp"
#include "flowrom/rom.hpp"
#include "test_helpers.hpp"

using namespace flowrom;
using namespace flowrom::test;

TEST_SUITE_BEGIN("rom");

namespace {

GalerkinOperators diagonal_system(const Eigen::VectorXd& decay_rates,
                                  ViscosityVariant variant = ViscosityVariant::TemporalMean) {
    const int r = static_cast<int>(decay_rates.size());
    GalerkinOperators ops;
    ops.velocity_rank = r;
    ops.pressure_rank = 0;
    ops.variant = variant;
    ops.c = Eigen::VectorXd::Zero(r);
    ops.L = (-decay_rates).asDiagonal();
    ops.Q.assign(r, Eigen::MatrixXd::Zero(r, r));
    ops.P.resize(r, 0);
    ops.finalize();
    return ops;
}

ElmModel zero_elm(int dim) {
    ElmModel elm;
    elm.input_dim = dim;
    elm.output_dim = dim;
    elm.hidden = 4;
    elm.w1 = Eigen::MatrixXd::Constant(4, dim, 0.3);
    elm.b1 = Eigen::VectorXd::Constant(4, 0.1);
    elm.w2 = Eigen::MatrixXd::Zero(4, dim);
    return elm;
}

}  // namespace

TEST_CASE("variant traits implement the model table") {
    CHECK(variant_traits(RomVariant::A).viscosity == ViscosityVariant::SpatioTemporalMean);
    CHECK(variant_traits(RomVariant::A).closure == ClosureKind::None);
    CHECK(variant_traits(RomVariant::A1).closure == ClosureKind::Elm);
    CHECK(variant_traits(RomVariant::B).viscosity == ViscosityVariant::TemporalMean);
    CHECK(variant_traits(RomVariant::B).closure == ClosureKind::None);
    CHECK(variant_traits(RomVariant::C).viscosity == ViscosityVariant::TemporalMeanPlusMode1);
    CHECK(variant_traits(RomVariant::D).closure == ClosureKind::Elm);
    CHECK(variant_traits(RomVariant::E).viscosity == ViscosityVariant::TemporalMeanPlusMode1);
    CHECK(variant_traits(RomVariant::F).closure == ClosureKind::Narx);
}

TEST_CASE("assembly validates variant, closure and hashes") {
    GalerkinOperators ops = diagonal_system(Eigen::VectorXd::Ones(3));

    SUBCASE("variant B needs no closure") {
        RomModel model = assemble_model(RomVariant::B, ops, ClosureModel{});
        CHECK(model.variant == RomVariant::B);
    }
    SUBCASE("variant D rejects a NARX closure") {
        ClosureModel closure;
        closure.kind = ClosureKind::Narx;
        closure.narx = NarxModel{};
        CHECK_THROWS_AS((void)assemble_model(RomVariant::D, ops, closure), ConfigError);
    }
    SUBCASE("variant E requires variant-3 viscosity operators") {
        ClosureModel closure;
        closure.kind = ClosureKind::Elm;
        closure.elm = zero_elm(3);
        CHECK_THROWS_AS((void)assemble_model(RomVariant::E, ops, closure), ConfigError);
    }
    SUBCASE("case hashes must agree") {
        GalerkinOperators hashed = diagonal_system(Eigen::VectorXd::Ones(3));
        hashed.case_hash = "aaaa";
        ClosureModel closure;
        closure.kind = ClosureKind::Elm;
        closure.elm = zero_elm(3);
        closure.elm->case_hash = "bbbb";
        CHECK_THROWS_AS((void)assemble_model(RomVariant::D, hashed, closure), ConfigError);
    }
}

TEST_CASE("natural cubic spline") {
    SUBCASE("interpolates the knots exactly") {
        std::vector<double> t{0.0, 0.4, 1.1, 2.0, 3.3};
        Eigen::VectorXd y(5);
        y << 1.0, -0.2, 0.7, 0.1, 2.0;
        CubicSpline spline(t, y);
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(spline(t[i]) == doctest::Approx(y[i]).epsilon(1e-14));
        }
    }
    SUBCASE("reproduces linear data everywhere") {
        std::vector<double> t{0.0, 1.0, 2.5, 4.0};
        Eigen::VectorXd y(4);
        for (int i = 0; i < 4; ++i) y[i] = 2.0 * t[i] - 1.0;
        CubicSpline spline(t, y);
        for (double q = 0.0; q <= 4.0; q += 0.173) {
            CHECK(spline(q) == doctest::Approx(2.0 * q - 1.0).epsilon(1e-13));
        }
    }
    SUBCASE("fourth-order interior accuracy on a sine") {
        double dt = 0.2;
        std::vector<double> t;
        Eigen::VectorXd y(64);
        for (int i = 0; i < 64; ++i) {
            t.push_back(i * dt);
            y[i] = std::sin(t.back());
        }
        CubicSpline spline(t, y);
        double max_err = 0.0;
        for (double q = 10 * dt; q <= 50 * dt; q += dt / 7.0) {
            max_err = std::max(max_err, std::abs(spline(q) - std::sin(q)));
        }
        CHECK(max_err <= dt * dt * dt * dt);
    }
}

TEST_CASE("rk4 integrates exponential decay to high accuracy") {
    Eigen::VectorXd rates = Eigen::VectorXd::Ones(4);
    GalerkinOperators ops = diagonal_system(rates);
    RomModel model = assemble_model(RomVariant::B, ops, ClosureModel{});
    Eigen::VectorXd a0 = (Eigen::VectorXd(4) << 1.0, -2.0, 0.5, 3.0).finished();
    RomTrajectory traj = integrate(model, a0, 0.0, 1.0, 1e-3, 0.1);
    REQUIRE(traj.num_times() == 11);
    Eigen::VectorXd expected = std::exp(-1.0) * a0;
    CHECK((traj.a_u.col(10) - expected).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK_FALSE(traj.diverged);
}

TEST_CASE("rk4 endpoint error scales like dt^4") {
    Eigen::VectorXd rates = (Eigen::VectorXd(3) << 0.5, 1.0, 2.0).finished();
    GalerkinOperators ops = diagonal_system(rates);
    RomModel model = assemble_model(RomVariant::B, ops, ClosureModel{});
    Eigen::VectorXd a0 = (Eigen::VectorXd(3) << 1.0, 1.0, 1.0).finished();
    auto endpoint_error = [&](double dt) {
        RomTrajectory traj = integrate(model, a0, 0.0, 1.0, dt, 1.0);
        Eigen::VectorXd exact = (-rates.array()).exp() * a0.array();
        return (traj.a_u.col(1) - exact).norm();
    };
    double ratio = endpoint_error(0.05) / endpoint_error(0.025);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("a zero-output closure reproduces the closure-free trajectory bitwise") {
    Eigen::VectorXd rates = (Eigen::VectorXd(3) << 0.3, 0.9, 1.7).finished();
    GalerkinOperators ops = diagonal_system(rates);
    RomModel plain = assemble_model(RomVariant::B, ops, ClosureModel{});
    ClosureModel closure;
    closure.kind = ClosureKind::Elm;
    closure.elm = zero_elm(3);
    RomModel closed = assemble_model(RomVariant::D, ops, closure);

    Eigen::VectorXd a0 = (Eigen::VectorXd(3) << 0.7, -0.4, 1.1).finished();
    RomTrajectory t1 = integrate(plain, a0, 0.0, 2.0, 0.01, 0.2);
    RomTrajectory t2 = integrate(closed, a0, 0.0, 2.0, 0.01, 0.2);
    CHECK(t1.a_u == t2.a_u);
}

TEST_CASE("divergence is detected and marked") {
    GalerkinOperators ops = diagonal_system(Eigen::VectorXd::Constant(2, -5.0));  // growth
    RomModel model = assemble_model(RomVariant::B, ops, ClosureModel{});
    Eigen::VectorXd a0 = Eigen::VectorXd::Ones(2);
    RomTrajectory traj = integrate(model, a0, 0.0, 20.0, 0.01, 0.5);
    CHECK(traj.diverged);
    CHECK(traj.divergence_time > 0.0);
    CHECK(traj.num_times() < 41);
    CHECK(traj.a_u.allFinite());
}

TEST_CASE("closure contribution obeys the rk4 tableau on an affine system") {
    const int r = 3;
    Eigen::VectorXd rates = (Eigen::VectorXd(r) << 0.4, 1.2, 2.2).finished();
    GalerkinOperators ops = diagonal_system(rates);
    ClosureModel closure;
    closure.kind = ClosureKind::Elm;
    ElmModel elm = zero_elm(r);
    elm.w2 = Eigen::MatrixXd::Constant(4, r, 0.05);  // non-trivial constant-per-step closure
    closure.elm = elm;
    RomModel with_closure = assemble_model(RomVariant::D, ops, closure);
    RomModel without = assemble_model(RomVariant::B, ops, ClosureModel{});

    Eigen::VectorXd a0 = (Eigen::VectorXd(r) << 1.0, -0.5, 0.25).finished();
    double dt = 0.02;
    RomTrajectory t1 = integrate(without, a0, 0.0, dt, dt, dt);
    RomTrajectory t2 = integrate(with_closure, a0, 0.0, dt, dt, dt);

    // the closure evaluated at the step-start right-hand side
    Eigen::VectorXd r_start = eval_rhs(ops, a0, Eigen::VectorXd());
    Eigen::VectorXd c = elm_predict(elm, r_start);
    Eigen::MatrixXd l = ops.L;
    Eigen::VectorXd d1 = c;
    Eigen::VectorXd d2 = c + 0.5 * dt * (l * d1);
    Eigen::VectorXd d3 = c + 0.5 * dt * (l * d2);
    Eigen::VectorXd d4 = c + dt * (l * d3);
    Eigen::VectorXd delta = (dt / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4);

    Eigen::VectorXd diff = t2.a_u.col(1) - t1.a_u.col(1);
    CHECK((diff - delta).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, delta.cwiseAbs().maxCoeff()));
}

TEST_CASE("full-rank burgers rom tracks the projected full-order trajectory") {
    FomConfig config = quick_burgers_config();
    SnapshotEnsemble ensemble = run_and_collect(config);
    PodBasis basis = pod_modes(ensemble, "velocity", ensemble.num_snapshots() - 1);
    ViscosityModel visc =
        build_viscosity_model(ensemble, ViscosityVariant::TemporalMean, ensemble.fluid.nu_m);
    GalerkinOperators ops = build_momentum_operators(basis, nullptr, visc, ensemble.bcs,
                                                     ConvectionScheme::SkewCentral);
    ops.finalize();
    RomModel model = assemble_model(RomVariant::B, ops, ClosureModel{});

    Eigen::VectorXd a0 = initial_coefficients(ensemble, basis, 0.0);
    RomTrajectory traj = integrate(model, a0, 0.0, ensemble.horizon,
                                   ensemble.snapshot_interval / 20.0,
                                   ensemble.snapshot_interval);
    REQUIRE_FALSE(traj.diverged);
    ModalTrajectory exact = project_trajectory(basis, ensemble);
    REQUIRE(traj.num_times() == exact.num_times());

    for (int i = 0; i < basis.rank; ++i) {
        double rmse = (traj.a_u.row(i) - exact.coefficients.row(i)).norm() /
                      std::sqrt(double(exact.num_times()));
        double amplitude = exact.coefficients.row(i).norm() /
                           std::sqrt(double(exact.num_times()));
        CHECK(rmse <= 1e-3 * amplitude);
    }
}

TEST_CASE("variants A, B, C coincide bitwise for a zero nu_t ensemble") {
    FomConfig config = quick_burgers_config();
    SnapshotEnsemble ensemble = run_and_collect(config);  // burgers: nu_t is identically zero
    PodBasis basis = pod_modes(ensemble, "velocity", 6);

    std::vector<RomVariant> variants{RomVariant::A, RomVariant::B, RomVariant::C};
    std::vector<RomTrajectory> trajectories;
    Eigen::VectorXd a0 = initial_coefficients(ensemble, basis, 0.0);
    for (RomVariant variant : variants) {
        ViscosityModel visc = build_viscosity_model(
            ensemble, variant_traits(variant).viscosity, ensemble.fluid.nu_m);
        GalerkinOperators ops = build_momentum_operators(basis, nullptr, visc, ensemble.bcs,
                                                         ConvectionScheme::SkewCentral);
        ops.finalize();
        RomModel model = assemble_model(variant, ops, ClosureModel{});
        trajectories.push_back(integrate(model, a0, 0.0, 1.0, 0.01, 0.1));
    }
    CHECK(trajectories[0].a_u == trajectories[1].a_u);
    CHECK(trajectories[0].a_u == trajectories[2].a_u);
}

TEST_CASE("initial coefficients") {
    FomConfig config = quick_burgers_config();
    SnapshotEnsemble ensemble = run_and_collect(config);
    PodBasis full = pod_modes(ensemble, "velocity", ensemble.num_snapshots() - 1);

    Eigen::VectorXd a0 = initial_coefficients(ensemble, full, 0.0);
    Eigen::VectorXd direct = project_coefficients(full, stacked_snapshot(ensemble, full, 0));
    CHECK(a0 == direct);

    CHECK_THROWS_AS((void)initial_coefficients(ensemble, full, 0.0137), ConfigError);

    PodBasis truncated = full;
    truncated.rank = full.rank / 2;
    truncated.modes = full.modes.leftCols(truncated.rank).eval();
    Eigen::VectorXd a0_trunc = initial_coefficients(ensemble, truncated, 0.0);
    CHECK(a0_trunc.norm() <= a0.norm() + 1e-14);

    Eigen::VectorXd rec = reconstruct(full, a0);
    Eigen::VectorXd snap = stacked_snapshot(ensemble, full, 0);
    CHECK((rec - snap).norm() <= 1e-8 * snap.norm());
}

TEST_CASE("a1 spline extension detects the dominant period") {
    int m = 120;
    double dt = 0.1, period = 2.0;
    std::vector<double> t;
    Eigen::VectorXd a1(m);
    for (int j = 0; j < m; ++j) {
        t.push_back(j * dt);
        a1[j] = 0.7 * std::sin(2.0 * kPi * t.back() / period) + 0.1;
    }
    CHECK(dominant_period(a1, dt) == doctest::Approx(period).epsilon(0.06));

    GalerkinOperators ops = diagonal_system(Eigen::VectorXd::Ones(2),
                                            ViscosityVariant::TemporalMeanPlusMode1);
    ops.c_nu1 = Eigen::VectorXd::Zero(2);
    ops.L_nu1 = Eigen::MatrixXd::Zero(2, 2);
    ops.a1_times = t;
    ops.a1_values = a1;
    RomModel model = assemble_model(RomVariant::C, ops, ClosureModel{});
    CHECK(model.a1_extension == "periodic");

    double t_end = t.back();
    // periodic extension: one detected period ahead matches the tail value
    CHECK(model.a1vt(t_end + 0.5) ==
          doctest::Approx(model.a1vt(t_end + 0.5 - model.a1_period)).epsilon(1e-12));
    CHECK(std::isfinite(model.a1vt(t_end + 7.3)));
}

TEST_SUITE_END();
