#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "flowrom/fom.hpp"
#include "flowrom/io.hpp"
#include "test_helpers.hpp"

using namespace flowrom;
using namespace flowrom::test;

TEST_SUITE_BEGIN("io");

namespace {

std::string temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("flowrom_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

struct PipelineFixture {
    SnapshotEnsemble ensemble;
    PodBasis basis;
    GalerkinOperators ops;

    PipelineFixture() {
        ensemble = run_and_collect(quick_burgers_config());
        ensemble.case_hash = io::compute_case_hash(ensemble);
        basis = pod_modes(ensemble, "velocity", 5);
        ViscosityModel visc = build_viscosity_model(
            ensemble, ViscosityVariant::TemporalMeanPlusMode1, ensemble.fluid.nu_m);
        ops = build_momentum_operators(basis, nullptr, visc, ensemble.bcs,
                                       ConvectionScheme::SkewCentral);
        ops.finalize();
    }
};

}  // namespace

TEST_CASE("ensemble round trip is exact") {
    std::string dir = temp_dir("ensemble");
    SnapshotEnsemble ensemble = run_and_collect(quick_burgers_config());
    io::save_ensemble(ensemble, dir);
    SnapshotEnsemble loaded = io::load_ensemble(dir);

    CHECK(loaded.case_hash == ensemble.case_hash);
    CHECK(loaded.num_snapshots() == ensemble.num_snapshots());
    for (const auto& [name, data] : ensemble.snapshots) {
        CHECK(loaded.snapshots.at(name) == data);
    }
    CHECK(*loaded.grid == *ensemble.grid);
    CHECK(loaded.bc("u").at(BoundaryLabel::Body).kind == BcKind::FixedValue);
}

TEST_CASE("tampered manifests are rejected") {
    std::string dir = temp_dir("tamper");
    SnapshotEnsemble ensemble = run_and_collect(quick_burgers_config());
    io::save_ensemble(ensemble, dir);

    // edit a physical parameter without refreshing the recorded hash
    auto manifest_path = dir + "/manifest.json";
    std::ifstream in(manifest_path);
    nlohmann::json manifest;
    in >> manifest;
    in.close();
    manifest["fluid"]["nu_m"] = 0.123;
    std::ofstream out(manifest_path);
    out << manifest.dump(2) << "\n";
    out.close();

    CHECK_THROWS_AS((void)io::load_ensemble(dir), ConfigError);
}

TEST_CASE("basis round trip is exact") {
    PipelineFixture fx;
    std::string dir = temp_dir("basis");
    io::save_basis(fx.basis, dir);
    PodBasis loaded = io::load_basis(dir, "velocity");
    CHECK(loaded.mean == fx.basis.mean);
    CHECK(loaded.modes == fx.basis.modes);
    CHECK(loaded.eigenvalues == fx.basis.eigenvalues);
    CHECK(loaded.case_hash == fx.basis.case_hash);
    CHECK(loaded.component_labels == fx.basis.component_labels);
}

TEST_CASE("operator bundle round trip is exact") {
    PipelineFixture fx;
    std::string path = temp_dir("ops") + "/ops.bin";
    io::save_operators(fx.ops, path);
    GalerkinOperators loaded = io::load_operators(path);
    CHECK(loaded.c == fx.ops.c);
    CHECK(loaded.L == fx.ops.L);
    CHECK(loaded.Q.size() == fx.ops.Q.size());
    for (std::size_t i = 0; i < loaded.Q.size(); ++i) CHECK(loaded.Q[i] == fx.ops.Q[i]);
    CHECK(loaded.c_nu1 == fx.ops.c_nu1);
    CHECK(loaded.L_nu1 == fx.ops.L_nu1);
    CHECK(loaded.a1_values == fx.ops.a1_values);
    CHECK(loaded.variant == fx.ops.variant);
    CHECK(loaded.case_hash == fx.ops.case_hash);
}

TEST_CASE("closure model round trips preserve predictions bitwise") {
    PipelineFixture fx;
    ResidualDataset dataset = build_residual_dataset(fx.ensemble, fx.basis, fx.ops);
    std::string dir = temp_dir("models");

    ClosureModel elm;
    elm.kind = ClosureKind::Elm;
    elm.elm = elm_train(dataset, 10, 3);
    io::save_closure(elm, dir + "/elm.bin");
    ClosureModel elm_loaded = io::load_closure(dir + "/elm.bin");
    Eigen::VectorXd x = dataset.inputs.col(4);
    CHECK(elm_predict(*elm_loaded.elm, x) == elm_predict(*elm.elm, x));

    NarxTrainConfig config;
    config.max_epochs = 20;
    ClosureModel narx;
    narx.kind = ClosureKind::Narx;
    narx.narx = narx_train(dataset, config);
    io::save_closure(narx, dir + "/narx.bin");
    ClosureModel narx_loaded = io::load_closure(dir + "/narx.bin");
    Eigen::VectorXd p1 = narx_predict(*narx.narx, dataset.inputs.col(3), dataset.inputs.col(2),
                                      dataset.targets.col(2));
    Eigen::VectorXd p2 = narx_predict(*narx_loaded.narx, dataset.inputs.col(3),
                                      dataset.inputs.col(2), dataset.targets.col(2));
    CHECK(p1 == p2);
    CHECK(narx_loaded.narx->report.stop_reason == narx.narx->report.stop_reason);
}

TEST_CASE("trajectory csv round trip is exact") {
    PipelineFixture fx;
    RomModel model = assemble_model(RomVariant::C, fx.ops, ClosureModel{});
    Eigen::VectorXd a0 = initial_coefficients(fx.ensemble, fx.basis, 0.0);
    RomTrajectory traj = integrate(model, a0, 0.0, 1.0, 0.01, 0.1);

    std::string path = temp_dir("traj") + "/traj.csv";
    io::save_trajectory_csv(traj, model, path);
    io::LoadedTrajectory loaded = io::load_trajectory_csv(path);

    CHECK(loaded.variant == "C");
    CHECK(loaded.trajectory.times == traj.times);
    CHECK(loaded.trajectory.a_u == traj.a_u);
    CHECK(loaded.trajectory.a_p.rows() == 0);
    CHECK_FALSE(loaded.trajectory.diverged);
}

TEST_CASE("csv values round trip at full precision") {
    std::string path = temp_dir("csv") + "/data.csv";
    Rng rng(17);
    Eigen::MatrixXd data(40, 3);
    for (int j = 0; j < data.rows(); ++j) {
        data(j, 0) = rng.uniform_pm1() * 1e-300;
        data(j, 1) = rng.uniform_pm1() * 1e300;
        data(j, 2) = rng.uniform_pm1();
    }
    data(0, 0) = 0.1 + 0.2;  // classic non-representable sum
    io::write_csv(path, {"a", "b", "c"}, data);
    auto [header, loaded] = io::read_csv(path);
    CHECK(header == std::vector<std::string>{"a", "b", "c"});
    CHECK(loaded == data);
}

TEST_CASE("svg writer emits a polyline chart") {
    std::string path = temp_dir("svg") + "/plot.svg";
    std::vector<double> x{0.0, 1.0, 2.0, 3.0};
    Eigen::VectorXd y(4);
    y << 0.0, 1.0, 0.5, -0.25;
    io::write_svg_lines(path, "demo", x, {y}, {"series"});
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content.find("<svg") != std::string::npos);
    CHECK(content.find("polyline") != std::string::npos);
}

TEST_CASE("case hashes detect incompatible artifacts") {
    PipelineFixture fx;
    GalerkinOperators ops = fx.ops;
    ops.case_hash = "deadbeef00000000";
    ClosureModel closure;
    closure.kind = ClosureKind::None;
    RomModel model = assemble_model(RomVariant::C, ops, closure);  // no closure: hash unchecked
    CHECK(model.ops.case_hash == "deadbeef00000000");

    ResidualDataset dataset = build_residual_dataset(fx.ensemble, fx.basis, fx.ops);
    ClosureModel elm;
    elm.kind = ClosureKind::Elm;
    elm.elm = elm_train(dataset, 6, 1);
    CHECK_THROWS_AS((void)assemble_model(RomVariant::E, ops, elm), ConfigError);
}

TEST_SUITE_END();
