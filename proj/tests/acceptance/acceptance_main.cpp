// Acceptance suite: runs every acceptance criterion end to end on the
// bundled cases and prints one PASS/FAIL line per criterion. Exits nonzero
// if any criterion fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flowrom/closure.hpp"
#include "flowrom/eval.hpp"
#include "flowrom/fom.hpp"
#include "flowrom/io.hpp"
#include "flowrom/rng.hpp"
#include "flowrom/rom.hpp"

namespace fr = flowrom;
namespace fs = std::filesystem;

namespace {

struct Options {
    std::string cli_path;
    std::string configs_dir = "configs";
    std::string work_dir = "acceptance_work";
};

struct Summary {
    int failed = 0;

    void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << " (" << name
                  << "): " << detail << "\n";
        if (!pass) ++failed;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct CaseArtifacts {
    fr::SnapshotEnsemble ensemble;
    fr::PodBasis velocity_full;
    std::optional<fr::PodBasis> pressure_full;
};

CaseArtifacts build_case(const std::string& config_path) {
    CaseArtifacts artifacts;
    fr::FomConfig config = fr::load_fom_config(config_path);
    artifacts.ensemble = fr::run_and_collect(config);
    artifacts.ensemble.case_hash = fr::io::compute_case_hash(artifacts.ensemble);
    int max_rank = artifacts.ensemble.num_snapshots() - 1;
    artifacts.velocity_full = fr::pod_modes(artifacts.ensemble, "velocity", max_rank);
    if (artifacts.ensemble.snapshots.count("p")) {
        artifacts.pressure_full = fr::pod_modes(artifacts.ensemble, "p", max_rank);
    }
    return artifacts;
}

fr::PodBasis truncated(const fr::PodBasis& basis, int rank) {
    if (rank >= basis.rank) return basis;
    fr::PodBasis out = basis;
    out.rank = rank;
    out.modes = basis.modes.leftCols(rank).eval();
    return out;
}

struct BuiltRom {
    fr::PodBasis velocity;
    std::optional<fr::PodBasis> pressure;
    fr::ViscosityModel viscosity;
    fr::GalerkinOperators ops;
};

BuiltRom build_rom(const CaseArtifacts& artifacts, fr::ViscosityVariant variant, int rank,
                   int p_rank) {
    BuiltRom built;
    built.velocity = truncated(artifacts.velocity_full, rank);
    if (artifacts.pressure_full && p_rank > 0) {
        built.pressure = truncated(*artifacts.pressure_full, p_rank);
    }
    built.viscosity = fr::build_viscosity_model(artifacts.ensemble, variant,
                                                artifacts.ensemble.fluid.nu_m);
    built.ops = fr::build_momentum_operators(built.velocity,
                                             built.pressure ? &*built.pressure : nullptr,
                                             built.viscosity, artifacts.ensemble.bcs,
                                             fr::ConvectionScheme::SkewCentral);
    if (built.pressure) {
        fr::build_pressure_operators(built.ops, built.velocity, *built.pressure,
                                     artifacts.ensemble.bcs, fr::ConvectionScheme::SkewCentral);
    } else {
        built.ops.finalize();
    }
    return built;
}

// ---------------------------------------------------------------------------
// criterion implementations
// ---------------------------------------------------------------------------

bool pod_suite_for(const CaseArtifacts& artifacts, const fr::PodBasis& basis,
                   std::ostringstream& detail) {
    bool ok = true;
    Eigen::VectorXd w = basis.weights();
    Eigen::MatrixXd gram = basis.modes.transpose() * w.asDiagonal() * basis.modes;
    double max_off = 0.0, max_diag = 0.0;
    for (int i = 0; i < basis.rank; ++i) {
        for (int j = 0; j < basis.rank; ++j) {
            double err = std::abs(gram(i, j) - (i == j ? 1.0 : 0.0));
            (i == j ? max_diag : max_off) = std::max(i == j ? max_diag : max_off, err);
        }
    }
    ok = ok && max_off <= 1e-10 && max_diag <= 1e-10;

    for (int i = 0; i < basis.eigenvalues.size(); ++i) {
        if (basis.eigenvalues[i] < 0.0) ok = false;
        if (i > 0 && basis.eigenvalues[i] > basis.eigenvalues[i - 1] + 1e-15) ok = false;
    }

    const int m = artifacts.ensemble.num_snapshots();
    double fluct = 0.0;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd x = fr::stacked_snapshot(artifacts.ensemble, basis, j) - basis.mean;
        fluct += x.dot(w.cwiseProduct(x));
    }
    fluct /= m;
    double trace_rel = std::abs(basis.eigenvalues.sum() - fluct) / std::max(fluct, 1e-300);
    ok = ok && trace_rel <= 1e-10;

    double worst_recon = 0.0;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd x = fr::stacked_snapshot(artifacts.ensemble, basis, j);
        Eigen::VectorXd rec = fr::reconstruct(basis, fr::project_coefficients(basis, x));
        double num = std::sqrt((rec - x).dot(w.cwiseProduct(rec - x)));
        double den = std::sqrt(x.dot(w.cwiseProduct(x)));
        worst_recon = std::max(worst_recon, num / den);
    }
    ok = ok && worst_recon <= 1e-8;

    detail << basis.variable << "[r=" << basis.rank << " offdiag=" << max_off
           << " trace=" << trace_rel << " recon=" << worst_recon << "] ";
    return ok;
}

bool criterion_1(const CaseArtifacts& burgers, const CaseArtifacts& obstacle, Summary& summary) {
    auto t0 = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool ok = pod_suite_for(burgers, burgers.velocity_full, detail);
    ok = pod_suite_for(obstacle, obstacle.velocity_full, detail) && ok;
    ok = pod_suite_for(obstacle, *obstacle.pressure_full, detail) && ok;
    double elapsed = seconds_since(t0);
    ok = ok && elapsed <= 60.0;
    detail << "runtime=" << elapsed << "s";
    summary.report(1, "POD correctness", ok, detail.str());
    return ok;
}

bool consistency_for(const CaseArtifacts& artifacts, const BuiltRom& built, double& worst) {
    fr::Rng rng(909);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd a(built.ops.velocity_rank);
        for (int i = 0; i < a.size(); ++i) {
            a[i] = rng.uniform_pm1() * std::sqrt(std::max(
                       built.velocity.eigenvalues[std::min<int>(i, built.velocity.rank - 1)],
                       1e-12));
        }
        double a1vt = built.ops.has_mode1()
                          ? built.ops.a1_values[trial % built.ops.a1_values.size()]
                          : 0.0;
        Eigen::VectorXd a_p = fr::solve_pressure_coefficients(built.ops, a);
        Eigen::VectorXd tensor = fr::eval_rhs(built.ops, a, a_p, a1vt);
        Eigen::VectorXd direct = fr::direct_momentum_rhs(
            built.velocity, built.pressure ? &*built.pressure : nullptr, built.viscosity,
            artifacts.ensemble.bcs, fr::ConvectionScheme::SkewCentral, a, a_p, a1vt);
        worst = std::max(worst, (tensor - direct).norm() / std::max(direct.norm(), 1e-300));
    }
    return worst <= 1e-10;
}

bool criterion_2(const CaseArtifacts& burgers, const CaseArtifacts& obstacle,
                 const BuiltRom& obstacle_b, Summary& summary) {
    double worst_burgers = 0.0, worst_obstacle = 0.0;
    BuiltRom burgers_rom = build_rom(burgers, fr::ViscosityVariant::TemporalMean,
                                     std::min(8, burgers.velocity_full.rank), 0);
    bool ok = consistency_for(burgers, burgers_rom, worst_burgers);
    ok = consistency_for(obstacle, obstacle_b, worst_obstacle) && ok;
    std::ostringstream detail;
    detail << "max relative difference: burgers=" << worst_burgers
           << " obstacle=" << worst_obstacle << " (tolerance 1e-10)";
    summary.report(2, "Galerkin consistency oracle", ok, detail.str());
    return ok;
}

bool criterion_3(const CaseArtifacts& burgers, Summary& summary) {
    auto t0 = std::chrono::steady_clock::now();
    BuiltRom built = build_rom(burgers, fr::ViscosityVariant::TemporalMean,
                               burgers.velocity_full.rank, 0);
    fr::RomModel model = fr::assemble_model(fr::RomVariant::B, built.ops, fr::ClosureModel{});
    Eigen::VectorXd a0 = fr::initial_coefficients(burgers.ensemble, built.velocity, 0.0);
    const double interval = burgers.ensemble.snapshot_interval;
    fr::RomTrajectory traj = fr::integrate(model, a0, 0.0, burgers.ensemble.horizon,
                                           interval / 20.0, interval);
    fr::ModalTrajectory exact = fr::project_trajectory(built.velocity, burgers.ensemble);

    bool ok = !traj.diverged && traj.num_times() == exact.num_times();
    double worst_ratio = 0.0;
    if (ok) {
        for (int i = 0; i < built.velocity.rank; ++i) {
            double rmse = (traj.a_u.row(i) - exact.coefficients.row(i)).norm() /
                          std::sqrt(double(exact.num_times()));
            double amplitude =
                exact.coefficients.row(i).norm() / std::sqrt(double(exact.num_times()));
            worst_ratio = std::max(worst_ratio, rmse / std::max(amplitude, 1e-300));
        }
        ok = worst_ratio <= 1e-3;
    }
    double elapsed = seconds_since(t0);
    ok = ok && elapsed <= 120.0;
    std::ostringstream detail;
    detail << "rank=" << built.velocity.rank << " worst rmse/amplitude=" << worst_ratio
           << " (tolerance 1e-3), runtime=" << elapsed << "s";
    summary.report(3, "full-rank ROM fidelity (Burgers)", ok, detail.str());
    return ok;
}

bool criterion_4(const CaseArtifacts& burgers, Summary& summary) {
    int rank = fr::choose_rank(burgers.velocity_full, fr::RankCriterion::energy(0.5));
    BuiltRom built = build_rom(burgers, fr::ViscosityVariant::TemporalMean, rank, 0);
    fr::ResidualDataset dataset =
        fr::build_residual_dataset(burgers.ensemble, built.velocity, built.ops);

    double zero_rmse = dataset.targets.norm();
    fr::ElmModel elm = fr::elm_train(dataset, 10, 1);
    double elm_rmse = (elm.train_predictions - dataset.targets).norm();

    fr::NarxTrainConfig config;
    config.seed = 1;
    fr::NarxModel narx = fr::narx_train(dataset, config);
    double narx_err2 = 0.0, narx_zero2 = 0.0;
    for (int s = 0; s < narx.report.train_count; ++s) {
        int j = s + 1;
        Eigen::VectorXd pred = fr::narx_predict(narx, dataset.inputs.col(j),
                                                dataset.inputs.col(j - 1),
                                                dataset.targets.col(j - 1));
        narx_err2 += (pred - dataset.targets.col(j)).squaredNorm();
        narx_zero2 += dataset.targets.col(j).squaredNorm();
    }
    double elm_ratio = elm_rmse / zero_rmse;
    double narx_ratio = std::sqrt(narx_err2 / narx_zero2);
    bool ok = elm_ratio <= 0.5 && narx_ratio <= 0.5;
    std::ostringstream detail;
    detail << "rank=" << rank << " elm=" << elm_ratio << "x narx=" << narx_ratio
           << "x of the zero predictor (floor 0.5)";
    summary.report(4, "closure training floor", ok, detail.str());
    return ok;
}

double summed_rmse_or_divergence(const CaseArtifacts& obstacle, const fr::RomTrajectory& traj,
                                 const fr::ModalTrajectory& exact, bool* diverged) {
    *diverged = traj.diverged;
    if (traj.diverged) return std::numeric_limits<double>::infinity();
    fr::ModalTrajectory pred{"velocity", traj.times, traj.a_u};
    fr::RmseReport report = fr::rmse_per_mode(pred, exact);
    return report.rmse.sum();
}

bool criterion_5(const CaseArtifacts& obstacle, const BuiltRom& variant_b, Summary& summary) {
    const int rank = variant_b.ops.velocity_rank;
    const int p_rank = variant_b.ops.pressure_rank;
    BuiltRom variant_a = build_rom(obstacle, fr::ViscosityVariant::SpatioTemporalMean, rank,
                                   p_rank);

    fr::ResidualDataset dataset =
        fr::build_residual_dataset(obstacle.ensemble, variant_b.velocity, variant_b.ops);
    fr::ClosureModel closure;
    closure.kind = fr::ClosureKind::Elm;
    closure.elm = fr::elm_train(dataset, 10, 1);

    fr::RomModel model_a = fr::assemble_model(fr::RomVariant::A, variant_a.ops,
                                              fr::ClosureModel{});
    fr::RomModel model_b = fr::assemble_model(fr::RomVariant::B, variant_b.ops,
                                              fr::ClosureModel{});
    fr::RomModel model_d = fr::assemble_model(fr::RomVariant::D, variant_b.ops, closure);

    Eigen::VectorXd a0 = fr::initial_coefficients(obstacle.ensemble, variant_b.velocity, 0.0);
    const double interval = obstacle.ensemble.snapshot_interval;
    fr::ModalTrajectory exact = fr::project_trajectory(variant_b.velocity, obstacle.ensemble);

    auto run = [&](const fr::RomModel& model) {
        return fr::integrate(model, a0, 0.0, obstacle.ensemble.horizon, interval / 20.0,
                             interval);
    };
    bool div_a = false, div_b = false, div_d = false;
    double rmse_a = summed_rmse_or_divergence(obstacle, run(model_a), exact, &div_a);
    double rmse_b = summed_rmse_or_divergence(obstacle, run(model_b), exact, &div_b);
    double rmse_d = summed_rmse_or_divergence(obstacle, run(model_d), exact, &div_d);

    bool ok = !div_d && !div_b && rmse_d <= rmse_b && rmse_b <= rmse_a;
    std::ostringstream detail;
    detail << "summed per-mode RMSE: D=" << rmse_d << " B=" << rmse_b << " A="
           << (div_a ? std::string("diverged") : std::to_string(rmse_a))
           << " (need D <= B <= A)";
    summary.report(5, "closure end-to-end ladder", ok, detail.str());
    return ok;
}

bool criterion_6(Summary& summary) {
    fr::Rng rng(31);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        int r = 2 + static_cast<int>(rng.uniform01() * 4);
        int m = 20 + static_cast<int>(rng.uniform01() * 20);
        fr::ResidualDataset d;
        d.inputs.resize(r, m);
        d.targets.resize(r, m);
        for (int j = 0; j < m; ++j) {
            d.times.push_back(j);
            for (int i = 0; i < r; ++i) {
                d.inputs(i, j) = rng.uniform_pm1();
                d.targets(i, j) = rng.uniform_pm1();
            }
        }
        fr::ElmModel model = fr::elm_train(d, 8, 1000 + rep);
        Eigen::MatrixXd h = ((model.w1 * d.inputs).colwise() + model.b1)
                                .array()
                                .tanh()
                                .matrix()
                                .transpose();
        Eigen::MatrixXd gram = h.transpose() * h;
        Eigen::MatrixXd ref = gram.ldlt().solve(h.transpose() * d.targets.transpose());
        worst = std::max(worst, (model.w2 - ref).norm() / ref.norm());
    }
    bool ok = worst <= 1e-8;
    std::ostringstream detail;
    detail << "max relative difference vs normal equations over 20 problems: " << worst
           << " (tolerance 1e-8)";
    summary.report(6, "ELM least-squares exactness", ok, detail.str());
    return ok;
}

bool criterion_7(Summary& summary) {
    Eigen::VectorXd rates = (Eigen::VectorXd(3) << 0.5, 1.0, 2.0).finished();
    fr::GalerkinOperators ops;
    ops.velocity_rank = 3;
    ops.pressure_rank = 0;
    ops.variant = fr::ViscosityVariant::TemporalMean;
    ops.c = Eigen::VectorXd::Zero(3);
    ops.L = (-rates).asDiagonal();
    ops.Q.assign(3, Eigen::MatrixXd::Zero(3, 3));
    ops.P.resize(3, 0);
    ops.finalize();
    fr::RomModel model = fr::assemble_model(fr::RomVariant::B, ops, fr::ClosureModel{});
    Eigen::VectorXd a0 = Eigen::VectorXd::Ones(3);
    auto endpoint_error = [&](double dt) {
        fr::RomTrajectory traj = fr::integrate(model, a0, 0.0, 1.0, dt, 1.0);
        Eigen::VectorXd exact = (-rates.array()).exp().matrix();
        return (traj.a_u.col(1) - exact).norm();
    };
    double ratio = endpoint_error(0.05) / endpoint_error(0.025);
    bool ok = ratio >= 12.0 && ratio <= 20.0;
    std::ostringstream detail;
    detail << "error ratio under dt halving = " << ratio << " (expected in [12, 20])";
    summary.report(7, "RK4 order check", ok, detail.str());
    return ok;
}

bool criterion_8(Summary& summary) {
    fr::ObstacleSpec spec{3, 3, 2, 2};
    auto grid = std::make_shared<fr::StructuredGrid>(10, 10, 0.1, 0.1, false, false, spec);
    double rho = 1.2, p0 = 5.0;
    fr::Field p("p", grid, Eigen::VectorXd::Constant(grid->num_fluid_cells(), p0));
    fr::VectorField vel{fr::Field("u", grid), fr::Field("v", grid)};
    fr::Field nu("nu_e", grid, Eigen::VectorXd::Constant(grid->num_fluid_cells(), 1e-3));

    fr::ForceSample uniform = fr::compute_forces(p, vel, nu, fr::BoundaryLabel::Body, rho, 0.0);
    double bound = 1e-12 * rho * p0 * 0.1;
    bool ok = uniform.pressure_force.cwiseAbs().maxCoeff() <= bound;

    fr::Rng rng(3);
    fr::Field pr("p", grid);
    for (int c = 0; c < grid->num_fluid_cells(); ++c) pr[c] = rng.uniform_pm1();
    double p_ref = 0.3;
    fr::ForceSample f1 = fr::compute_forces(pr, vel, nu, fr::BoundaryLabel::Body, rho, p_ref);
    fr::Field pr3("p", grid, (3.0 * (pr.values.array() - p_ref) + p_ref).matrix().eval());
    fr::ForceSample f3 = fr::compute_forces(pr3, vel, nu, fr::BoundaryLabel::Body, rho, p_ref);
    double lin_err = (f3.pressure_force - 3.0 * f1.pressure_force).norm() /
                     std::max(f1.pressure_force.norm(), 1e-300);
    ok = ok && lin_err <= 1e-12;

    std::ostringstream detail;
    detail << "closed-surface |F_p|=" << uniform.pressure_force.cwiseAbs().maxCoeff()
           << " (bound " << bound << "), linearity error=" << lin_err;
    summary.report(8, "force sanity", ok, detail.str());
    return ok;
}

bool criterion_9(const Options& options, const CaseArtifacts& obstacle, const BuiltRom& built,
                 Summary& summary) {
    fr::FomConfig config = fr::load_fom_config(options.configs_dir + "/ns2d_obstacle.json");
    fr::RomModel model = fr::assemble_model(fr::RomVariant::B, built.ops, fr::ClosureModel{});
    Eigen::VectorXd a0 = fr::initial_coefficients(obstacle.ensemble, built.velocity, 0.0);
    fr::SpeedupReport report = fr::benchmark_speedup(
        config, model, a0, 1.0, obstacle.ensemble.horizon,
        obstacle.ensemble.snapshot_interval / 20.0, obstacle.ensemble.snapshot_interval);
    bool ok = report.ratio >= 100.0;
    std::ostringstream detail;
    detail << "speedup=" << report.ratio << " (fom " << report.fom_seconds_per_sim_second
           << " s per simulated second on " << report.fom_cells << " cells, rom "
           << report.rom_seconds_per_sim_second << " s at " << report.rom_modes
           << " modes; floor 100)";
    summary.report(9, "speedup", ok, detail.str());
    return ok;
}

// criterion 10: deterministic pipeline stages through the CLI binary
bool files_identical(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    return ca == cb;
}

bool trees_identical(const fs::path& a, const fs::path& b, std::string& first_diff) {
    std::vector<fs::path> rel;
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (entry.is_regular_file()) rel.push_back(fs::relative(entry.path(), a));
    }
    for (const auto& r : rel) {
        if (!files_identical(a / r, b / r)) {
            first_diff = r.string();
            return false;
        }
    }
    return true;
}

bool criterion_10(const Options& options, Summary& summary) {
    if (options.cli_path.empty()) {
        summary.report(10, "pipeline determinism", false, "no --cli path provided");
        return false;
    }
    fs::path work = fs::path(options.work_dir) / "determinism";
    fs::remove_all(work);
    fs::create_directories(work);

    auto run_pipeline = [&](const std::string& tag) -> bool {
        fs::path base = work / tag;
        fs::create_directories(base);
        std::string ens = (base / "ensemble").string();
        std::string pod = (base / "pod").string();
        std::string ops = (base / "ops.bin").string();
        std::string elm = (base / "elm.bin").string();
        std::string narx = (base / "narx.bin").string();
        std::string traj = (base / "traj.csv").string();
        std::string eval = (base / "eval").string();
        std::string cfg = options.configs_dir + "/burgers1d.json";
        std::vector<std::string> commands = {
            options.cli_path + " fom-run --config " + cfg + " --out " + ens,
            options.cli_path + " pod --ensemble " + ens + " --rank 6 --out " + pod,
            options.cli_path + " build --ensemble " + ens + " --basis " + pod +
                " --variant D --out " + ops,
            options.cli_path + " train-closure --ensemble " + ens + " --basis " + pod +
                " --bundle " + ops + " --kind elm --seed 4 --out " + elm,
            options.cli_path + " train-closure --ensemble " + ens + " --basis " + pod +
                " --bundle " + ops + " --kind narx --seed 4 --out " + narx,
            options.cli_path + " rom-run --ensemble " + ens + " --basis " + pod + " --bundle " +
                ops + " --variant D --closure " + elm + " --out " + traj,
            options.cli_path + " eval --traj " + traj + " --ensemble " + ens + " --basis " +
                pod + " --out " + eval,
        };
        for (const auto& command : commands) {
            std::string silenced = command + " > /dev/null 2>&1";
            if (std::system(silenced.c_str()) != 0) {
                std::cout << "  command failed: " << command << "\n";
                return false;
            }
        }
        return true;
    };

    bool ok = run_pipeline("run1") && run_pipeline("run2");
    std::string first_diff;
    if (ok) ok = trees_identical(work / "run1", work / "run2", first_diff);
    std::ostringstream detail;
    if (ok) {
        detail << "all pipeline artifacts byte-identical across reruns";
    } else if (!first_diff.empty()) {
        detail << "artifact differs between reruns: " << first_diff;
    } else {
        detail << "pipeline stage failed";
    }
    summary.report(10, "pipeline determinism", ok, detail.str());
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    Options options;
    for (int i = 1; i < argc - 1; ++i) {
        std::string arg = argv[i];
        if (arg == "--cli") options.cli_path = argv[++i];
        else if (arg == "--configs") options.configs_dir = argv[++i];
        else if (arg == "--work") options.work_dir = argv[++i];
    }

    Summary summary;
    try {
        auto t0 = std::chrono::steady_clock::now();
        std::cout << "building bundled ensembles...\n";
        CaseArtifacts burgers = build_case(options.configs_dir + "/burgers1d.json");
        std::cout << "  burgers: " << burgers.ensemble.num_snapshots() << " snapshots, rank "
                  << burgers.velocity_full.rank << " (" << seconds_since(t0) << "s)\n";
        CaseArtifacts obstacle = build_case(options.configs_dir + "/ns2d_obstacle.json");
        std::cout << "  obstacle: " << obstacle.ensemble.num_snapshots() << " snapshots, rank "
                  << obstacle.velocity_full.rank << " (" << seconds_since(t0) << "s)\n";

        BuiltRom obstacle_b = build_rom(obstacle, fr::ViscosityVariant::TemporalMean, 20, 20);

        criterion_1(burgers, obstacle, summary);
        criterion_2(burgers, obstacle, obstacle_b, summary);
        criterion_3(burgers, summary);
        criterion_4(burgers, summary);
        criterion_5(obstacle, obstacle_b, summary);
        criterion_6(summary);
        criterion_7(summary);
        criterion_8(summary);
        criterion_9(options, obstacle, obstacle_b, summary);
        criterion_10(options, summary);
    } catch (const std::exception& e) {
        std::cerr << "acceptance suite aborted: " << e.what() << "\n";
        return 2;
    }

    std::cout << (summary.failed == 0 ? "all acceptance criteria passed"
                                      : std::to_string(summary.failed) + " criteria failed")
              << "\n";
    return summary.failed == 0 ? 0 : 1;
}
