// Command-line pipeline: full-order runs, POD, operator projection, closure
// training, ROM integration, evaluation and speedup benchmarking. Stages
// communicate only through files; every stage is deterministic for a given
// seed and configuration.

#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "flowrom/eval.hpp"
#include "flowrom/fom.hpp"
#include "flowrom/io.hpp"

namespace fr = flowrom;

namespace {

fr::PodBasis truncated(const fr::PodBasis& basis, int rank) {
    if (rank >= basis.rank) return basis;
    fr::PodBasis out = basis;
    out.rank = rank;
    out.modes = basis.modes.leftCols(rank).eval();
    return out;
}

fr::PodBasis load_basis_for(const std::string& dir, const std::string& variable, int rank) {
    fr::PodBasis basis = fr::io::load_basis(dir, variable);
    return rank > 0 ? truncated(basis, rank) : basis;
}

void require_same_hash(const std::string& a, const std::string& b, const std::string& what) {
    if (!a.empty() && !b.empty() && a != b) {
        throw fr::ConfigError("case hash mismatch: " + what);
    }
}

struct PipelinePaths {
    std::string ensemble_dir;
    std::string basis_dir;
    std::string bundle_path;
};

fr::GalerkinOperators build_operators_for(const fr::SnapshotEnsemble& ensemble,
                                          const fr::PodBasis& vel_basis,
                                          const fr::PodBasis* p_basis, int variant_class) {
    fr::ViscosityModel visc = fr::build_viscosity_model(
        ensemble, fr::viscosity_variant_from_int(variant_class), ensemble.fluid.nu_m);
    fr::GalerkinOperators ops = fr::build_momentum_operators(
        vel_basis, p_basis, visc, ensemble.bcs, fr::ConvectionScheme::SkewCentral);
    if (p_basis) {
        fr::build_pressure_operators(ops, vel_basis, *p_basis, ensemble.bcs,
                                     fr::ConvectionScheme::SkewCentral);
    } else {
        ops.finalize();
    }
    return ops;
}

int variant_class_of(const std::string& variant) {
    return static_cast<int>(fr::variant_traits(fr::rom_variant_from_string(variant)).viscosity);
}

fr::RomModel assemble_from_files(const std::string& bundle_path, const std::string& variant_name,
                                 const std::string& closure_path) {
    fr::GalerkinOperators ops = fr::io::load_operators(bundle_path);
    fr::ClosureModel closure;
    if (!closure_path.empty()) closure = fr::io::load_closure(closure_path);
    return fr::assemble_model(fr::rom_variant_from_string(variant_name), ops, closure);
}

void write_rmse_csv(const std::string& path, const fr::RmseReport& report) {
    Eigen::MatrixXd rows(report.rmse.size(), 2);
    for (int i = 0; i < report.rmse.size(); ++i) {
        rows(i, 0) = i + 1;
        rows(i, 1) = report.rmse[i];
    }
    fr::io::write_csv(path, {"mode", "rmse"}, rows);
}

Eigen::MatrixXd force_rows(const fr::ForceSeries& series) {
    Eigen::MatrixXd rows(static_cast<int>(series.samples.size()), 7);
    for (std::size_t j = 0; j < series.samples.size(); ++j) {
        const auto& s = series.samples[j];
        int i = static_cast<int>(j);
        rows(i, 0) = s.time;
        rows(i, 1) = s.pressure_force[0];
        rows(i, 2) = s.pressure_force[1];
        rows(i, 3) = s.viscous_force[0];
        rows(i, 4) = s.viscous_force[1];
        rows(i, 5) = s.total()[0];
        rows(i, 6) = s.total()[1];
    }
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flowrom: snapshot-based reduced-order models of incompressible flows"};
    app.require_subcommand(1);

    // fom-run --------------------------------------------------------------
    auto* fom_cmd = app.add_subcommand("fom-run", "run a full-order case and save its ensemble");
    std::string fom_config_path, fom_out;
    std::optional<std::uint64_t> seed_override;
    fom_cmd->add_option("--config", fom_config_path, "case configuration (JSON)")->required();
    fom_cmd->add_option("--out", fom_out, "output ensemble directory")->required();
    fom_cmd->add_option("--seed", seed_override, "override the configured seed");

    // pod ------------------------------------------------------------------
    auto* pod_cmd = app.add_subcommand("pod", "compute POD bases from an ensemble");
    std::string pod_ensemble, pod_out;
    int pod_rank = 0;
    double pod_energy = 0.0;
    pod_cmd->add_option("--ensemble", pod_ensemble, "ensemble directory")->required();
    pod_cmd->add_option("--out", pod_out, "output basis directory")->required();
    pod_cmd->add_option("--rank", pod_rank, "explicit rank (0 keeps all retained modes)");
    pod_cmd->add_option("--energy", pod_energy, "energy-fraction rank criterion in (0,1]");

    // build ----------------------------------------------------------------
    auto* build_cmd = app.add_subcommand("build", "project operators for a model variant");
    std::string build_ensemble, build_basis, build_variant = "B", build_out;
    build_cmd->add_option("--ensemble", build_ensemble, "ensemble directory")->required();
    build_cmd->add_option("--basis", build_basis, "basis directory")->required();
    build_cmd->add_option("--variant", build_variant, "model variant (A|A1|B|C|D|E|F)");
    build_cmd->add_option("--out", build_out, "output operator bundle path")->required();

    // train-closure ----------------------------------------------------------
    auto* train_cmd = app.add_subcommand("train-closure", "train an ELM or NARX residual closure");
    std::string train_ensemble, train_basis, train_bundle, train_kind = "elm", train_out;
    std::uint64_t train_seed = 0;
    int train_hidden = 10;
    double train_ridge = 0.0;
    train_cmd->add_option("--ensemble", train_ensemble, "ensemble directory")->required();
    train_cmd->add_option("--basis", train_basis, "basis directory")->required();
    train_cmd->add_option("--bundle", train_bundle, "operator bundle")->required();
    train_cmd->add_option("--kind", train_kind, "closure kind: elm | narx");
    train_cmd->add_option("--seed", train_seed, "training seed");
    train_cmd->add_option("--hidden", train_hidden, "hidden layer size");
    train_cmd->add_option("--ridge", train_ridge, "optional ELM ridge term");
    train_cmd->add_option("--out", train_out, "output model path")->required();

    // rom-run ----------------------------------------------------------------
    auto* rom_cmd = app.add_subcommand("rom-run", "integrate a model variant in time");
    std::string rom_ensemble, rom_basis, rom_bundle, rom_variant = "B", rom_closure, rom_out;
    double rom_t0 = 0.0, rom_duration = 0.0, rom_dt = 0.0;
    rom_cmd->add_option("--ensemble", rom_ensemble, "ensemble directory")->required();
    rom_cmd->add_option("--basis", rom_basis, "basis directory")->required();
    rom_cmd->add_option("--bundle", rom_bundle, "operator bundle")->required();
    rom_cmd->add_option("--variant", rom_variant, "model variant");
    rom_cmd->add_option("--closure", rom_closure, "closure model file (variants A1, D, E, F)");
    rom_cmd->add_option("--t0", rom_t0, "start time (a snapshot time)");
    rom_cmd->add_option("--duration", rom_duration, "simulated duration (default: horizon)");
    rom_cmd->add_option("--dt", rom_dt, "integrator step (default: snapshot interval / 20)");
    rom_cmd->add_option("--out", rom_out, "output trajectory CSV")->required();

    // eval -------------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "compare a trajectory against its ensemble");
    std::string eval_traj, eval_ensemble, eval_basis, eval_out;
    bool eval_svg = true;
    eval_cmd->add_option("--traj", eval_traj, "trajectory CSV from rom-run")->required();
    eval_cmd->add_option("--ensemble", eval_ensemble, "ensemble directory")->required();
    eval_cmd->add_option("--basis", eval_basis, "basis directory")->required();
    eval_cmd->add_option("--out", eval_out, "output directory")->required();
    eval_cmd->add_flag("--svg,!--no-svg", eval_svg, "write SVG line plots (default on)");

    // bench ------------------------------------------------------------------
    auto* bench_cmd = app.add_subcommand("bench", "wall-clock speedup of the ROM over the FOM");
    std::string bench_config, bench_ensemble, bench_basis, bench_bundle, bench_variant = "B",
                              bench_closure, bench_out;
    double bench_fom_duration = 1.0, bench_rom_duration = 0.0;
    bench_cmd->add_option("--config", bench_config, "full-order configuration")->required();
    bench_cmd->add_option("--ensemble", bench_ensemble, "ensemble directory")->required();
    bench_cmd->add_option("--basis", bench_basis, "basis directory")->required();
    bench_cmd->add_option("--bundle", bench_bundle, "operator bundle")->required();
    bench_cmd->add_option("--variant", bench_variant, "model variant");
    bench_cmd->add_option("--closure", bench_closure, "closure model file");
    bench_cmd->add_option("--fom-duration", bench_fom_duration, "FOM simulated seconds to time");
    bench_cmd->add_option("--rom-duration", bench_rom_duration,
                          "ROM simulated seconds to time (default: horizon)");
    bench_cmd->add_option("--out", bench_out, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fom_cmd) {
            fr::FomConfig config = fr::load_fom_config(fom_config_path);
            if (seed_override) config.seed = *seed_override;
            fr::SnapshotEnsemble ensemble = fr::run_and_collect(config);
            fr::io::save_ensemble(ensemble, fom_out);
            std::cout << "ensemble: " << ensemble.num_snapshots() << " snapshots, case hash "
                      << ensemble.case_hash << "\n";
        } else if (*pod_cmd) {
            fr::SnapshotEnsemble ensemble = fr::io::load_ensemble(pod_ensemble);
            for (const std::string& variable : {std::string("velocity"), std::string("p"),
                                                std::string("nu_t")}) {
                if (variable == "p" && !ensemble.snapshots.count("p")) continue;
                fr::PodBasis basis =
                    fr::pod_modes(ensemble, variable, ensemble.num_snapshots() - 1);
                if (variable != "nu_t") {
                    int rank = basis.rank;
                    if (pod_energy > 0.0) {
                        rank = fr::choose_rank(basis, fr::RankCriterion::energy(pod_energy));
                    }
                    if (pod_rank > 0) {
                        rank = fr::choose_rank(basis, fr::RankCriterion::explicit_rank(pod_rank));
                    }
                    basis = truncated(basis, std::max(rank, 1));
                }
                fr::io::save_basis(basis, pod_out);
                std::cout << variable << ": rank " << basis.rank << " of "
                          << basis.eigenvalues.size() << " eigenvalues\n";
            }
        } else if (*build_cmd) {
            fr::SnapshotEnsemble ensemble = fr::io::load_ensemble(build_ensemble);
            fr::PodBasis vel_basis = load_basis_for(build_basis, "velocity", 0);
            require_same_hash(ensemble.case_hash, vel_basis.case_hash, "ensemble vs basis");
            std::optional<fr::PodBasis> p_basis;
            if (ensemble.snapshots.count("p")) {
                p_basis = load_basis_for(build_basis, "p", 0);
            }
            fr::GalerkinOperators ops = build_operators_for(
                ensemble, vel_basis, p_basis ? &*p_basis : nullptr,
                variant_class_of(build_variant));
            fr::io::save_operators(ops, build_out);
            std::cout << "operators: velocity rank " << ops.velocity_rank << ", pressure rank "
                      << ops.pressure_rank << ", viscosity model "
                      << static_cast<int>(ops.variant) << "\n";
        } else if (*train_cmd) {
            fr::SnapshotEnsemble ensemble = fr::io::load_ensemble(train_ensemble);
            fr::PodBasis vel_basis = load_basis_for(train_basis, "velocity", 0);
            fr::GalerkinOperators ops = fr::io::load_operators(train_bundle);
            require_same_hash(ensemble.case_hash, ops.case_hash, "ensemble vs bundle");
            fr::ResidualDataset dataset = fr::build_residual_dataset(ensemble, vel_basis, ops);
            fr::ClosureModel closure;
            if (train_kind == "elm") {
                closure.kind = fr::ClosureKind::Elm;
                closure.elm = fr::elm_train(dataset, train_hidden, train_seed, train_ridge);
                std::cout << "elm: train rmse " << closure.elm->train_rmse << "\n";
            } else if (train_kind == "narx") {
                fr::NarxTrainConfig config;
                config.hidden = train_hidden;
                config.seed = train_seed;
                closure.kind = fr::ClosureKind::Narx;
                closure.narx = fr::narx_train(dataset, config);
                std::cout << "narx: " << closure.narx->report.epochs << " epochs, stop "
                          << closure.narx->report.stop_reason << ", train mse "
                          << closure.narx->report.train_mse << "\n";
            } else {
                throw fr::ConfigError("unknown closure kind '" + train_kind + "'");
            }
            fr::io::save_closure(closure, train_out);
        } else if (*rom_cmd) {
            fr::SnapshotEnsemble ensemble = fr::io::load_ensemble(rom_ensemble);
            fr::PodBasis vel_basis = load_basis_for(rom_basis, "velocity", 0);
            fr::RomModel model = assemble_from_files(rom_bundle, rom_variant, rom_closure);
            require_same_hash(ensemble.case_hash, model.ops.case_hash, "ensemble vs bundle");
            if (vel_basis.rank != model.ops.velocity_rank) {
                throw fr::ConfigError("basis rank does not match the operator bundle");
            }
            Eigen::VectorXd a0 = fr::initial_coefficients(ensemble, vel_basis, rom_t0);
            double duration = rom_duration > 0.0 ? rom_duration : ensemble.horizon - rom_t0;
            double dt = rom_dt > 0.0 ? rom_dt : ensemble.snapshot_interval / 20.0;
            fr::RomTrajectory traj = fr::integrate(model, a0, rom_t0, rom_t0 + duration, dt,
                                                   ensemble.snapshot_interval);
            fr::io::save_trajectory_csv(traj, model, rom_out);
            std::cout << "trajectory: " << traj.num_times() << " samples"
                      << (traj.diverged ? " (diverged at t = " +
                                              std::to_string(traj.divergence_time) + ")"
                                        : "")
                      << "\n";
        } else if (*eval_cmd) {
            fr::SnapshotEnsemble ensemble = fr::io::load_ensemble(eval_ensemble);
            fr::io::LoadedTrajectory loaded = fr::io::load_trajectory_csv(eval_traj);
            const fr::RomTrajectory& traj = loaded.trajectory;
            std::filesystem::create_directories(eval_out);

            fr::PodBasis vel_basis =
                load_basis_for(eval_basis, "velocity", static_cast<int>(traj.a_u.rows()));
            fr::ModalTrajectory exact_u = fr::project_trajectory(vel_basis, ensemble);
            fr::ModalTrajectory pred_u{"velocity", traj.times, traj.a_u};
            fr::RmseReport rmse_u = fr::rmse_per_mode(pred_u, exact_u);
            rmse_u.variant = loaded.variant;
            write_rmse_csv(eval_out + "/rmse_velocity.csv", rmse_u);
            std::cout << "velocity rmse (mode 1): " << rmse_u.rmse[0] << "\n";

            std::optional<fr::PodBasis> p_basis;
            if (traj.a_p.rows() > 0 && ensemble.snapshots.count("p")) {
                p_basis = load_basis_for(eval_basis, "p", static_cast<int>(traj.a_p.rows()));
                fr::ModalTrajectory exact_p = fr::project_trajectory(*p_basis, ensemble);
                fr::ModalTrajectory pred_p{"p", traj.times, traj.a_p};
                fr::RmseReport rmse_p = fr::rmse_per_mode(pred_p, exact_p);
                rmse_p.variant = loaded.variant;
                write_rmse_csv(eval_out + "/rmse_pressure.csv", rmse_p);
            }

            // field deviations at the middle of the window
            int mid = traj.num_times() / 2;
            int snap = ensemble.snapshot_index_at(traj.times[mid]);
            Eigen::VectorXd u_rec = fr::reconstruct(vel_basis, traj.a_u.col(mid));
            fr::VectorField u_fields = fr::unstack(vel_basis, u_rec);
            std::vector<std::string> header{"variable", "time", "max_abs", "mean_abs", "rms"};
            std::vector<std::array<double, 4>> dev_rows;
            std::vector<std::string> dev_names;
            for (std::size_t k = 0; k < u_fields.size(); ++k) {
                const std::string& name = vel_basis.component_labels[k];
                double scale = ensemble.variable(name).cwiseAbs().maxCoeff();
                if (scale <= 0.0) scale = 1.0;
                auto dev = fr::field_deviation(u_fields[k], ensemble.field_at(name, snap), scale);
                dev_rows.push_back({traj.times[mid], dev.stats.max_abs, dev.stats.mean_abs,
                                    dev.stats.rms});
                dev_names.push_back(name);
            }
            if (p_basis) {
                Eigen::VectorXd p_rec = fr::reconstruct(*p_basis, traj.a_p.col(mid));
                fr::Field p_field("p", ensemble.grid, p_rec);
                double scale = ensemble.variable("p").cwiseAbs().maxCoeff();
                if (scale <= 0.0) scale = 1.0;
                auto dev = fr::field_deviation(p_field, ensemble.field_at("p", snap), scale);
                dev_rows.push_back({traj.times[mid], dev.stats.max_abs, dev.stats.mean_abs,
                                    dev.stats.rms});
                dev_names.push_back("p");
            }
            {
                std::ofstream out(eval_out + "/deviation_stats.csv");
                out << "variable,time,max_abs,mean_abs,rms\n";
                char buf[128];
                for (std::size_t i = 0; i < dev_rows.size(); ++i) {
                    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g\n",
                                  dev_names[i].c_str(), dev_rows[i][0], dev_rows[i][1],
                                  dev_rows[i][2], dev_rows[i][3]);
                    out << buf;
                }
            }

            // surface forces when the case has a body
            bool has_body = !ensemble.grid->faces_with_label(fr::BoundaryLabel::Body).empty();
            if (has_body && p_basis) {
                fr::Field nu_mean = fr::compute_mean(ensemble, "nu_t");
                fr::Field nu_eff("nu_e", ensemble.grid,
                                 (nu_mean.values.array() + ensemble.fluid.nu_m).matrix().eval());
                fr::ForceSeries rom_series, fom_series;
                for (int j = 0; j < traj.num_times(); ++j) {
                    fr::VectorField vel =
                        fr::unstack(vel_basis, fr::reconstruct(vel_basis, traj.a_u.col(j)));
                    fr::Field p("p", ensemble.grid,
                                fr::reconstruct(*p_basis, traj.a_p.col(j)));
                    fr::ForceSample s = fr::compute_forces(p, vel, nu_eff,
                                                           fr::BoundaryLabel::Body,
                                                           ensemble.fluid.rho, 0.0);
                    s.time = traj.times[j];
                    rom_series.samples.push_back(s);

                    int sj = ensemble.snapshot_index_at(traj.times[j]);
                    fr::VectorField vel_e = ensemble.velocity_at(sj);
                    fr::Field p_e = ensemble.field_at("p", sj);
                    fr::Field nu_e("nu_e", ensemble.grid,
                                   (ensemble.variable("nu_t").col(sj).array() +
                                    ensemble.fluid.nu_m)
                                       .matrix()
                                       .eval());
                    fr::ForceSample se = fr::compute_forces(p_e, vel_e, nu_e,
                                                            fr::BoundaryLabel::Body,
                                                            ensemble.fluid.rho, 0.0);
                    se.time = traj.times[j];
                    fom_series.samples.push_back(se);
                }
                std::vector<std::string> fh{"t", "fpx", "fpy", "fvx", "fvy", "fx", "fy"};
                fr::io::write_csv(eval_out + "/forces_rom.csv", fh, force_rows(rom_series));
                fr::io::write_csv(eval_out + "/forces_fom.csv", fh, force_rows(fom_series));
                if (eval_svg) {
                    std::vector<Eigen::VectorXd> series;
                    Eigen::MatrixXd rr = force_rows(rom_series), fr_ = force_rows(fom_series);
                    series.push_back(rr.col(6));
                    series.push_back(fr_.col(6));
                    fr::io::write_svg_lines(eval_out + "/force_fy.svg",
                                            "transverse force: rom vs fom", traj.times, series,
                                            {"rom", "fom"});
                }
            }

            if (eval_svg) {
                int show = std::min(3, static_cast<int>(traj.a_u.rows()));
                std::vector<Eigen::VectorXd> series;
                std::vector<std::string> labels;
                // exact columns resampled at the trajectory times
                for (int i = 0; i < show; ++i) {
                    series.push_back(traj.a_u.row(i));
                    labels.push_back("rom " + std::to_string(i + 1));
                }
                for (int i = 0; i < show; ++i) {
                    Eigen::VectorXd e(traj.num_times());
                    for (int j = 0; j < traj.num_times(); ++j) {
                        e[j] = exact_u.coefficients(i, ensemble.snapshot_index_at(traj.times[j]));
                    }
                    series.push_back(e);
                    labels.push_back("fom " + std::to_string(i + 1));
                }
                fr::io::write_svg_lines(eval_out + "/modes_velocity.svg",
                                        "velocity modal coefficients", traj.times, series, labels);
            }
        } else if (*bench_cmd) {
            fr::FomConfig config = fr::load_fom_config(bench_config);
            fr::SnapshotEnsemble ensemble = fr::io::load_ensemble(bench_ensemble);
            fr::PodBasis vel_basis = load_basis_for(bench_basis, "velocity", 0);
            fr::RomModel model = assemble_from_files(bench_bundle, bench_variant, bench_closure);
            Eigen::VectorXd a0 = fr::initial_coefficients(ensemble, vel_basis, 0.0);
            double rom_duration =
                bench_rom_duration > 0.0 ? bench_rom_duration : ensemble.horizon;
            fr::SpeedupReport report = fr::benchmark_speedup(
                config, model, a0, bench_fom_duration, rom_duration,
                ensemble.snapshot_interval / 20.0, ensemble.snapshot_interval);
            Eigen::MatrixXd row(1, 7);
            row << report.fom_seconds_per_sim_second, report.rom_seconds_per_sim_second,
                report.ratio, report.fom_cells, report.rom_modes,
                report.fom_measured_sim_seconds, report.rom_measured_sim_seconds;
            fr::io::write_csv(bench_out,
                              {"fom_s_per_sim_s", "rom_s_per_sim_s", "speedup", "fom_cells",
                               "rom_modes", "fom_measured_sim_s", "rom_measured_sim_s"},
                              row);
            std::cout << "speedup: " << report.ratio << " (fom "
                      << report.fom_seconds_per_sim_second << " s/s, rom "
                      << report.rom_seconds_per_sim_second << " s/s)\n";
        }
    } catch (const fr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
