#include "flowrom/closure.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "flowrom/rng.hpp"

namespace flowrom {

ResidualDataset build_residual_dataset(const SnapshotEnsemble& ensemble,
                                       const PodBasis& velocity_basis,
                                       const GalerkinOperators& ops) {
    const int m = ensemble.num_snapshots();
    if (m < 3) {
        throw DimensionError("residual dataset needs at least 3 snapshots for differentiation");
    }
    if (velocity_basis.rank != ops.velocity_rank) {
        throw DimensionError("velocity basis rank does not match operators");
    }
    if (ops.has_mode1() && ops.a1_values.size() != m) {
        throw ConfigError("operator a1 knots do not align with the ensemble times");
    }

    ModalTrajectory traj = project_trajectory(velocity_basis, ensemble);
    const Eigen::MatrixXd& a = traj.coefficients;
    double dt = ensemble.times[1] - ensemble.times[0];

    ResidualDataset dataset;
    dataset.times = ensemble.times;
    dataset.case_hash = ensemble.case_hash;
    dataset.inputs.resize(velocity_basis.rank, m);
    dataset.targets.resize(velocity_basis.rank, m);

    Eigen::MatrixXd dadt(velocity_basis.rank, m);
    dadt.col(0) = (-3.0 * a.col(0) + 4.0 * a.col(1) - a.col(2)) / (2.0 * dt);
    for (int j = 1; j < m - 1; ++j) {
        dadt.col(j) = (a.col(j + 1) - a.col(j - 1)) / (2.0 * dt);
    }
    dadt.col(m - 1) = (3.0 * a.col(m - 1) - 4.0 * a.col(m - 2) + a.col(m - 3)) / (2.0 * dt);

    for (int j = 0; j < m; ++j) {
        double a1vt = ops.has_mode1() ? ops.a1_values[j] : 0.0;
        Eigen::VectorXd a_p = solve_pressure_coefficients(ops, a.col(j));
        dataset.inputs.col(j) = eval_rhs(ops, a.col(j), a_p, a1vt);
        dataset.targets.col(j) = dadt.col(j) - dataset.inputs.col(j);
    }
    return dataset;
}

// ---------------------------------------------------------------------------
// ELM
// ---------------------------------------------------------------------------

ElmModel elm_train(const ResidualDataset& dataset, int hidden, std::uint64_t seed, double ridge) {
    if (dataset.num_samples() < 1) throw ConfigError("ELM training needs a non-empty dataset");
    if (hidden < 1) throw ConfigError("ELM hidden size must be positive");

    ElmModel model;
    model.input_dim = dataset.feature_dim();
    model.output_dim = dataset.feature_dim();
    model.hidden = hidden;
    model.seed = seed;
    model.ridge = ridge;
    model.case_hash = dataset.case_hash;

    Rng rng(seed);
    model.w1.resize(hidden, model.input_dim);
    for (int h = 0; h < hidden; ++h) {
        for (int i = 0; i < model.input_dim; ++i) model.w1(h, i) = rng.uniform_pm1();
    }
    model.b1.resize(hidden);
    for (int h = 0; h < hidden; ++h) model.b1[h] = rng.uniform_pm1();

    const int m = dataset.num_samples();
    Eigen::MatrixXd h_mat =
        ((model.w1 * dataset.inputs).colwise() + model.b1).array().tanh().matrix().transpose();
    Eigen::MatrixXd t_mat = dataset.targets.transpose();  // m x r

    if (ridge > 0.0) {
        Eigen::MatrixXd gram = h_mat.transpose() * h_mat;
        gram.diagonal().array() += ridge;
        model.w2 = gram.ldlt().solve(h_mat.transpose() * t_mat);
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(h_mat,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sv = svd.singularValues();
        double cutoff = sv.size() ? 1e-12 * sv[0] : 0.0;
        Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
        for (int i = 0; i < sv.size(); ++i) {
            if (sv[i] > cutoff) inv_sv[i] = 1.0 / sv[i];
            else ++model.sv_cutoff_count;
        }
        model.w2 = svd.matrixV() * inv_sv.asDiagonal() * (svd.matrixU().transpose() * t_mat);
    }

    double sse = (h_mat * model.w2 - t_mat).squaredNorm();
    model.train_rmse = std::sqrt(sse / (static_cast<double>(m) * model.output_dim));
    model.train_predictions.resize(model.output_dim, m);
    for (int j = 0; j < m; ++j) {
        model.train_predictions.col(j) = elm_predict(model, dataset.inputs.col(j));
    }
    return model;
}

Eigen::VectorXd elm_predict(const ElmModel& model, const Eigen::VectorXd& input) {
    if (input.size() != model.input_dim) {
        throw DimensionError("ELM input length " + std::to_string(input.size()) +
                             " does not match trained dimension " +
                             std::to_string(model.input_dim));
    }
    Eigen::VectorXd g = (model.w1 * input + model.b1).array().tanh();
    return model.w2.transpose() * g;
}

// ---------------------------------------------------------------------------
// NARX
// ---------------------------------------------------------------------------

void MinMaxScaler::fit(const Eigen::MatrixXd& columns) {
    min = columns.rowwise().minCoeff();
    max = columns.rowwise().maxCoeff();
}

Eigen::VectorXd MinMaxScaler::normalize(const Eigen::VectorXd& x) const {
    if (x.size() != min.size()) throw DimensionError("scaler dimension mismatch");
    Eigen::VectorXd out(x.size());
    for (int i = 0; i < x.size(); ++i) {
        double width = max[i] - min[i];
        out[i] = width > 0.0 ? 2.0 * (x[i] - min[i]) / width - 1.0 : 0.0;
    }
    return out;
}

Eigen::VectorXd MinMaxScaler::denormalize(const Eigen::VectorXd& y) const {
    if (y.size() != min.size()) throw DimensionError("scaler dimension mismatch");
    Eigen::VectorXd out(y.size());
    for (int i = 0; i < y.size(); ++i) {
        double width = max[i] - min[i];
        out[i] = width > 0.0 ? min[i] + 0.5 * (y[i] + 1.0) * width : min[i];
    }
    return out;
}

namespace {

struct NarxParams {
    Eigen::MatrixXd w1;  // h x 3r
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;  // r x h
    Eigen::VectorXd b2;

    int count() const {
        return static_cast<int>(w1.size() + b1.size() + w2.size() + b2.size());
    }
    Eigen::VectorXd pack() const {
        Eigen::VectorXd theta(count());
        int off = 0;
        theta.segment(off, w1.size()) = Eigen::Map<const Eigen::VectorXd>(w1.data(), w1.size());
        off += static_cast<int>(w1.size());
        theta.segment(off, b1.size()) = b1;
        off += static_cast<int>(b1.size());
        theta.segment(off, w2.size()) = Eigen::Map<const Eigen::VectorXd>(w2.data(), w2.size());
        off += static_cast<int>(w2.size());
        theta.segment(off, b2.size()) = b2;
        return theta;
    }
    void unpack(const Eigen::VectorXd& theta) {
        int off = 0;
        Eigen::Map<Eigen::VectorXd>(w1.data(), w1.size()) = theta.segment(off, w1.size());
        off += static_cast<int>(w1.size());
        b1 = theta.segment(off, b1.size());
        off += static_cast<int>(b1.size());
        Eigen::Map<Eigen::VectorXd>(w2.data(), w2.size()) = theta.segment(off, w2.size());
        off += static_cast<int>(w2.size());
        b2 = theta.segment(off, b2.size());
    }
};

double block_sse(const NarxParams& p, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                 int first, int count) {
    if (count <= 0) return 0.0;
    Eigen::MatrixXd g =
        ((p.w1 * x.middleCols(first, count)).colwise() + p.b1).array().tanh().matrix();
    Eigen::MatrixXd e = ((p.w2 * g).colwise() + p.b2) - y.middleCols(first, count);
    return e.squaredNorm();
}

}  // namespace

NarxModel narx_train(const ResidualDataset& dataset, const NarxTrainConfig& config) {
    const int m = dataset.num_samples();
    const int r = dataset.feature_dim();
    const int n = m - 1;  // delay-1 samples
    if (n < 10) throw ConfigError("NARX training needs at least 10 delay samples");

    NarxModel model;
    model.feature_dim = r;
    model.hidden = config.hidden;
    model.seed = config.seed;
    model.case_hash = dataset.case_hash;
    model.input_scaler.fit(dataset.inputs);
    model.output_scaler.fit(dataset.targets);

    // normalized teacher-forced samples: [R_j, R_{j-1}, Rt_{j-1}] -> Rt_j
    Eigen::MatrixXd x(3 * r, n), y(r, n);
    for (int s = 0; s < n; ++s) {
        int j = s + 1;
        x.block(0, s, r, 1) = model.input_scaler.normalize(dataset.inputs.col(j));
        x.block(r, s, r, 1) = model.input_scaler.normalize(dataset.inputs.col(j - 1));
        x.block(2 * r, s, r, 1) = model.output_scaler.normalize(dataset.targets.col(j - 1));
        y.col(s) = model.output_scaler.normalize(dataset.targets.col(j));
    }

    int n_train = static_cast<int>(std::floor(config.train_frac * n));
    int n_val = static_cast<int>(std::floor(config.val_frac * n));
    int n_test = n - n_train - n_val;
    if (n_train < 1) throw ConfigError("NARX training block is empty");

    const int h = config.hidden;
    NarxParams p;
    p.w1.resize(h, 3 * r);
    p.b1.resize(h);
    p.w2.resize(r, h);
    p.b2.resize(r);
    Rng rng(config.seed);
    double w1_scale = 1.0 / std::sqrt(3.0 * r);
    for (int i = 0; i < 3 * r; ++i) {
        for (int hh = 0; hh < h; ++hh) p.w1(hh, i) = w1_scale * rng.uniform_pm1();
    }
    for (int hh = 0; hh < h; ++hh) p.b1[hh] = rng.uniform_pm1();
    double w2_scale = 1.0 / std::sqrt(static_cast<double>(h));
    for (int i = 0; i < h; ++i) {
        for (int k = 0; k < r; ++k) p.w2(k, i) = w2_scale * rng.uniform_pm1();
    }
    p.b2.setZero();

    const int n_param = p.count();
    const int n_res = n_train * r;
    Eigen::MatrixXd jac(n_res, n_param);
    Eigen::VectorXd errors(n_res);

    auto fill_jacobian = [&](const NarxParams& q) {
        for (int s = 0; s < n_train; ++s) {
            Eigen::VectorXd xs = x.col(s);
            Eigen::VectorXd z = q.w1 * xs + q.b1;
            Eigen::VectorXd g = z.array().tanh();
            Eigen::VectorXd gp = 1.0 - g.array().square();
            Eigen::VectorXd ys = q.w2 * g + q.b2;
            for (int k = 0; k < r; ++k) {
                int row = s * r + k;
                errors[row] = ys[k] - y(k, s);
                // w1 block (col-major: (hh, i) -> i * h + hh)
                for (int i = 0; i < 3 * r; ++i) {
                    for (int hh = 0; hh < h; ++hh) {
                        jac(row, i * h + hh) = q.w2(k, hh) * gp[hh] * xs[i];
                    }
                }
                int off = 3 * r * h;
                for (int hh = 0; hh < h; ++hh) jac(row, off + hh) = q.w2(k, hh) * gp[hh];
                off += h;
                // w2 block (col-major: (k, hh) -> hh * r + k)
                for (int i = 0; i < h * r; ++i) jac(row, off + i) = 0.0;
                for (int hh = 0; hh < h; ++hh) jac(row, off + hh * r + k) = g[hh];
                off += h * r;
                for (int i = 0; i < r; ++i) jac(row, off + i) = i == k ? 1.0 : 0.0;
            }
        }
    };

    double mu = config.mu0;
    double sse = block_sse(p, x, y, 0, n_train);
    const double sse_initial = sse;
    double best_val = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_val_theta = p.pack();
    bool stopped_on_val = false;
    int val_fails = 0;
    std::string stop_reason = "max_epochs";
    double grad_norm = std::numeric_limits<double>::infinity();
    int epoch = 0;

    while (epoch < config.max_epochs) {
        fill_jacobian(p);
        Eigen::VectorXd grad = jac.transpose() * errors;
        grad_norm = grad.lpNorm<Eigen::Infinity>();
        if (grad_norm <= config.min_grad) {
            stop_reason = "min_grad";
            break;
        }
        Eigen::MatrixXd hess = jac.transpose() * jac;

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd damped = hess;
            damped.diagonal().array() += mu;
            Eigen::VectorXd delta = damped.ldlt().solve(-grad);
            NarxParams trial = p;
            trial.unpack(p.pack() + delta);
            double trial_sse = block_sse(trial, x, y, 0, n_train);
            if (trial_sse < sse) {
                p = trial;
                sse = trial_sse;
                mu = std::max(mu * config.mu_dec, 1e-20);
                accepted = true;
            } else {
                mu *= config.mu_inc;
                if (mu > config.mu_max) {
                    if (sse < sse_initial) {
                        stop_reason = "mu_max";
                    } else {
                        throw TrainingError(
                            "Levenberg-Marquardt diverged: mu = " + std::to_string(mu) +
                            " exceeded " + std::to_string(config.mu_max) + " at epoch " +
                            std::to_string(epoch) + " with SSE " + std::to_string(sse) +
                            " (initial " + std::to_string(sse_initial) + ")");
                    }
                    break;
                }
            }
        }
        if (!accepted) break;  // mu_max with progress
        ++epoch;

        if (n_val > 0) {
            double val = block_sse(p, x, y, n_train, n_val);
            if (val < best_val) {
                best_val = val;
                best_val_theta = p.pack();
                val_fails = 0;
            } else if (++val_fails > config.max_val_fail) {
                stop_reason = "validation";
                stopped_on_val = true;
                break;
            }
        }
    }
    if (stopped_on_val) p.unpack(best_val_theta);

    model.w1 = p.w1;
    model.b1 = p.b1;
    model.w2 = p.w2;
    model.b2 = p.b2;
    model.report.epochs = epoch;
    model.report.final_gradient_norm = grad_norm;
    model.report.stop_reason = stop_reason;
    model.report.train_count = n_train;
    model.report.val_count = n_val;
    model.report.test_count = n_test;
    model.report.train_mse = narx_open_loop_mse(model, dataset, 0, n_train);
    model.report.val_mse = narx_open_loop_mse(model, dataset, n_train, n_val);
    model.report.test_mse = narx_open_loop_mse(model, dataset, n_train + n_val, n_test);
    return model;
}

namespace {

Eigen::VectorXd narx_forward_normalized(const NarxModel& model, const Eigen::VectorXd& x_norm) {
    Eigen::VectorXd g = (model.w1 * x_norm + model.b1).array().tanh();
    Eigen::VectorXd y = model.w2 * g + model.b2;
    return y.cwiseMax(-model.clamp).cwiseMin(model.clamp);
}

}  // namespace

Eigen::VectorXd narx_predict(const NarxModel& model, const Eigen::VectorXd& r_now,
                             const Eigen::VectorXd& r_prev, const Eigen::VectorXd& rt_prev) {
    const int r = model.feature_dim;
    if (r_now.size() != r || r_prev.size() != r || rt_prev.size() != r) {
        throw DimensionError("NARX inputs do not match the trained feature dimension");
    }
    Eigen::VectorXd x(3 * r);
    x.segment(0, r) = model.input_scaler.normalize(r_now);
    x.segment(r, r) = model.input_scaler.normalize(r_prev);
    x.segment(2 * r, r) = model.output_scaler.normalize(rt_prev);
    return model.output_scaler.denormalize(narx_forward_normalized(model, x));
}

double narx_open_loop_mse(const NarxModel& model, const ResidualDataset& dataset, int first,
                          int count) {
    if (count <= 0) return 0.0;
    const int r = model.feature_dim;
    double sse = 0.0;
    for (int s = first; s < first + count; ++s) {
        int j = s + 1;
        Eigen::VectorXd x(3 * r);
        x.segment(0, r) = model.input_scaler.normalize(dataset.inputs.col(j));
        x.segment(r, r) = model.input_scaler.normalize(dataset.inputs.col(j - 1));
        x.segment(2 * r, r) = model.output_scaler.normalize(dataset.targets.col(j - 1));
        Eigen::VectorXd y = narx_forward_normalized(model, x);
        Eigen::VectorXd t = model.output_scaler.normalize(dataset.targets.col(j));
        sse += (y - t).squaredNorm();
    }
    return sse / (static_cast<double>(count) * r);
}

}  // namespace flowrom
