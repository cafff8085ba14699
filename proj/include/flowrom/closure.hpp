#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "flowrom/ensemble.hpp"
#include "flowrom/galerkin.hpp"
#include "flowrom/pod.hpp"

namespace flowrom {

/// Residual training data: columns are snapshot times, rows the velocity
/// mode equations. inputs = projected right-hand side R evaluated from the
/// operators; targets = (d a / d t) - R, the part the closure must supply.
struct ResidualDataset {
    std::vector<double> times;
    Eigen::MatrixXd inputs;   // r x M
    Eigen::MatrixXd targets;  // r x M
    std::string case_hash;

    int feature_dim() const { return static_cast<int>(inputs.rows()); }
    int num_samples() const { return static_cast<int>(inputs.cols()); }
};

/// Builds the residual dataset from an ensemble and operator bundle. The
/// coefficient time derivative uses second-order central differences with
/// one-sided second-order stencils at the endpoints; the pressure
/// coefficients come from the projected pressure equation.
ResidualDataset build_residual_dataset(const SnapshotEnsemble& ensemble,
                                       const PodBasis& velocity_basis,
                                       const GalerkinOperators& ops);

// ---------------------------------------------------------------------------
// Extreme learning machine
// ---------------------------------------------------------------------------

/// Single hidden layer with fixed random input weights; the output weights
/// are the least-squares solution via an SVD pseudo-inverse.
struct ElmModel {
    int input_dim = 0;
    int hidden = 10;
    int output_dim = 0;
    std::uint64_t seed = 0;
    double ridge = 0.0;
    Eigen::MatrixXd w1;  // hidden x input, fixed random
    Eigen::VectorXd b1;  // hidden, fixed random
    Eigen::MatrixXd w2;  // hidden x output, fitted
    int sv_cutoff_count = 0;   // singular values below the relative cutoff
    double train_rmse = 0.0;
    Eigen::MatrixXd train_predictions;  // output x M, via the predict path
    std::string case_hash;
};

ElmModel elm_train(const ResidualDataset& dataset, int hidden = 10, std::uint64_t seed = 0,
                   double ridge = 0.0);

Eigen::VectorXd elm_predict(const ElmModel& model, const Eigen::VectorXd& input);

// ---------------------------------------------------------------------------
// NARX
// ---------------------------------------------------------------------------

/// Per-feature min-max map onto [-1, 1]. Zero-width features map to 0 and
/// de-normalize to the (constant) midpoint.
struct MinMaxScaler {
    Eigen::VectorXd min, max;

    void fit(const Eigen::MatrixXd& columns);
    Eigen::VectorXd normalize(const Eigen::VectorXd& x) const;
    Eigen::VectorXd denormalize(const Eigen::VectorXd& y) const;
};

struct NarxTrainConfig {
    int hidden = 10;
    std::uint64_t seed = 0;
    int max_epochs = 1000;
    double min_grad = 1e-15;
    double mu0 = 1e-3;
    double mu_inc = 10.0;
    double mu_dec = 0.1;
    double mu_max = 1e10;
    int max_val_fail = 6;
    double train_frac = 0.8;
    double val_frac = 0.15;
};

struct NarxTrainReport {
    int epochs = 0;
    double final_gradient_norm = 0.0;
    double train_mse = 0.0;  // normalized space, open loop
    double val_mse = 0.0;
    double test_mse = 0.0;
    int train_count = 0, val_count = 0, test_count = 0;
    std::string stop_reason;
};

/// One-hidden-layer recurrent closure with input delay 1 and feedback
/// delay 1, trained open loop (teacher forcing) with Levenberg-Marquardt
/// and deployed closed loop.
struct NarxModel {
    int feature_dim = 0;  // r: inputs are [R_t, R_{t-1}, Rt_{t-1}]
    int hidden = 10;
    std::uint64_t seed = 0;
    double clamp = 1.5;  // on normalized outputs
    Eigen::MatrixXd w1;  // hidden x 3r
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;  // r x hidden
    Eigen::VectorXd b2;
    MinMaxScaler input_scaler;   // over r input features
    MinMaxScaler output_scaler;  // over r target features
    NarxTrainReport report;
    std::string case_hash;
};

NarxModel narx_train(const ResidualDataset& dataset, const NarxTrainConfig& config = {});

/// Closed-loop evaluation: the caller feeds back its own previous
/// prediction (zero on the first step).
Eigen::VectorXd narx_predict(const NarxModel& model, const Eigen::VectorXd& r_now,
                             const Eigen::VectorXd& r_prev, const Eigen::VectorXd& rt_prev);

/// Open-loop (teacher-forced) normalized MSE over a sample range; the same
/// routine fills the training report, so replaying reproduces it exactly.
double narx_open_loop_mse(const NarxModel& model, const ResidualDataset& dataset, int first,
                          int count);

}  // namespace flowrom
