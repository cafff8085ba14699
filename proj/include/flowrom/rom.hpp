#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "flowrom/closure.hpp"
#include "flowrom/galerkin.hpp"

namespace flowrom {

/// Natural cubic spline through given knots; exact at the knots and exact
/// for linear data.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> t, Eigen::VectorXd y);

    double operator()(double t) const;
    bool empty() const { return t_.empty(); }
    double t_front() const { return t_.front(); }
    double t_back() const { return t_.back(); }

private:
    std::vector<double> t_;
    Eigen::VectorXd y_;
    Eigen::VectorXd y2_;  // second derivatives at knots
};

enum class RomVariant { A, A1, B, C, D, E, F };

RomVariant rom_variant_from_string(const std::string& s);
std::string to_string(RomVariant variant);

enum class ClosureKind { None, Elm, Narx };

/// Required viscosity model and closure per model variant.
struct VariantTraits {
    ViscosityVariant viscosity;
    ClosureKind closure;
};

VariantTraits variant_traits(RomVariant variant);

struct ClosureModel {
    ClosureKind kind = ClosureKind::None;
    std::optional<ElmModel> elm;
    std::optional<NarxModel> narx;

    std::string case_hash() const;
};

/// Assembled model variant: operators plus the matching viscosity data and
/// optional closure, ready to integrate.
struct RomModel {
    RomVariant variant = RomVariant::A;
    GalerkinOperators ops;
    ClosureModel closure;
    CubicSpline a1_spline;
    // extension of a1(t) beyond the training window
    std::string a1_extension = "none";  // none | clamp | periodic
    double a1_period = 0.0;

    double a1vt(double t) const;
};

/// Validates the variant against the operator bundle's viscosity class and
/// the closure kind, and checks that all case hashes agree.
RomModel assemble_model(RomVariant variant, const GalerkinOperators& ops,
                        const ClosureModel& closure);

struct RomTrajectory {
    std::vector<double> times;
    Eigen::MatrixXd a_u;      // velocity_rank x num_times
    Eigen::MatrixXd a_p;      // pressure_rank x num_times
    Eigen::MatrixXd closure;  // velocity_rank x num_times (zero without closure)
    bool diverged = false;
    double divergence_time = 0.0;
    double seconds_per_step = 0.0;  // mean wall-clock cost, not serialized

    int num_times() const { return static_cast<int>(times.size()); }
};

/// Classical RK4 on da/dt = eval_rhs(a, a_p(a), a1(t)) + closure, with the
/// pressure coefficients solved at every stage. The closure term is
/// evaluated once per step from the step-start right-hand side and held
/// constant across stages. Divergence (|a| above 1e6 times the initial
/// norm) halts integration and marks the partial trajectory.
RomTrajectory integrate(const RomModel& model, const Eigen::VectorXd& a0_u, double t0, double t1,
                        double dt, double output_interval);

/// Projection of the snapshot at time t0 (must be an ensemble time).
Eigen::VectorXd initial_coefficients(const SnapshotEnsemble& ensemble, const PodBasis& basis,
                                     double t0);

/// Dominant period of a uniformly sampled series from its autocorrelation;
/// 0 when no convincing peak exists.
double dominant_period(const Eigen::VectorXd& values, double dt);

}  // namespace flowrom
