#include "flowrom/rom.hpp"

#include <chrono>
#include <cmath>

namespace flowrom {

CubicSpline::CubicSpline(std::vector<double> t, Eigen::VectorXd y)
    : t_(std::move(t)), y_(std::move(y)) {
    if (t_.empty() || static_cast<int>(t_.size()) != y_.size()) {
        throw DimensionError("spline needs matching, non-empty knot vectors");
    }
    const int n = static_cast<int>(t_.size());
    y2_ = Eigen::VectorXd::Zero(n);
    if (n < 3) return;  // natural spline through <3 points is linear

    // tridiagonal solve for second derivatives, natural end conditions
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    for (int i = 1; i < n - 1; ++i) {
        double sig = (t_[i] - t_[i - 1]) / (t_[i + 1] - t_[i - 1]);
        double p = sig * y2_[i - 1] + 2.0;
        y2_[i] = (sig - 1.0) / p;
        double d = (y_[i + 1] - y_[i]) / (t_[i + 1] - t_[i]) -
                   (y_[i] - y_[i - 1]) / (t_[i] - t_[i - 1]);
        u[i] = (6.0 * d / (t_[i + 1] - t_[i - 1]) - sig * u[i - 1]) / p;
    }
    for (int i = n - 2; i >= 1; --i) y2_[i] = y2_[i] * y2_[i + 1] + u[i];
    y2_[0] = 0.0;
    y2_[n - 1] = 0.0;
}

double CubicSpline::operator()(double t) const {
    if (t_.empty()) throw ConfigError("evaluation of an empty spline");
    const int n = static_cast<int>(t_.size());
    if (n == 1) return y_[0];
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        if (t_[mid] > t) hi = mid;
        else lo = mid;
    }
    double h = t_[hi] - t_[lo];
    double a = (t_[hi] - t) / h;
    double b = (t - t_[lo]) / h;
    return a * y_[lo] + b * y_[hi] +
           ((a * a * a - a) * y2_[lo] + (b * b * b - b) * y2_[hi]) * h * h / 6.0;
}

RomVariant rom_variant_from_string(const std::string& s) {
    if (s == "A") return RomVariant::A;
    if (s == "A1") return RomVariant::A1;
    if (s == "B") return RomVariant::B;
    if (s == "C") return RomVariant::C;
    if (s == "D") return RomVariant::D;
    if (s == "E") return RomVariant::E;
    if (s == "F") return RomVariant::F;
    throw ConfigError("unknown model variant '" + s + "' (expected A, A1, B, C, D, E or F)");
}

std::string to_string(RomVariant variant) {
    switch (variant) {
        case RomVariant::A: return "A";
        case RomVariant::A1: return "A1";
        case RomVariant::B: return "B";
        case RomVariant::C: return "C";
        case RomVariant::D: return "D";
        case RomVariant::E: return "E";
        case RomVariant::F: return "F";
    }
    return "?";
}

VariantTraits variant_traits(RomVariant variant) {
    switch (variant) {
        case RomVariant::A: return {ViscosityVariant::SpatioTemporalMean, ClosureKind::None};
        case RomVariant::A1: return {ViscosityVariant::SpatioTemporalMean, ClosureKind::Elm};
        case RomVariant::B: return {ViscosityVariant::TemporalMean, ClosureKind::None};
        case RomVariant::C: return {ViscosityVariant::TemporalMeanPlusMode1, ClosureKind::None};
        case RomVariant::D: return {ViscosityVariant::TemporalMean, ClosureKind::Elm};
        case RomVariant::E: return {ViscosityVariant::TemporalMeanPlusMode1, ClosureKind::Elm};
        case RomVariant::F: return {ViscosityVariant::TemporalMean, ClosureKind::Narx};
    }
    throw ConfigError("unhandled variant");
}

std::string ClosureModel::case_hash() const {
    if (kind == ClosureKind::Elm && elm) return elm->case_hash;
    if (kind == ClosureKind::Narx && narx) return narx->case_hash;
    return {};
}

double RomModel::a1vt(double t) const {
    if (!ops.has_mode1()) return 0.0;
    if (a1_spline.empty()) throw ConfigError("variant-3 model without a1 spline knots");
    double lo = a1_spline.t_front(), hi = a1_spline.t_back();
    if (t < lo) return a1_spline(lo);
    if (t <= hi) return a1_spline(t);
    if (a1_extension == "periodic" && a1_period > 0.0) {
        double shifted = t - a1_period * std::ceil((t - hi) / a1_period);
        return a1_spline(shifted);
    }
    return a1_spline(hi);
}

double dominant_period(const Eigen::VectorXd& values, double dt) {
    const int n = static_cast<int>(values.size());
    if (n < 8) return 0.0;
    Eigen::VectorXd x = values.array() - values.mean();
    double denom = x.squaredNorm();
    if (denom <= 0.0) return 0.0;
    int max_lag = n / 2;
    Eigen::VectorXd corr(max_lag + 1);
    corr[0] = 1.0;
    for (int lag = 1; lag <= max_lag; ++lag) {
        corr[lag] = x.head(n - lag).dot(x.tail(n - lag)) / denom;
    }
    for (int lag = 2; lag < max_lag; ++lag) {
        if (corr[lag] > 0.5 && corr[lag] >= corr[lag - 1] && corr[lag] >= corr[lag + 1]) {
            return lag * dt;
        }
    }
    return 0.0;
}

RomModel assemble_model(RomVariant variant, const GalerkinOperators& ops,
                        const ClosureModel& closure) {
    VariantTraits traits = variant_traits(variant);
    if (ops.variant != traits.viscosity) {
        throw ConfigError("variant " + to_string(variant) + " needs viscosity model " +
                          std::to_string(static_cast<int>(traits.viscosity)) +
                          " but the operator bundle was built with model " +
                          std::to_string(static_cast<int>(ops.variant)));
    }
    if (closure.kind != traits.closure) {
        auto name = [](ClosureKind k) {
            return k == ClosureKind::None ? "no closure"
                                          : (k == ClosureKind::Elm ? "an ELM closure"
                                                                   : "a NARX closure");
        };
        throw ConfigError("variant " + to_string(variant) + " requires " + name(traits.closure) +
                          ", got " + name(closure.kind));
    }
    if (closure.kind == ClosureKind::Elm) {
        if (!closure.elm) throw ConfigError("ELM closure model missing");
        if (closure.elm->input_dim != ops.velocity_rank) {
            throw DimensionError("closure input dimension does not match the velocity rank");
        }
    }
    if (closure.kind == ClosureKind::Narx) {
        if (!closure.narx) throw ConfigError("NARX closure model missing");
        if (closure.narx->feature_dim != ops.velocity_rank) {
            throw DimensionError("closure feature dimension does not match the velocity rank");
        }
    }
    std::string closure_hash = closure.case_hash();
    if (!closure_hash.empty() && !ops.case_hash.empty() && closure_hash != ops.case_hash) {
        throw ConfigError("case hash mismatch between operators (" + ops.case_hash +
                          ") and closure (" + closure_hash + ")");
    }

    RomModel model;
    model.variant = variant;
    model.ops = ops;
    model.closure = closure;
    if (ops.has_mode1()) {
        if (ops.a1_times.empty()) throw ConfigError("variant-3 bundle without a1 knots");
        model.a1_spline = CubicSpline(ops.a1_times, ops.a1_values);
        double dt = ops.a1_times.size() > 1 ? ops.a1_times[1] - ops.a1_times[0] : 0.0;
        double period = dt > 0.0 ? dominant_period(ops.a1_values, dt) : 0.0;
        if (period > 0.0) {
            model.a1_extension = "periodic";
            model.a1_period = period;
        } else {
            model.a1_extension = "clamp";
        }
    }
    return model;
}

RomTrajectory integrate(const RomModel& model, const Eigen::VectorXd& a0_u, double t0, double t1,
                        double dt, double output_interval) {
    const GalerkinOperators& ops = model.ops;
    if (a0_u.size() != ops.velocity_rank) {
        throw DimensionError("initial coefficient length does not match the velocity rank");
    }
    if (!(dt > 0.0) || !(output_interval > 0.0) || !(t1 > t0)) {
        throw ConfigError("integrate needs dt > 0, output_interval > 0 and t1 > t0");
    }

    int substeps = std::max(1, static_cast<int>(std::lround(output_interval / dt)));
    double dt_eff = output_interval / substeps;
    int num_outputs = static_cast<int>(std::lround((t1 - t0) / output_interval)) + 1;

    RomTrajectory traj;
    traj.a_u.resize(ops.velocity_rank, num_outputs);
    traj.a_p.resize(ops.pressure_rank, num_outputs);
    traj.closure.setZero(ops.velocity_rank, num_outputs);

    Eigen::VectorXd a = a0_u;
    double divergence_threshold = 1e6 * std::max(a.norm(), 1e-8);

    // NARX closed-loop state
    Eigen::VectorXd r_prev, rt_prev;
    bool narx_started = false;

    auto rhs_at = [&](const Eigen::VectorXd& au, double t) {
        Eigen::VectorXd ap = solve_pressure_coefficients(ops, au);
        return eval_rhs(ops, au, ap, model.a1vt(t));
    };

    auto closure_term = [&](const Eigen::VectorXd& r_now) -> Eigen::VectorXd {
        switch (model.closure.kind) {
            case ClosureKind::None: return Eigen::VectorXd();
            case ClosureKind::Elm: return elm_predict(*model.closure.elm, r_now);
            case ClosureKind::Narx: {
                if (!narx_started) {
                    r_prev = r_now;
                    rt_prev = Eigen::VectorXd::Zero(ops.velocity_rank);
                    narx_started = true;
                }
                Eigen::VectorXd out = narx_predict(*model.closure.narx, r_now, r_prev, rt_prev);
                r_prev = r_now;
                rt_prev = out;
                return out;
            }
        }
        return Eigen::VectorXd();
    };

    auto record = [&](int idx, double t) {
        traj.times.push_back(t);
        traj.a_u.col(idx) = a;
        traj.a_p.col(idx) = solve_pressure_coefficients(ops, a);
        if (model.closure.kind != ClosureKind::None) {
            // reported value: the closure output for the state at this time
            Eigen::VectorXd r_now = eval_rhs(ops, a, traj.a_p.col(idx), model.a1vt(t));
            if (model.closure.kind == ClosureKind::Elm) {
                traj.closure.col(idx) = elm_predict(*model.closure.elm, r_now);
            } else if (narx_started) {
                traj.closure.col(idx) = rt_prev;
            }
        }
    };

    auto start = std::chrono::steady_clock::now();
    long total_steps = 0;
    record(0, t0);
    for (int out = 1; out < num_outputs && !traj.diverged; ++out) {
        for (int s = 0; s < substeps; ++s) {
            double t = t0 + (out - 1) * output_interval + s * dt_eff;
            Eigen::VectorXd r_start = rhs_at(a, t);
            Eigen::VectorXd corr = closure_term(r_start);

            auto f = [&](const Eigen::VectorXd& au, double ts) {
                Eigen::VectorXd k = rhs_at(au, ts);
                if (corr.size()) k += corr;
                return k;
            };
            Eigen::VectorXd k1 = f(a, t);
            Eigen::VectorXd k2 = f(a + 0.5 * dt_eff * k1, t + 0.5 * dt_eff);
            Eigen::VectorXd k3 = f(a + 0.5 * dt_eff * k2, t + 0.5 * dt_eff);
            Eigen::VectorXd k4 = f(a + dt_eff * k3, t + dt_eff);
            a += (dt_eff / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            ++total_steps;

            if (!a.allFinite() || a.norm() > divergence_threshold) {
                traj.diverged = true;
                traj.divergence_time = t + dt_eff;
                break;
            }
        }
        if (!traj.diverged) record(out, t0 + out * output_interval);
    }
    auto stop = std::chrono::steady_clock::now();
    if (total_steps > 0) {
        traj.seconds_per_step =
            std::chrono::duration<double>(stop - start).count() / static_cast<double>(total_steps);
    }

    // shrink to the recorded prefix on divergence
    int recorded = static_cast<int>(traj.times.size());
    traj.a_u.conservativeResize(Eigen::NoChange, recorded);
    traj.a_p.conservativeResize(Eigen::NoChange, recorded);
    traj.closure.conservativeResize(Eigen::NoChange, recorded);
    return traj;
}

Eigen::VectorXd initial_coefficients(const SnapshotEnsemble& ensemble, const PodBasis& basis,
                                     double t0) {
    int j = ensemble.snapshot_index_at(t0);
    return project_coefficients(basis, stacked_snapshot(ensemble, basis, j));
}

}  // namespace flowrom
