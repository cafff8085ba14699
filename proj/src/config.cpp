#include "flowrom/config.hpp"

#include <cmath>
#include <fstream>

namespace flowrom {

CaseKind case_kind_from_string(const std::string& s) {
    if (s == "burgers1d") return CaseKind::Burgers1d;
    if (s == "ns2d_obstacle") return CaseKind::Ns2dObstacle;
    if (s == "ns2d_periodic") return CaseKind::Ns2dPeriodic;
    throw ConfigError("unknown case kind '" + s + "'");
}

std::string to_string(CaseKind kind) {
    switch (kind) {
        case CaseKind::Burgers1d: return "burgers1d";
        case CaseKind::Ns2dObstacle: return "ns2d_obstacle";
        case CaseKind::Ns2dPeriodic: return "ns2d_periodic";
    }
    return "?";
}

void FomConfig::validate() const {
    flowrom::validate(fluid);
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(snapshot_interval > 0.0)) throw ConfigError("snapshot interval must be positive");
    double ratio = snapshot_interval / dt;
    if (std::abs(ratio - std::lround(ratio)) > 1e-9 * ratio) {
        throw ConfigError("snapshot interval must be an integer multiple of dt");
    }
    if (horizon < snapshot_interval - 1e-12) {
        throw ConfigError("horizon must be at least one snapshot interval");
    }
    if (spin_up < 0.0) throw ConfigError("spin-up must be non-negative");
    if (kind == CaseKind::Burgers1d) {
        if (grid.ny != 1) throw ConfigError("burgers1d requires ny == 1");
        if (!grid.periodic_x) throw ConfigError("burgers1d requires a periodic grid");
    } else {
        if (grid.ny < 2) throw ConfigError("2D cases require ny >= 2");
    }
    if (kind == CaseKind::Ns2dPeriodic && !(grid.periodic_x && grid.periodic_y)) {
        throw ConfigError("ns2d_periodic requires periodicity in both directions");
    }
    if (kind == CaseKind::Ns2dObstacle && (grid.periodic_x || grid.periodic_y)) {
        throw ConfigError("ns2d_obstacle requires a non-periodic domain");
    }
}

GridPtr make_grid(const GridSpec& spec) {
    return std::make_shared<StructuredGrid>(spec.nx, spec.ny, spec.dx, spec.dy, spec.periodic_x,
                                            spec.periodic_y, spec.obstacle);
}

std::vector<std::string> case_variables(CaseKind kind) {
    if (kind == CaseKind::Burgers1d) return {"u", "nu_t"};
    return {"u", "v", "p", "nu_t"};
}

std::vector<std::string> case_velocity_components(CaseKind kind) {
    if (kind == CaseKind::Burgers1d) return {"u"};
    return {"u", "v"};
}

std::map<std::string, BoundaryConditions> case_boundary_conditions(const FomConfig& config) {
    std::map<std::string, BoundaryConditions> out;
    if (config.kind == CaseKind::Burgers1d || config.kind == CaseKind::Ns2dPeriodic) {
        // fully periodic: the only label that can appear is a body surface
        for (const auto& var : case_variables(config.kind)) {
            BoundaryConditions bc;
            if (var == "u" || var == "v") {
                bc.set(BoundaryLabel::Body, {BcKind::FixedValue, 0.0});
            } else {
                bc.set(BoundaryLabel::Body, {BcKind::ZeroGradient, 0.0});
            }
            out[var] = bc;
        }
        return out;
    }

    BoundaryConditions u_bc, v_bc, p_bc, nu_bc;
    u_bc.set(BoundaryLabel::West, {BcKind::FixedValue, config.u_in});
    u_bc.set(BoundaryLabel::East, {BcKind::ZeroGradient, 0.0});
    u_bc.set(BoundaryLabel::South, {BcKind::ZeroGradient, 0.0});
    u_bc.set(BoundaryLabel::North, {BcKind::ZeroGradient, 0.0});
    u_bc.set(BoundaryLabel::Body, {BcKind::FixedValue, 0.0});

    v_bc.set(BoundaryLabel::West, {BcKind::FixedValue, 0.0});
    v_bc.set(BoundaryLabel::East, {BcKind::ZeroGradient, 0.0});
    // slip walls: the wall-normal component is pinned so the projection can
    // keep the discrete divergence at the solver tolerance
    v_bc.set(BoundaryLabel::South, {BcKind::FixedValue, 0.0});
    v_bc.set(BoundaryLabel::North, {BcKind::FixedValue, 0.0});
    v_bc.set(BoundaryLabel::Body, {BcKind::FixedValue, 0.0});

    p_bc.set(BoundaryLabel::West, {BcKind::ZeroGradient, 0.0});
    p_bc.set(BoundaryLabel::East, {BcKind::FixedValue, 0.0});
    p_bc.set(BoundaryLabel::South, {BcKind::ZeroGradient, 0.0});
    p_bc.set(BoundaryLabel::North, {BcKind::ZeroGradient, 0.0});
    p_bc.set(BoundaryLabel::Body, {BcKind::ZeroGradient, 0.0});

    for (auto label : {BoundaryLabel::West, BoundaryLabel::East, BoundaryLabel::South,
                       BoundaryLabel::North, BoundaryLabel::Body}) {
        nu_bc.set(label, {BcKind::ZeroGradient, 0.0});
    }

    out["u"] = u_bc;
    out["v"] = v_bc;
    out["p"] = p_bc;
    out["nu_t"] = nu_bc;
    return out;
}

FomConfig fom_config_from_json(const nlohmann::json& j) {
    FomConfig config;
    config.kind = case_kind_from_string(j.at("case").get<std::string>());

    const auto& g = j.at("grid");
    config.grid.nx = g.at("nx").get<int>();
    config.grid.ny = g.at("ny").get<int>();
    config.grid.dx = g.at("dx").get<double>();
    config.grid.dy = g.at("dy").get<double>();
    config.grid.periodic_x = g.value("periodic_x", false);
    config.grid.periodic_y = g.value("periodic_y", false);
    if (g.contains("obstacle") && !g.at("obstacle").is_null()) {
        const auto& o = g.at("obstacle");
        config.grid.obstacle.i0 = o.at("i0").get<int>();
        config.grid.obstacle.j0 = o.at("j0").get<int>();
        config.grid.obstacle.ni = o.at("ni").get<int>();
        config.grid.obstacle.nj = o.at("nj").get<int>();
    }

    const auto& f = j.at("fluid");
    config.fluid.rho = f.at("rho").get<double>();
    config.fluid.nu_m = f.at("nu_m").get<double>();

    config.u_in = j.value("inflow_velocity", 0.0);
    config.smagorinsky_cs = j.value("smagorinsky_cs", 0.17);
    config.dt = j.at("dt").get<double>();
    config.snapshot_interval = j.at("snapshot_interval").get<double>();
    config.horizon = j.at("horizon").get<double>();
    config.spin_up = j.value("spin_up", 0.0);
    config.seed = j.value("seed", std::uint64_t{0});
    config.convection = convection_scheme_from_string(j.value("convection_scheme",
                                                              std::string("skew_central")));

    if (j.contains("initial_condition")) {
        const auto& ic = j.at("initial_condition");
        config.ic.type = ic.value("type", std::string("uniform"));
        config.ic.mean = ic.value("mean", 0.0);
        config.ic.amplitude = ic.value("amplitude", 0.0);
        if (ic.contains("components")) {
            for (const auto& comp : ic.at("components")) {
                SineComponent s;
                s.amplitude = comp.at("amplitude").get<double>();
                s.wavenumber = comp.at("wavenumber").get<int>();
                s.phase = comp.value("phase", 0.0);
                config.ic.components.push_back(s);
            }
        }
    }

    if (j.contains("poisson")) {
        const auto& p = j.at("poisson");
        config.poisson.tol = p.value("tol", 1e-8);
        config.poisson.div_tol = p.value("div_tol", 1e-8);
        config.poisson.max_iters = p.value("max_iters", 10000);
    }

    config.validate();
    return config;
}

nlohmann::json to_json(const FomConfig& config) {
    nlohmann::json j;
    j["case"] = to_string(config.kind);
    j["grid"] = {{"nx", config.grid.nx},
                 {"ny", config.grid.ny},
                 {"dx", config.grid.dx},
                 {"dy", config.grid.dy},
                 {"periodic_x", config.grid.periodic_x},
                 {"periodic_y", config.grid.periodic_y}};
    if (!config.grid.obstacle.empty()) {
        j["grid"]["obstacle"] = {{"i0", config.grid.obstacle.i0},
                                 {"j0", config.grid.obstacle.j0},
                                 {"ni", config.grid.obstacle.ni},
                                 {"nj", config.grid.obstacle.nj}};
    }
    j["fluid"] = {{"rho", config.fluid.rho}, {"nu_m", config.fluid.nu_m}};
    j["inflow_velocity"] = config.u_in;
    j["smagorinsky_cs"] = config.smagorinsky_cs;
    j["dt"] = config.dt;
    j["snapshot_interval"] = config.snapshot_interval;
    j["horizon"] = config.horizon;
    j["spin_up"] = config.spin_up;
    j["seed"] = config.seed;
    j["convection_scheme"] = to_string(config.convection);
    nlohmann::json ic;
    ic["type"] = config.ic.type;
    ic["mean"] = config.ic.mean;
    ic["amplitude"] = config.ic.amplitude;
    if (!config.ic.components.empty()) {
        ic["components"] = nlohmann::json::array();
        for (const auto& comp : config.ic.components) {
            ic["components"].push_back({{"amplitude", comp.amplitude},
                                        {"wavenumber", comp.wavenumber},
                                        {"phase", comp.phase}});
        }
    }
    j["initial_condition"] = ic;
    j["poisson"] = {{"tol", config.poisson.tol},
                    {"div_tol", config.poisson.div_tol},
                    {"max_iters", config.poisson.max_iters}};
    return j;
}

FomConfig load_fom_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("failed to parse '" + path + "': " + e.what());
    }
    return fom_config_from_json(j);
}

}  // namespace flowrom
