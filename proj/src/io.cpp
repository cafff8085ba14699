#include "flowrom/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace flowrom::io {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace {

constexpr char kOpsMagic[] = "FLOWROMOPS1\n";
constexpr char kModelMagic[] = "FLOWROMMDL1\n";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_doubles(std::ofstream& out, const double* data, std::size_t count) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
}

void read_doubles(std::ifstream& in, double* data, std::size_t count) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * 8));
    if (!in) throw ConfigError("unexpected end of binary file");
}

void write_matrix(std::ofstream& out, const Eigen::MatrixXd& m) {
    write_doubles(out, m.data(), static_cast<std::size_t>(m.size()));
}

void read_matrix(std::ifstream& in, Eigen::MatrixXd& m) {
    read_doubles(in, m.data(), static_cast<std::size_t>(m.size()));
}

void write_vector(std::ofstream& out, const Eigen::VectorXd& v) {
    write_doubles(out, v.data(), static_cast<std::size_t>(v.size()));
}

void read_vector(std::ifstream& in, Eigen::VectorXd& v) {
    read_doubles(in, v.data(), static_cast<std::size_t>(v.size()));
}

std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path, bool binary) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw ConfigError("cannot open '" + path + "' for reading");
    return in;
}

void write_header_block(std::ofstream& out, const char* magic, const nlohmann::json& header) {
    out << magic;
    std::string text = header.dump();
    std::uint64_t size = text.size();
    out.write(reinterpret_cast<const char*>(&size), 8);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

nlohmann::json read_header_block(std::ifstream& in, const char* magic) {
    std::string m(std::strlen(magic), '\0');
    in.read(m.data(), static_cast<std::streamsize>(m.size()));
    if (!in || m != magic) throw ConfigError("bad file magic (expected " + std::string(magic) + ")");
    std::uint64_t size = 0;
    in.read(reinterpret_cast<char*>(&size), 8);
    std::string text(size, '\0');
    in.read(text.data(), static_cast<std::streamsize>(size));
    if (!in) throw ConfigError("truncated file header");
    return nlohmann::json::parse(text);
}

nlohmann::json bc_to_json(const BoundaryConditions& bc) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [label, spec] : bc.all()) {
        j[to_string(label)] = {
            {"kind", spec.kind == BcKind::FixedValue ? "fixed" : "zero_gradient"},
            {"value", spec.value}};
    }
    return j;
}

BoundaryConditions bc_from_json(const nlohmann::json& j) {
    BoundaryConditions bc;
    for (auto it = j.begin(); it != j.end(); ++it) {
        BcSpec spec;
        spec.kind = it.value().at("kind").get<std::string>() == "fixed" ? BcKind::FixedValue
                                                                        : BcKind::ZeroGradient;
        spec.value = it.value().at("value").get<double>();
        bc.set(boundary_label_from_string(it.key()), spec);
    }
    return bc;
}

}  // namespace

std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json grid_spec_to_json(const StructuredGrid& grid) {
    nlohmann::json j = {{"nx", grid.nx()},         {"ny", grid.ny()},
                        {"dx", grid.dx()},         {"dy", grid.dy()},
                        {"periodic_x", grid.periodic_x()}, {"periodic_y", grid.periodic_y()}};
    if (!grid.obstacle().empty()) {
        j["obstacle"] = {{"i0", grid.obstacle().i0},
                         {"j0", grid.obstacle().j0},
                         {"ni", grid.obstacle().ni},
                         {"nj", grid.obstacle().nj}};
    }
    return j;
}

GridPtr grid_from_json(const nlohmann::json& j) {
    ObstacleSpec obstacle;
    if (j.contains("obstacle")) {
        const auto& o = j.at("obstacle");
        obstacle.i0 = o.at("i0").get<int>();
        obstacle.j0 = o.at("j0").get<int>();
        obstacle.ni = o.at("ni").get<int>();
        obstacle.nj = o.at("nj").get<int>();
    }
    return std::make_shared<StructuredGrid>(j.at("nx").get<int>(), j.at("ny").get<int>(),
                                            j.at("dx").get<double>(), j.at("dy").get<double>(),
                                            j.at("periodic_x").get<bool>(),
                                            j.at("periodic_y").get<bool>(), obstacle);
}

namespace {

nlohmann::json ensemble_manifest(const SnapshotEnsemble& ensemble) {
    nlohmann::json j;
    j["format"] = "flowrom-ensemble-v1";
    j["case"] = ensemble.case_kind;
    j["grid"] = grid_spec_to_json(*ensemble.grid);
    j["fluid"] = {{"rho", ensemble.fluid.rho}, {"nu_m", ensemble.fluid.nu_m}};
    j["snapshot_interval"] = ensemble.snapshot_interval;
    j["horizon"] = ensemble.horizon;
    j["snapshot_count"] = ensemble.num_snapshots();
    j["seed"] = ensemble.seed;
    j["velocity_components"] = ensemble.velocity_components;
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& [name, data] : ensemble.snapshots) vars.push_back(name);
    j["variables"] = vars;
    nlohmann::json bcs = nlohmann::json::object();
    for (const auto& [name, bc] : ensemble.bcs) bcs[name] = bc_to_json(bc);
    j["boundary_conditions"] = bcs;
    return j;
}

}  // namespace

std::string compute_case_hash(const SnapshotEnsemble& ensemble) {
    return fnv1a64_hex(ensemble_manifest(ensemble).dump());
}

void save_ensemble(SnapshotEnsemble& ensemble, const std::string& dir) {
    ensemble.validate();
    std::filesystem::create_directories(dir);
    ensemble.case_hash = compute_case_hash(ensemble);

    nlohmann::json manifest = ensemble_manifest(ensemble);
    manifest["case_hash"] = ensemble.case_hash;
    auto mf = open_out(dir + "/manifest.json", false);
    mf << manifest.dump(2) << "\n";

    for (const auto& [name, data] : ensemble.snapshots) {
        auto out = open_out(dir + "/" + name + ".bin", true);
        // snapshot-major: each column (one snapshot) is contiguous
        write_doubles(out, data.data(), static_cast<std::size_t>(data.size()));
    }
}

SnapshotEnsemble load_ensemble(const std::string& dir) {
    auto mf = open_in(dir + "/manifest.json", false);
    nlohmann::json manifest;
    mf >> manifest;

    SnapshotEnsemble ensemble;
    ensemble.case_kind = manifest.at("case").get<std::string>();
    ensemble.grid = grid_from_json(manifest.at("grid"));
    ensemble.fluid.rho = manifest.at("fluid").at("rho").get<double>();
    ensemble.fluid.nu_m = manifest.at("fluid").at("nu_m").get<double>();
    ensemble.snapshot_interval = manifest.at("snapshot_interval").get<double>();
    ensemble.horizon = manifest.at("horizon").get<double>();
    ensemble.seed = manifest.at("seed").get<std::uint64_t>();
    ensemble.velocity_components =
        manifest.at("velocity_components").get<std::vector<std::string>>();
    for (const auto& [name, bc] : manifest.at("boundary_conditions").items()) {
        ensemble.bcs[name] = bc_from_json(bc);
    }

    int count = manifest.at("snapshot_count").get<int>();
    int n = ensemble.grid->num_fluid_cells();
    for (int j = 0; j < count; ++j) ensemble.times.push_back(j * ensemble.snapshot_interval);

    for (const auto& name : manifest.at("variables").get<std::vector<std::string>>()) {
        Eigen::MatrixXd data(n, count);
        auto in = open_in(dir + "/" + name + ".bin", true);
        read_doubles(in, data.data(), static_cast<std::size_t>(data.size()));
        ensemble.snapshots[name] = std::move(data);
    }

    ensemble.case_hash = compute_case_hash(ensemble);
    std::string recorded = manifest.value("case_hash", std::string());
    if (!recorded.empty() && recorded != ensemble.case_hash) {
        throw ConfigError("ensemble manifest hash mismatch in '" + dir + "'");
    }
    ensemble.validate();
    return ensemble;
}

void save_basis(const PodBasis& basis, const std::string& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["format"] = "flowrom-pod-v1";
    j["variable"] = basis.variable;
    j["component_labels"] = basis.component_labels;
    j["rank"] = basis.rank;
    j["grid"] = grid_spec_to_json(*basis.grid);
    j["case_hash"] = basis.case_hash;
    std::vector<std::string> lambdas;
    for (int i = 0; i < basis.eigenvalues.size(); ++i) {
        lambdas.push_back(format_double(basis.eigenvalues[i]));
    }
    j["eigenvalues"] = lambdas;

    auto mf = open_out(dir + "/" + basis.variable + ".pod.json", false);
    mf << j.dump(2) << "\n";

    auto out = open_out(dir + "/" + basis.variable + ".pod.bin", true);
    write_vector(out, basis.mean);
    write_matrix(out, basis.modes);
}

PodBasis load_basis(const std::string& dir, const std::string& variable) {
    auto mf = open_in(dir + "/" + variable + ".pod.json", false);
    nlohmann::json j;
    mf >> j;

    PodBasis basis;
    basis.variable = j.at("variable").get<std::string>();
    basis.component_labels = j.at("component_labels").get<std::vector<std::string>>();
    basis.rank = j.at("rank").get<int>();
    basis.grid = grid_from_json(j.at("grid"));
    basis.case_hash = j.at("case_hash").get<std::string>();
    auto lambdas = j.at("eigenvalues").get<std::vector<std::string>>();
    basis.eigenvalues.resize(static_cast<int>(lambdas.size()));
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        basis.eigenvalues[static_cast<int>(i)] = std::strtod(lambdas[i].c_str(), nullptr);
    }

    basis.mean.resize(basis.stacked_size());
    basis.modes.resize(basis.stacked_size(), basis.rank);
    auto in = open_in(dir + "/" + variable + ".pod.bin", true);
    read_vector(in, basis.mean);
    read_matrix(in, basis.modes);
    return basis;
}

void save_operators(const GalerkinOperators& ops, const std::string& path) {
    nlohmann::json j;
    j["format"] = "flowrom-operators-v1";
    j["case_hash"] = ops.case_hash;
    j["velocity_rank"] = ops.velocity_rank;
    j["pressure_rank"] = ops.pressure_rank;
    j["dims"] = ops.dims;
    j["variant"] = static_cast<int>(ops.variant);
    j["nu_m"] = ops.nu_m;
    j["nu_bar"] = ops.nu_bar;
    j["a1_count"] = ops.a1_times.size();

    auto out = open_out(path, true);
    write_header_block(out, kOpsMagic, j);
    write_vector(out, ops.c);
    write_matrix(out, ops.L);
    for (const auto& q : ops.Q) write_matrix(out, q);
    write_matrix(out, ops.P);
    if (ops.has_mode1()) {
        write_vector(out, ops.c_nu1);
        write_matrix(out, ops.L_nu1);
    }
    write_matrix(out, ops.A_p);
    write_vector(out, ops.c_p);
    write_matrix(out, ops.L_p);
    for (const auto& q : ops.Q_p) write_matrix(out, q);
    if (!ops.a1_times.empty()) {
        write_doubles(out, ops.a1_times.data(), ops.a1_times.size());
        write_vector(out, ops.a1_values);
    }
}

GalerkinOperators load_operators(const std::string& path) {
    auto in = open_in(path, true);
    nlohmann::json j = read_header_block(in, kOpsMagic);

    GalerkinOperators ops;
    ops.case_hash = j.at("case_hash").get<std::string>();
    ops.velocity_rank = j.at("velocity_rank").get<int>();
    ops.pressure_rank = j.at("pressure_rank").get<int>();
    ops.dims = j.at("dims").get<int>();
    ops.variant = viscosity_variant_from_int(j.at("variant").get<int>());
    ops.nu_m = j.at("nu_m").get<double>();
    ops.nu_bar = j.at("nu_bar").get<double>();
    std::size_t a1_count = j.at("a1_count").get<std::size_t>();

    const int r = ops.velocity_rank, rp = ops.pressure_rank;
    ops.c.resize(r);
    ops.L.resize(r, r);
    ops.Q.assign(r, Eigen::MatrixXd(r, r));
    ops.P.resize(r, rp);
    ops.A_p.resize(rp, rp);
    ops.c_p.resize(rp);
    ops.L_p.resize(rp, r);
    ops.Q_p.assign(rp, Eigen::MatrixXd(r, r));

    read_vector(in, ops.c);
    read_matrix(in, ops.L);
    for (auto& q : ops.Q) read_matrix(in, q);
    read_matrix(in, ops.P);
    if (ops.has_mode1()) {
        ops.c_nu1.resize(r);
        ops.L_nu1.resize(r, r);
        read_vector(in, ops.c_nu1);
        read_matrix(in, ops.L_nu1);
    }
    read_matrix(in, ops.A_p);
    read_vector(in, ops.c_p);
    read_matrix(in, ops.L_p);
    for (auto& q : ops.Q_p) read_matrix(in, q);
    if (a1_count > 0) {
        ops.a1_times.resize(a1_count);
        read_doubles(in, ops.a1_times.data(), a1_count);
        ops.a1_values.resize(static_cast<int>(a1_count));
        read_vector(in, ops.a1_values);
    }
    ops.finalize();
    return ops;
}

void save_closure(const ClosureModel& model, const std::string& path) {
    nlohmann::json j;
    auto out = open_out(path, true);
    if (model.kind == ClosureKind::Elm) {
        const ElmModel& m = *model.elm;
        j["format"] = "flowrom-model-v1";
        j["kind"] = "elm";
        j["input_dim"] = m.input_dim;
        j["hidden"] = m.hidden;
        j["output_dim"] = m.output_dim;
        j["seed"] = m.seed;
        j["ridge"] = m.ridge;
        j["sv_cutoff_count"] = m.sv_cutoff_count;
        j["train_rmse"] = m.train_rmse;
        j["case_hash"] = m.case_hash;
        write_header_block(out, kModelMagic, j);
        write_matrix(out, m.w1);
        write_vector(out, m.b1);
        write_matrix(out, m.w2);
    } else if (model.kind == ClosureKind::Narx) {
        const NarxModel& m = *model.narx;
        j["format"] = "flowrom-model-v1";
        j["kind"] = "narx";
        j["feature_dim"] = m.feature_dim;
        j["hidden"] = m.hidden;
        j["seed"] = m.seed;
        j["clamp"] = m.clamp;
        j["case_hash"] = m.case_hash;
        j["report"] = {{"epochs", m.report.epochs},
                       {"final_gradient_norm", m.report.final_gradient_norm},
                       {"train_mse", m.report.train_mse},
                       {"val_mse", m.report.val_mse},
                       {"test_mse", m.report.test_mse},
                       {"train_count", m.report.train_count},
                       {"val_count", m.report.val_count},
                       {"test_count", m.report.test_count},
                       {"stop_reason", m.report.stop_reason}};
        write_header_block(out, kModelMagic, j);
        write_matrix(out, m.w1);
        write_vector(out, m.b1);
        write_matrix(out, m.w2);
        write_vector(out, m.b2);
        write_vector(out, m.input_scaler.min);
        write_vector(out, m.input_scaler.max);
        write_vector(out, m.output_scaler.min);
        write_vector(out, m.output_scaler.max);
    } else {
        throw ConfigError("cannot serialize an empty closure");
    }
}

ClosureModel load_closure(const std::string& path) {
    auto in = open_in(path, true);
    nlohmann::json j = read_header_block(in, kModelMagic);
    ClosureModel model;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "elm") {
        ElmModel m;
        m.input_dim = j.at("input_dim").get<int>();
        m.hidden = j.at("hidden").get<int>();
        m.output_dim = j.at("output_dim").get<int>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.ridge = j.at("ridge").get<double>();
        m.sv_cutoff_count = j.at("sv_cutoff_count").get<int>();
        m.train_rmse = j.at("train_rmse").get<double>();
        m.case_hash = j.at("case_hash").get<std::string>();
        m.w1.resize(m.hidden, m.input_dim);
        m.b1.resize(m.hidden);
        m.w2.resize(m.hidden, m.output_dim);
        read_matrix(in, m.w1);
        read_vector(in, m.b1);
        read_matrix(in, m.w2);
        model.kind = ClosureKind::Elm;
        model.elm = std::move(m);
    } else if (kind == "narx") {
        NarxModel m;
        m.feature_dim = j.at("feature_dim").get<int>();
        m.hidden = j.at("hidden").get<int>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.clamp = j.at("clamp").get<double>();
        m.case_hash = j.at("case_hash").get<std::string>();
        const auto& rep = j.at("report");
        m.report.epochs = rep.at("epochs").get<int>();
        m.report.final_gradient_norm = rep.at("final_gradient_norm").get<double>();
        m.report.train_mse = rep.at("train_mse").get<double>();
        m.report.val_mse = rep.at("val_mse").get<double>();
        m.report.test_mse = rep.at("test_mse").get<double>();
        m.report.train_count = rep.at("train_count").get<int>();
        m.report.val_count = rep.at("val_count").get<int>();
        m.report.test_count = rep.at("test_count").get<int>();
        m.report.stop_reason = rep.at("stop_reason").get<std::string>();
        m.w1.resize(m.hidden, 3 * m.feature_dim);
        m.b1.resize(m.hidden);
        m.w2.resize(m.feature_dim, m.hidden);
        m.b2.resize(m.feature_dim);
        m.input_scaler.min.resize(m.feature_dim);
        m.input_scaler.max.resize(m.feature_dim);
        m.output_scaler.min.resize(m.feature_dim);
        m.output_scaler.max.resize(m.feature_dim);
        read_matrix(in, m.w1);
        read_vector(in, m.b1);
        read_matrix(in, m.w2);
        read_vector(in, m.b2);
        read_vector(in, m.input_scaler.min);
        read_vector(in, m.input_scaler.max);
        read_vector(in, m.output_scaler.min);
        read_vector(in, m.output_scaler.max);
        model.kind = ClosureKind::Narx;
        model.narx = std::move(m);
    } else {
        throw ConfigError("unknown model kind '" + kind + "' in '" + path + "'");
    }
    return model;
}

void save_trajectory_csv(const RomTrajectory& traj, const RomModel& model,
                         const std::string& path) {
    auto out = open_out(path, false);
    out << "# variant=" << to_string(model.variant) << " a1_extension=" << model.a1_extension;
    if (model.a1_period > 0.0) out << " a1_period=" << format_double(model.a1_period);
    out << " diverged=" << (traj.diverged ? 1 : 0);
    if (traj.diverged) out << " divergence_time=" << format_double(traj.divergence_time);
    out << "\n";

    const int r = static_cast<int>(traj.a_u.rows());
    const int rp = static_cast<int>(traj.a_p.rows());
    bool closure = model.closure.kind != ClosureKind::None;
    out << "t";
    for (int i = 1; i <= r; ++i) out << ",u_" << i;
    for (int l = 1; l <= rp; ++l) out << ",p_" << l;
    if (closure) {
        for (int i = 1; i <= r; ++i) out << ",c_" << i;
    }
    out << "\n";
    for (int j = 0; j < traj.num_times(); ++j) {
        out << format_double(traj.times[j]);
        for (int i = 0; i < r; ++i) out << "," << format_double(traj.a_u(i, j));
        for (int l = 0; l < rp; ++l) out << "," << format_double(traj.a_p(l, j));
        if (closure) {
            for (int i = 0; i < r; ++i) out << "," << format_double(traj.closure(i, j));
        }
        out << "\n";
    }
}

LoadedTrajectory load_trajectory_csv(const std::string& path) {
    auto in = open_in(path, false);
    LoadedTrajectory loaded;
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (auto pos = line.find("variant="); pos != std::string::npos) {
                loaded.variant = line.substr(pos + 8, line.find(' ', pos + 8) - pos - 8);
            }
            if (line.find("diverged=1") != std::string::npos) {
                loaded.trajectory.diverged = true;
            }
            if (auto pos = line.find("divergence_time="); pos != std::string::npos) {
                loaded.trajectory.divergence_time = std::strtod(line.c_str() + pos + 16, nullptr);
            }
            continue;
        }
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) comma = line.size();
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (header.empty()) {
            header = cells;
            continue;
        }
        std::vector<double> row;
        for (const auto& cell : cells) row.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(std::move(row));
    }
    if (header.empty()) throw ConfigError("trajectory file '" + path + "' has no header");

    int r = 0, rp = 0, rc = 0;
    for (const auto& name : header) {
        if (name.rfind("u_", 0) == 0) ++r;
        else if (name.rfind("p_", 0) == 0) ++rp;
        else if (name.rfind("c_", 0) == 0) ++rc;
    }
    loaded.has_closure = rc > 0;
    RomTrajectory& traj = loaded.trajectory;
    int m = static_cast<int>(rows.size());
    traj.a_u.resize(r, m);
    traj.a_p.resize(rp, m);
    traj.closure.setZero(r, m);
    for (int j = 0; j < m; ++j) {
        const auto& row = rows[j];
        if (static_cast<int>(row.size()) != 1 + r + rp + rc) {
            throw ConfigError("trajectory row has wrong column count");
        }
        traj.times.push_back(row[0]);
        for (int i = 0; i < r; ++i) traj.a_u(i, j) = row[1 + i];
        for (int l = 0; l < rp; ++l) traj.a_p(l, j) = row[1 + r + l];
        for (int i = 0; i < rc; ++i) traj.closure(i, j) = row[1 + r + rp + i];
    }
    return loaded;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows) {
    if (header.size() != static_cast<std::size_t>(rows.cols())) {
        throw DimensionError("CSV header does not match column count");
    }
    auto out = open_out(path, false);
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << "\n";
    for (int j = 0; j < rows.rows(); ++j) {
        for (int i = 0; i < rows.cols(); ++i) {
            out << (i ? "," : "") << format_double(rows(j, i));
        }
        out << "\n";
    }
}

std::pair<std::vector<std::string>, Eigen::MatrixXd> read_csv(const std::string& path) {
    auto in = open_in(path, false);
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) comma = line.size();
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (header.empty()) {
            header = cells;
        } else {
            std::vector<double> row;
            for (const auto& cell : cells) row.push_back(std::strtod(cell.c_str(), nullptr));
            rows.push_back(std::move(row));
        }
    }
    Eigen::MatrixXd data(static_cast<int>(rows.size()), static_cast<int>(header.size()));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != header.size()) throw ConfigError("ragged CSV row in '" + path + "'");
        for (std::size_t i = 0; i < header.size(); ++i) {
            data(static_cast<int>(j), static_cast<int>(i)) = rows[j][i];
        }
    }
    return {header, data};
}

void write_svg_lines(const std::string& path, const std::string& title,
                     const std::vector<double>& x, const std::vector<Eigen::VectorXd>& series,
                     const std::vector<std::string>& labels) {
    if (series.empty() || x.empty()) throw ConfigError("SVG plot needs data");
    const int width = 800, height = 420, margin = 50;
    double xmin = x.front(), xmax = x.back();
    double ymin = series[0].minCoeff(), ymax = series[0].maxCoeff();
    for (const auto& s : series) {
        if (s.size() != static_cast<int>(x.size())) throw DimensionError("SVG series length");
        ymin = std::min(ymin, s.minCoeff());
        ymax = std::max(ymax, s.maxCoeff());
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;

    const char* colors[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd",
                            "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
    auto px = [&](double v) { return margin + (v - xmin) / (xmax - xmin) * (width - 2 * margin); };
    auto py = [&](double v) {
        return height - margin - (v - ymin) / (ymax - ymin) * (height - 2 * margin);
    };

    auto out = open_out(path, false);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", xmin);
    out << "<text x=\"" << margin << "\" y=\"" << height - margin + 18 << "\" font-size=\"11\">"
        << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.6g", xmax);
    out << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 18
        << "\" text-anchor=\"end\" font-size=\"11\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.6g", ymin);
    out << "<text x=\"" << margin - 4 << "\" y=\"" << height - margin
        << "\" text-anchor=\"end\" font-size=\"11\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.6g", ymax);
    out << "<text x=\"" << margin - 4 << "\" y=\"" << margin + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << buf << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[s % 8] << "\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(x[i]),
                          py(series[s][static_cast<int>(i)]));
            out << buf;
        }
        out << "\"/>\n";
        if (s < labels.size()) {
            out << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 16 * (s + 1)
                << "\" font-size=\"11\" fill=\"" << colors[s % 8] << "\">" << labels[s]
                << "</text>\n";
        }
    }
    out << "</svg>\n";
}

}  // namespace flowrom::io
