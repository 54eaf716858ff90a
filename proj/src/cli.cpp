#include "quadlind/cli.hpp"

#include "quadlind/bogoliubov.hpp"
#include "quadlind/dynamics.hpp"
#include "quadlind/environment.hpp"
#include "quadlind/io.hpp"
#include "quadlind/lindblad_builder.hpp"
#include "quadlind/oracle.hpp"
#include "quadlind/quadratic_model.hpp"
#include "quadlind/transport.hpp"
#include "quadlind/version.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace quadlind::cli {

namespace {

using io::Config;
using io::json;

std::string out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

json classification_json(const SpectrumClassification& cls) {
    json zero = json::array();
    for (int k : cls.zero_modes) zero.push_back(k + 1);
    json classes = json::array();
    for (const auto& group : cls.classes) {
        json members = json::array();
        for (int k : group) members.push_back(k + 1);
        classes.push_back(members);
    }
    return json{{"zero_modes", zero},
                {"classes", classes},
                {"class_energies", cls.class_energies},
                {"zero_tol", cls.zero_tol},
                {"cluster_tol", cls.cluster_tol}};
}

std::vector<double> parse_time_grid(const json& run) {
    if (!run.contains("times"))
        throw ConfigError("run.times: missing (array or {start, stop, points})");
    const json& times = run["times"];
    std::vector<double> grid;
    if (times.is_array()) {
        for (const auto& t : times) grid.push_back(t.get<double>());
    } else if (times.is_object()) {
        const double start = times.value("start", 0.0);
        const double stop = times.at("stop").get<double>();
        const int points = times.value("points", 21);
        if (points < 1) throw ConfigError("run.times.points: must be >= 1");
        for (int i = 0; i < points; ++i)
            grid.push_back(points == 1 ? start
                                       : start + (stop - start) * i / (points - 1));
    } else {
        throw ConfigError("run.times: expected array or {start, stop, points}");
    }
    if (grid.empty()) throw ConfigError("run.times: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0) throw ConfigError("run.times: negative time");
        if (i > 0 && grid[i] < grid[i - 1])
            throw ConfigError("run.times: grid must ascend");
    }
    return grid;
}

QuasiparticleState parse_initial_state(const json& run,
                                       const BogoliubovDecomposition& dec) {
    const Eigen::Index n = dec.n_modes();
    if (!run.contains("initial_state")) return vacuum_state(n);
    const json& spec = run["initial_state"];
    if (spec.is_string()) {
        const std::string text = spec.get<std::string>();
        if (text == "vacuum") return vacuum_state(n);
        if (text.rfind("thermal:", 0) == 0) {
            const std::string params = text.substr(8);
            const std::size_t comma = params.find(',');
            if (comma == std::string::npos)
                throw ConfigError("initial_state: expected thermal:T,mu");
            return thermal_state(dec, std::stod(params.substr(0, comma)),
                                 std::stod(params.substr(comma + 1)));
        }
        throw ConfigError("initial_state: unknown spec \"" + text + "\"");
    }
    if (spec.is_object() && spec.contains("theta_file")) {
        std::ifstream in(spec["theta_file"].get<std::string>());
        if (!in)
            throw ConfigError("initial_state.theta_file: cannot open file");
        QuasiparticleState state = vacuum_state(n);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' ||
                !std::isdigit(static_cast<unsigned char>(line[0])))
                continue;
            std::istringstream row(line);
            int k, q;
            char comma;
            double re, im;
            if (!(row >> k >> comma >> q >> comma >> re >> comma >> im))
                throw ConfigError("initial_state.theta_file: bad row: " + line);
            if (k < 1 || k > n || q < 1 || q > n)
                throw ConfigError("initial_state.theta_file: index out of range");
            state.theta(k - 1, q - 1) = Complex(re, im);
        }
        return state;
    }
    throw ConfigError("initial_state: expected string or {theta_file}");
}

// ----------------------------- subcommands ----------------------------------

void cmd_diagonalize(const Config& config, const std::string& out_dir) {
    const auto dec = diagonalize(config.model, config.tolerances.zero_scale);
    const auto residuals = verify_canonical(dec, config.model.statistics);
    const auto cls = classify_spectrum(
        dec, dec.default_zero_tol(config.tolerances.zero_scale),
        dec.default_cluster_tol(config.tolerances.cluster_scale));
    json payload{
        {"meta", io::meta_block(config)},
        {"statistics", to_string(config.model.statistics)},
        {"omegas", io::to_json(dec.omegas)},
        {"A", io::to_json(dec.A)},
        {"B", io::to_json(dec.B)},
        {"constant_shift", dec.constant_shift},
        {"residuals",
         {{"left_normalization", residuals.left_normalization},
          {"right_normalization", residuals.right_normalization},
          {"left_pairing", residuals.left_pairing},
          {"right_pairing", residuals.right_pairing},
          {"metric_condition", residuals.metric_condition},
          {"reconstruction", reconstruct_residual(dec, config.model)}}},
        {"classification", classification_json(cls)}};
    io::write_json(out_path(out_dir, "diagonalize.json"), payload);
}

json effective_model_json(const EffectiveModel& model) {
    json payload{
        {"omegas", io::to_json(model.decomposition.omegas)},
        {"omega_tilde", io::to_json(model.omega_tilde)},
        {"gamma", io::to_json(model.gamma)},
        {"f_at_modes", io::to_json(model.f_at_modes)},
        {"coupling_phi", io::to_json(model.coupling_phi)},
        {"anomaly", io::to_json(anomaly_factors(model.decomposition))},
        {"flags",
         {{"closed_form", model.closed_form_ok},
          {"zero_mode", model.zero_mode.has_value()},
          {"degenerate", !model.classification.nondegenerate()}}},
        {"classification", classification_json(model.classification)},
        {"smallest_class_gap", model.smallest_class_gap},
        {"warnings", model.warnings}};
    if (model.zero_mode) {
        json psi = json::array();
        for (Eigen::Index b = 0; b < model.zero_mode->psi.size(); ++b)
            psi.push_back({model.zero_mode->psi(b).real(),
                           model.zero_mode->psi(b).imag()});
        payload["zero_mode"] = {{"index", model.zero_mode->index + 1},
                                {"delta", model.zero_mode->delta},
                                {"psi", psi},
                                {"closed_form", model.zero_mode->closed_form_ok}};
    }
    return payload;
}

void cmd_build(const Config& config, const std::string& out_dir) {
    const auto model =
        build_effective_model(config.model, config.baths, config.tolerances);
    json payload = effective_model_json(model);
    payload["meta"] = io::meta_block(config);
    io::write_json(out_path(out_dir, "build.json"), payload);
}

void write_correlations_csv(const std::string& path, const Config& config,
                            const CorrelationSet& corr) {
    io::CsvWriter csv(path, config, {"i", "j", "ReC", "ImC", "ReF", "ImF"});
    for (Eigen::Index i = 0; i < corr.C.rows(); ++i)
        for (Eigen::Index j = 0; j < corr.C.cols(); ++j)
            csv.row({static_cast<double>(i + 1), static_cast<double>(j + 1),
                     corr.C(i, j).real(), corr.C(i, j).imag(),
                     corr.F(i, j).real(), corr.F(i, j).imag()});
}

void cmd_steady(const Config& config, const std::string& out_dir) {
    const auto model =
        build_effective_model(config.model, config.baths, config.tolerances);
    const auto steady = steady_theta(model);
    const auto corr = real_space_correlations(model.decomposition, steady.state);

    json theta = json::array();
    for (Eigen::Index k = 0; k < model.n_modes(); ++k) {
        const double value = steady.state.theta(k, k).real();
        theta.push_back(std::isnan(value) ? json() : json(value));
    }
    json non_relaxing = json::array();
    for (int k : steady.non_relaxing) non_relaxing.push_back(k + 1);
    io::write_json(out_path(out_dir, "steady.json"),
                   json{{"meta", io::meta_block(config)},
                        {"theta_kk", theta},
                        {"non_relaxing", non_relaxing},
                        {"unique", steady.unique}});
    write_correlations_csv(out_path(out_dir, "steady_correlations.csv"), config,
                           corr);
}

void cmd_dynamics(const Config& config, const std::string& out_dir) {
    const auto model =
        build_effective_model(config.model, config.baths, config.tolerances);
    const auto grid = parse_time_grid(config.run);
    const auto initial = parse_initial_state(config.run, model.decomposition);

    io::CsvWriter theta_csv(out_path(out_dir, "dynamics_theta.csv"), config,
                            {"t", "k", "q", "Re", "Im"});
    io::CsvWriter space_csv(out_path(out_dir, "dynamics_real_space.csv"), config,
                            {"t", "i", "j", "ReC", "ImC", "ReF", "ImF"});
    for (double t : grid) {
        const auto state = evolve_two_point(model, initial, t);
        for (Eigen::Index k = 0; k < model.n_modes(); ++k)
            for (Eigen::Index q = 0; q < model.n_modes(); ++q)
                theta_csv.row({t, static_cast<double>(k + 1),
                               static_cast<double>(q + 1),
                               state.theta(k, q).real(),
                               state.theta(k, q).imag()});
        const auto corr = real_space_correlations(model.decomposition, state);
        for (Eigen::Index i = 0; i < model.n_modes(); ++i)
            for (Eigen::Index j = 0; j < model.n_modes(); ++j)
                space_csv.row({t, static_cast<double>(i + 1),
                               static_cast<double>(j + 1), corr.C(i, j).real(),
                               corr.C(i, j).imag(), corr.F(i, j).real(),
                               corr.F(i, j).imag()});
    }
}

json onsager_json(const OnsagerResult& result) {
    return json{{"ell", {{result.ell(0, 0), result.ell(0, 1)},
                         {result.ell(1, 0), result.ell(1, 1)}}},
                {"asymmetry", result.asymmetry}};
}

void cmd_transport(const Config& config, const std::string& out_dir) {
    const auto model =
        build_effective_model(config.model, config.baths, config.tolerances);
    const auto report = transport_report(model);
    const auto flux = bath_resolved_particle_flux(model);

    json channels = json::array();
    for (const auto& ch : report.channels)
        channels.push_back({{"mode", ch.mode + 1},
                            {"transfer", ch.transfer},
                            {"anomaly", ch.anomaly},
                            {"occupation_bias", ch.occupation_bias}});
    json excluded = json::array();
    for (int k : report.excluded_modes) excluded.push_back(k + 1);

    io::write_json(
        out_path(out_dir, "transport.json"),
        json{{"meta", io::meta_block(config)},
             {"anomaly", io::to_json(report.anomaly)},
             {"J_N", report.particle},
             {"J_NQ", report.quasiparticle},
             {"J_E", report.energy},
             {"J_Q", report.heat},
             {"reference", {{"T", report.reference_temperature},
                            {"mu", report.reference_mu}}},
             {"onsager", onsager_json(report.onsager)},
             {"channels", channels},
             {"excluded_modes", excluded},
             {"flux_balance", {{"left", flux.first},
                               {"right", flux.second},
                               {"residual", flux.first + flux.second}}}});
}

void cmd_onsager(const Config& config, const std::string& out_dir) {
    const auto model =
        build_effective_model(config.model, config.baths, config.tolerances);
    LinearResponsePoint point;
    if (!config.run.contains("T") || !config.run.contains("mu"))
        throw ConfigError("run: onsager needs reference T and mu");
    point.temperature = config.run["T"].get<double>();
    point.mu = config.run["mu"].get<double>();
    point.dmu = config.run.value("dmu", 1e-4);
    point.dT = config.run.value("dT", 1e-4);

    const auto analytic = onsager_matrix(model, point);
    const auto fd = onsager_matrix_fd(model, point);
    const double scale = analytic.ell.cwiseAbs().maxCoeff();
    const double fd_residual =
        scale > 0.0 ? (analytic.ell - fd.ell).cwiseAbs().maxCoeff() / scale : 0.0;

    io::write_json(out_path(out_dir, "onsager.json"),
                   json{{"meta", io::meta_block(config)},
                        {"reference", {{"T", point.temperature}, {"mu", point.mu}}},
                        {"analytic", onsager_json(analytic)},
                        {"finite_difference", onsager_json(fd)},
                        {"fd_relative_residual", fd_residual}});
}

std::vector<double> grid_values(const json& run, const std::string& field) {
    if (!run.contains(field))
        throw ConfigError("run." + field + ": missing sweep grid");
    const json& value = run[field];
    std::vector<double> values;
    if (value.is_number())
        values.push_back(value.get<double>());
    else if (value.is_array())
        for (const auto& v : value) values.push_back(v.get<double>());
    if (values.empty())
        throw ConfigError("run." + field + ": expected number or array");
    return values;
}

void cmd_sweep(const Config& config, const std::string& out_dir) {
    const auto model =
        build_effective_model(config.model, config.baths, config.tolerances);
    if (model.n_baths() != 2)
        throw ConfigError("sweep: exactly two baths required");

    const auto t_left = grid_values(config.run, "T_L");
    const auto t_right = grid_values(config.run, "T_R");
    const auto mu_left = grid_values(config.run, "mu_L");
    const auto mu_right = grid_values(config.run, "mu_R");

    struct Point {
        double tl, tr, ml, mr;
        CurrentSet currents;
        std::string error;
    };
    std::vector<Point> points;
    for (double tl : t_left)
        for (double tr : t_right)
            for (double ml : mu_left)
                for (double mr : mu_right)
                    points.push_back({tl, tr, ml, mr, {}, {}});

    unsigned n_threads = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("QUADLIND_THREADS")) {
        const int requested = std::atoi(env);
        if (requested >= 1) n_threads = static_cast<unsigned>(requested);
    }
    n_threads = std::max(1u, std::min<unsigned>(
                                 n_threads,
                                 static_cast<unsigned>(points.size())));

    std::atomic<std::size_t> cursor{0};
    const auto worker = [&] {
        for (std::size_t i = cursor.fetch_add(1); i < points.size();
             i = cursor.fetch_add(1)) {
            Point& p = points[i];
            try {
                p.currents = currents_with_occupations(model, p.tl, p.ml, p.tr,
                                                       p.mr);
            } catch (const Error& e) {
                p.error = e.what();
            }
        }
    };
    std::vector<std::thread> threads;
    for (unsigned i = 0; i + 1 < n_threads; ++i) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    for (const auto& p : points)
        if (!p.error.empty())
            throw PhysicsError("sweep point (T_L=" + std::to_string(p.tl) +
                               ", T_R=" + std::to_string(p.tr) +
                               ", mu_L=" + std::to_string(p.ml) +
                               ", mu_R=" + std::to_string(p.mr) +
                               "): " + p.error);

    io::CsvWriter csv(out_path(out_dir, "sweep.csv"), config,
                      {"T_L", "T_R", "mu_L", "mu_R", "J_N", "J_NQ", "J_E", "J_Q"});
    for (const auto& p : points)
        csv.row({p.tl, p.tr, p.ml, p.mr, p.currents.particle,
                 p.currents.quasiparticle, p.currents.energy, p.currents.heat});
}

FockSpace make_space(const Config& config, const EffectiveModel& model) {
    const Eigen::Index cap = config.run.value("dim_cap", 4096);
    if (model.hamiltonian.statistics == Statistics::fermion)
        return FockSpace::fermionic(static_cast<int>(model.n_modes()), cap);
    return FockSpace::bosonic(static_cast<int>(model.n_modes()),
                              config.run.value("boson_cutoff", 8), cap);
}

Matrix oracle_initial_state(const Config& config, const EffectiveModel& model,
                            const OperatorSet& ops) {
    const QuasiparticleState wanted =
        parse_initial_state(config.run, model.decomposition);
    if (max_abs(Matrix(wanted.theta -
                       Matrix(wanted.theta.diagonal().asDiagonal()))) > 0.0)
        throw ConfigError(
            "oracle initial states must have diagonal theta (vacuum, thermal, "
            "or a diagonal theta_file)");
    const Eigen::Index d = ops.space.dimension;
    RealVector log_weights = RealVector::Zero(d);
    for (Eigen::Index x = 0; x < d; ++x) {
        for (int k = 0; k < ops.space.n_modes; ++k) {
            const double occ = wanted.theta(k, k).real();
            const int digit = ops.space.occupation_of(x, k);
            if (occ <= 0.0) {
                if (digit > 0) log_weights(x) = -1e300;
            } else if (model.hamiltonian.statistics == Statistics::fermion &&
                       occ >= 1.0) {
                if (digit == 0) log_weights(x) = -1e300;
            } else {
                // single-mode Gibbs ratio per quantum: occ/(1 - z occ)
                const double z = static_cast<double>(
                    zeta(model.hamiltonian.statistics));
                log_weights(x) += digit * std::log(occ / (1.0 - z * occ));
            }
        }
    }
    // normalize in a numerically safe way
    const double peak = log_weights.maxCoeff();
    RealVector weights = (log_weights.array() - peak).exp().matrix();
    weights /= weights.sum();
    Matrix rho = Matrix::Zero(d, d);
    rho.diagonal() = weights.cast<Complex>();
    return rho;
}

void cmd_oracle(const Config& config, const std::string& out_dir) {
    const auto model =
        build_effective_model(config.model, config.baths, config.tolerances);
    const FockSpace space = make_space(config, model);
    const OperatorSet ops(space, model.decomposition);
    const DenseGenerator gen = build_generator(model, space);
    const std::string task = config.run.value("task", std::string("dynamics"));

    if (task == "dynamics") {
        const auto grid = parse_time_grid(config.run);
        const Matrix rho0 = oracle_initial_state(config, model, ops);
        const auto snapshots =
            integrate(gen, rho0, grid, config.tolerances.oracle_local_error);

        io::CsvWriter csv(out_path(out_dir, "oracle_theta.csv"), config,
                          {"t", "k", "q", "Re", "Im"});
        json comparison = json::array();
        const auto initial = extract_two_point(rho0, ops);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto state = extract_two_point(snapshots[i], ops);
            for (Eigen::Index k = 0; k < model.n_modes(); ++k)
                for (Eigen::Index q = 0; q < model.n_modes(); ++q)
                    csv.row({grid[i], static_cast<double>(k + 1),
                             static_cast<double>(q + 1),
                             state.theta(k, q).real(),
                             state.theta(k, q).imag()});
            if (model.closed_form_ok) {
                const auto closed = evolve_two_point(model, initial, grid[i]);
                comparison.push_back(
                    {{"t", grid[i]},
                     {"max_abs_theta_diff",
                      max_abs(Matrix(state.theta - closed.theta))}});
            }
        }
        json payload{{"meta", io::meta_block(config)}, {"task", task}};
        if (model.closed_form_ok) payload["comparison"] = comparison;
        io::write_json(out_path(out_dir, "oracle.json"), payload);
        return;
    }

    if (task == "steady") {
        const auto result = steady_state(gen, config.tolerances.steady_null);
        json payload{{"meta", io::meta_block(config)},
                     {"task", task},
                     {"null_space_dimension", result.dimension}};
        if (result.dimension == 1) {
            const auto state = extract_two_point(result.state, ops);
            json theta = json::array();
            for (Eigen::Index k = 0; k < model.n_modes(); ++k)
                theta.push_back(state.theta(k, k).real());
            payload["theta_kk"] = theta;

            CorrelationSet corr;
            const Eigen::Index n = model.n_modes();
            corr.C.resize(n, n);
            corr.F.resize(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) {
                    corr.C(i, j) =
                        (result.state * ops.a[i].adjoint() * ops.a[j]).trace();
                    corr.F(i, j) = (result.state * ops.a[i].adjoint() *
                                    ops.a[j].adjoint())
                                       .trace();
                }
            write_correlations_csv(
                out_path(out_dir, "oracle_steady_correlations.csv"), config,
                corr);
            if (model.closed_form_ok) {
                const auto closed = steady_theta(model);
                const auto closed_corr = real_space_correlations(
                    model.decomposition, closed.state);
                payload["comparison"] = {
                    {"max_theta_diff",
                     max_abs(Matrix(state.theta - closed.state.theta))},
                    {"max_C_diff", max_abs(Matrix(corr.C - closed_corr.C))},
                    {"max_F_diff", max_abs(Matrix(corr.F - closed_corr.F))}};
            }
        }
        io::write_json(out_path(out_dir, "oracle.json"), payload);
        return;
    }

    if (task == "transport") {
        if (model.n_baths() != 2)
            throw ConfigError("oracle transport: exactly two baths required");
        const auto result = steady_state(gen, config.tolerances.steady_null);
        if (result.dimension != 1)
            throw CapabilityError(
                "oracle transport: steady state is not unique");
        const Matrix number_op =
            materialize(total_particle_number(static_cast<int>(model.n_modes())),
                        ops);
        const Matrix quasi_op = materialize(
            total_quasiparticle_number(static_cast<int>(model.n_modes())), ops);
        Matrix hs = Matrix::Zero(space.dimension, space.dimension);
        for (Eigen::Index k = 0; k < model.n_modes(); ++k)
            hs += model.decomposition.omegas(k) *
                  (ops.b[k].adjoint() * ops.b[k]);

        const Matrix left_flux = gen.apply_dissipator(result.state, 0);
        const Matrix right_flux = gen.apply_dissipator(result.state, 1);
        json payload{
            {"meta", io::meta_block(config)},
            {"task", task},
            {"oracle",
             {{"J_N_left", (left_flux * number_op).trace().real()},
              {"J_N_right", (right_flux * number_op).trace().real()},
              {"J_NQ_left", (left_flux * quasi_op).trace().real()},
              {"J_NQ_right", (right_flux * quasi_op).trace().real()},
              {"J_E_left", (left_flux * hs).trace().real()},
              {"J_E_right", (right_flux * hs).trace().real()}}}};
        if (model.closed_form_ok) {
            payload["closed_form"] = {{"J_N", particle_current(model)},
                                      {"J_NQ", quasiparticle_current(model)},
                                      {"J_E", energy_current(model)}};
        }
        io::write_json(out_path(out_dir, "oracle.json"), payload);
        return;
    }
    throw ConfigError("oracle: unknown task \"" + task +
                      "\" (dynamics | steady | transport)");
}

void cmd_compare(const Config& config, const std::string& out_dir) {
    const auto model =
        build_effective_model(config.model, config.baths, config.tolerances);
    model.require_closed_form("compare");
    const FockSpace space = make_space(config, model);
    const OperatorSet ops(space, model.decomposition);
    const DenseGenerator gen = build_generator(model, space);

    const auto grid = parse_time_grid(config.run);
    const Matrix rho0 = oracle_initial_state(config, model, ops);
    const auto initial = extract_two_point(rho0, ops);
    const auto snapshots =
        integrate(gen, rho0, grid, config.tolerances.oracle_local_error);

    io::CsvWriter csv(out_path(out_dir, "compare.csv"), config,
                      {"t", "max_abs_theta_diff"});
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto oracle_state = extract_two_point(snapshots[i], ops);
        const auto closed = evolve_two_point(model, initial, grid[i]);
        const double diff = max_abs(Matrix(oracle_state.theta - closed.theta));
        worst = std::max(worst, diff);
        csv.row({grid[i], diff});
    }

    json payload{{"meta", io::meta_block(config)},
                 {"max_abs_theta_diff", worst}};
    if (model.n_baths() == 2) {
        const auto result = steady_state(gen, config.tolerances.steady_null);
        if (result.dimension == 1) {
            const Matrix number_op = materialize(
                total_particle_number(static_cast<int>(model.n_modes())), ops);
            const double oracle_jn =
                (gen.apply_dissipator(result.state, 0) * number_op)
                    .trace()
                    .real();
            payload["currents"] = {{"closed_J_N", particle_current(model)},
                                   {"oracle_J_N", oracle_jn}};
        }
    }
    io::write_json(out_path(out_dir, "compare.json"), payload);
}

}  // namespace

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"quadlind: Markovian dynamics, steady states, and transport "
                 "for open quadratic lattice models"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    struct CommandSpec {
        std::string name;
        std::string description;
        bool needs_baths;
        void (*handler)(const Config&, const std::string&);
    };
    static const std::vector<CommandSpec> commands = {
        {"diagonalize", "Bogoliubov-Valatin decomposition and residuals", false,
         cmd_diagonalize},
        {"build", "effective master-equation data (omega, gamma, flags)", true,
         cmd_build},
        {"dynamics", "closed-form two-point dynamics on a time grid", true,
         cmd_dynamics},
        {"steady", "steady-state occupations and real-space correlations", true,
         cmd_steady},
        {"transport", "two-bath steady-state currents", true, cmd_transport},
        {"onsager", "linear-response matrix with symmetry check", true,
         cmd_onsager},
        {"sweep", "current sweep over a (T, mu) grid", true, cmd_sweep},
        {"oracle", "dense-Liouvillian reference solution", true, cmd_oracle},
        {"compare", "closed form vs oracle comparison table", true, cmd_compare},
    };

    struct Options {
        std::string config_path;
        std::string out_dir = ".";
    };
    std::vector<Options> options(commands.size());
    std::vector<CLI::App*> subcommands;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        CLI::App* sub =
            app.add_subcommand(commands[i].name, commands[i].description);
        sub->add_option("--config", options[i].config_path, "config JSON path")
            ->required();
        sub->add_option("--out", options[i].out_dir, "output directory");
        subcommands.push_back(sub);
    }

    try {
        // CLI11's vector interface consumes the arguments in reverse order
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (std::size_t i = 0; i < commands.size(); ++i) {
            if (!subcommands[i]->parsed()) continue;
            const Config config =
                io::load_config(options[i].config_path, commands[i].needs_baths);
            commands[i].handler(config, options[i].out_dir);
            return 0;
        }
        throw ConfigError("no subcommand selected");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const PhysicsError& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return 3;
    } catch (const CapabilityError& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return 4;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
}

}  // namespace quadlind::cli
