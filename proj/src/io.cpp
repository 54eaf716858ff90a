#include "quadlind/io.hpp"

#include "quadlind/version.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace quadlind::io {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw ConfigError("config field \"" + field + "\": " + what);
}

double get_number(const json& block, const std::string& field) {
    if (!block.contains(field)) field_error(field, "missing");
    if (!block[field].is_number()) field_error(field, "expected a number");
    return block[field].get<double>();
}

double get_number_or(const json& block, const std::string& field, double fallback) {
    if (!block.contains(field)) return fallback;
    if (!block[field].is_number()) field_error(field, "expected a number");
    return block[field].get<double>();
}

int get_int(const json& block, const std::string& field) {
    if (!block.contains(field)) field_error(field, "missing");
    if (!block[field].is_number_integer()) field_error(field, "expected an integer");
    return block[field].get<int>();
}

Statistics parse_statistics(const json& value, const std::string& field) {
    if (!value.is_string()) field_error(field, "expected \"fermion\" or \"boson\"");
    const std::string s = value.get<std::string>();
    if (s == "fermion") return Statistics::fermion;
    if (s == "boson") return Statistics::boson;
    field_error(field, "expected \"fermion\" or \"boson\", got \"" + s + "\"");
}

}  // namespace

Matrix complex_matrix_from_json(const json& entries, Eigen::Index n) {
    if (!entries.is_array()) throw ConfigError("matrix: expected an array");
    if (static_cast<Eigen::Index>(entries.size()) != n * n)
        throw ConfigError("matrix: expected " + std::to_string(n * n) +
                          " row-major [re, im] entries, got " +
                          std::to_string(entries.size()));
    Matrix m(n, n);
    for (Eigen::Index idx = 0; idx < n * n; ++idx) {
        const json& cell = entries[static_cast<std::size_t>(idx)];
        if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
            !cell[1].is_number())
            throw ConfigError("matrix: entry " + std::to_string(idx) +
                              " must be [re, im]");
        m(idx / n, idx % n) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
    return m;
}

QuadraticHamiltonian parse_model(const json& block) {
    if (!block.is_object()) throw ConfigError("model: expected an object");

    if (block.contains("model")) {
        const std::string name = block["model"].get<std::string>();
        const bool periodic =
            block.contains("periodic") && block["periodic"].get<bool>();
        const int n = get_int(block, "N");
        if (name == "tight_binding_chain") {
            const Statistics stat =
                block.contains("statistics")
                    ? parse_statistics(block["statistics"], "model.statistics")
                    : Statistics::fermion;
            return tight_binding_chain(n, get_number(block, "J"),
                                       get_number(block, "eps0"), stat, periodic);
        }
        if (name == "kitaev_chain")
            return kitaev_chain(n, get_number(block, "J"),
                                get_number(block, "Delta"),
                                get_number(block, "mu0"), periodic);
        if (name == "harmonic_chain")
            return harmonic_chain(n, get_number(block, "J"),
                                  get_number(block, "eps0"), periodic);
        field_error("model.model", "unknown family \"" + name + "\"");
    }

    if (!block.contains("statistics")) field_error("model.statistics", "missing");
    if (!block.contains("Q")) field_error("model.Q", "missing");

    QuadraticHamiltonian h;
    h.statistics = parse_statistics(block["statistics"], "model.statistics");
    const auto entries = static_cast<Eigen::Index>(block["Q"].size());
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(
        static_cast<double>(entries))));
    if (n * n != entries)
        field_error("model.Q", "length must be a perfect square (row-major N^2)");
    h.Q = complex_matrix_from_json(block["Q"], n);
    h.P = block.contains("P") ? complex_matrix_from_json(block["P"], n)
                              : Matrix::Zero(n, n);
    require_valid(h);
    return h;
}

BathSpec parse_bath(const json& block, Eigen::Index n_sites) {
    if (!block.is_object()) throw ConfigError("bath: expected an object");
    BathSpec bath;
    bath.temperature = get_number(block, "T");
    if (bath.temperature <= 0.0) field_error("bath.T", "must be > 0");
    bath.chemical_potential = get_number(block, "mu");

    if (!block.contains("spectral_density"))
        field_error("bath.spectral_density", "missing");
    const json& sd = block["spectral_density"];
    const std::string kind = sd.contains("kind") ? sd["kind"].get<std::string>()
                                                 : std::string("flat");
    if (kind == "flat") {
        bath.spectral_density = SpectralDensity::flat(get_number(sd, "gamma0"));
    } else if (kind == "ohmic") {
        bath.spectral_density = SpectralDensity::ohmic(
            get_number(sd, "eta"), get_number(sd, "omega_c"));
    } else if (kind == "table") {
        if (!sd.contains("points") || !sd["points"].is_array())
            field_error("bath.spectral_density.points", "missing array");
        std::vector<std::pair<double, double>> points;
        for (const auto& pt : sd["points"]) {
            if (!pt.is_array() || pt.size() != 2)
                field_error("bath.spectral_density.points", "entries are [w, J]");
            points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
        }
        bath.spectral_density = SpectralDensity::tabulated(std::move(points));
    } else {
        field_error("bath.spectral_density.kind",
                    "expected flat | ohmic | table, got \"" + kind + "\"");
    }

    if (!block.contains("region")) field_error("bath.region", "missing");
    const json& region = block["region"];
    if (!region.contains("sites") || !region["sites"].is_array())
        field_error("bath.region.sites", "missing array");
    for (const auto& site : region["sites"]) {
        const int s = site.get<int>();  // 1-based externally
        if (s < 1) field_error("bath.region.sites", "site indices are 1-based");
        bath.region.sites.push_back(s - 1);
    }
    const std::size_t np = bath.region.sites.size();
    bath.region.weights = Vector::Ones(static_cast<Eigen::Index>(np));
    if (region.contains("weights")) {
        const json& weights = region["weights"];
        if (!weights.is_array() || weights.size() != np)
            field_error("bath.region.weights", "one [re, im] entry per site");
        for (std::size_t i = 0; i < np; ++i) {
            const json& w = weights[i];
            if (!w.is_array() || w.size() != 2)
                field_error("bath.region.weights", "entries are [re, im]");
            bath.region.weights(static_cast<Eigen::Index>(i)) =
                Complex(w[0].get<double>(), w[1].get<double>());
        }
    }
    check_region(bath.region, n_sites);
    return bath;
}

std::vector<BathSpec> parse_baths(const json& block, Eigen::Index n_sites) {
    if (!block.is_array() || block.empty())
        throw ConfigError("baths: expected a non-empty array");
    std::vector<BathSpec> baths;
    for (const auto& entry : block) baths.push_back(parse_bath(entry, n_sites));
    return baths;
}

Tolerances parse_tolerances(const json& block) {
    Tolerances tol;
    if (block.is_null()) return tol;
    if (!block.is_object()) throw ConfigError("tolerances: expected an object");
    tol.validate = get_number_or(block, "validate", tol.validate);
    tol.zero_scale = get_number_or(block, "zero_scale", tol.zero_scale);
    tol.cluster_scale = get_number_or(block, "cluster_scale", tol.cluster_scale);
    tol.quadrature_rel =
        get_number_or(block, "quadrature_rel", tol.quadrature_rel);
    tol.steady_null = get_number_or(block, "steady_null", tol.steady_null);
    tol.oracle_local_error =
        get_number_or(block, "oracle_local_error", tol.oracle_local_error);
    return tol;
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::uint64_t Config::hash() const { return fnv1a(raw_text); }

Config load_config(const std::string& path, bool need_baths) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();

    Config config;
    config.raw_text = buffer.str();
    try {
        config.root = json::parse(config.raw_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!config.root.is_object())
        throw ConfigError("config: top level must be an object");
    if (!config.root.contains("model")) throw ConfigError("config: missing model");
    config.model = parse_model(config.root["model"]);
    if (config.root.contains("baths"))
        config.baths = parse_baths(config.root["baths"], config.model.n_sites());
    else if (need_baths)
        throw ConfigError("config: missing baths");
    config.tolerances = parse_tolerances(config.root.value("tolerances", json()));
    config.run = config.root.value("run", json());
    return config;
}

json to_json(const Matrix& m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            data.push_back({m(i, j).real(), m(i, j).imag()});
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

json to_json(const RealMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json to_json(const RealVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json meta_block(const Config& config) {
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "0x%016llx",
                  static_cast<unsigned long long>(config.hash()));
    return json{{"tool", "quadlind"},
                {"version", kVersion},
                {"config_fnv1a", hash_hex},
                {"tolerances",
                 {{"validate", config.tolerances.validate},
                  {"zero_scale", config.tolerances.zero_scale},
                  {"cluster_scale", config.tolerances.cluster_scale},
                  {"quadrature_rel", config.tolerances.quadrature_rel},
                  {"steady_null", config.tolerances.steady_null},
                  {"oracle_local_error", config.tolerances.oracle_local_error}}}};
}

void write_json(const std::string& path, const json& payload) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write output file: " + path);
    out << payload.dump(2) << "\n";
}

CsvWriter::CsvWriter(const std::string& path, const Config& config,
                     const std::vector<std::string>& columns)
    : out_(path), n_columns_(columns.size()) {
    if (!out_) throw ConfigError("cannot write output file: " + path);
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "0x%016llx",
                  static_cast<unsigned long long>(config.hash()));
    out_ << "# quadlind " << kVersion << "\n";
    out_ << "# config_fnv1a: " << hash_hex << "\n";
    out_ << "# tolerances: validate=" << config.tolerances.validate
         << " zero_scale=" << config.tolerances.zero_scale
         << " cluster_scale=" << config.tolerances.cluster_scale
         << " quadrature_rel=" << config.tolerances.quadrature_rel
         << " steady_null=" << config.tolerances.steady_null
         << " oracle_local_error=" << config.tolerances.oracle_local_error << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_columns_)
        throw ConfigError("csv row width mismatch");
    char buffer[64];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", values[i]);
        out_ << buffer << (i + 1 < values.size() ? "," : "\n");
    }
}

}  // namespace quadlind::io
