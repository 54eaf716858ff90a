// io.hpp — JSON configuration parsing, result serialization, and CSV output
// with reproducible headers.

#pragma once

#include "quadlind/environment.hpp"
#include "quadlind/quadratic_model.hpp"
#include "quadlind/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace quadlind::io {

using nlohmann::json;

// Model block: either {"statistics", "Q", "P"} with row-major [re, im] pairs,
// or a named family {"model": "kitaev_chain", "N": ..., ...}.
QuadraticHamiltonian parse_model(const json& block);

BathSpec parse_bath(const json& block, Eigen::Index n_sites);
std::vector<BathSpec> parse_baths(const json& block, Eigen::Index n_sites);

Tolerances parse_tolerances(const json& block);

struct Config {
    json root;
    std::string raw_text;
    QuadraticHamiltonian model;
    std::vector<BathSpec> baths;
    Tolerances tolerances;
    json run;  // subcommand-specific options, may be null

    std::uint64_t hash() const;
};

Config load_config(const std::string& path, bool need_baths);

// ----------------------------- serialization --------------------------------

json to_json(const Matrix& m);
json to_json(const RealMatrix& m);
json to_json(const RealVector& v);
Matrix complex_matrix_from_json(const json& entries, Eigen::Index n);

// Shared "meta" header carried by every emitted file.
json meta_block(const Config& config);

void write_json(const std::string& path, const json& payload);

// CSV file with leading '#' header lines (tool version, config hash,
// tolerances) and a column-name row. Values print with %.17g.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const Config& config,
              const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);

  private:
    std::ofstream out_;
    std::size_t n_columns_;
};

std::uint64_t fnv1a(std::string_view text);

}  // namespace quadlind::io
