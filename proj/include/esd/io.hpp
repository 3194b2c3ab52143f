#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "esd/complex_matrix.hpp"
#include "esd/errors.hpp"
#include "esd/protocols.hpp"
#include "esd/states.hpp"

namespace esd {

/// 12 significant digits: round-trips through text below every test
/// tolerance used here while keeping files stable byte-for-byte.
inline std::string format_number(double v, int significant_digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
    return std::string(buf);
}

inline nlohmann::json density_matrix_to_json(const DensityMatrix& d) {
    const std::size_t n = d.dim();
    std::vector<std::vector<double>> re(n, std::vector<double>(n));
    std::vector<std::vector<double>> im(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            re[i][j] = d.matrix()(i, j).real();
            im[i][j] = d.matrix()(i, j).imag();
        }
    }
    return nlohmann::json{
        {"dim", n}, {"re", re}, {"im", im}, {"basis", d.basis_labels()}};
}

inline DensityMatrix density_matrix_from_json(const nlohmann::json& j) {
    if (!j.contains("dim") || !j.contains("re") || !j.contains("im") || !j.contains("basis")) {
        throw IoError("density matrix JSON: missing field (need dim, re, im, basis)");
    }
    const std::size_t n = j.at("dim").get<std::size_t>();
    const auto re = j.at("re").get<std::vector<std::vector<double>>>();
    const auto im = j.at("im").get<std::vector<std::vector<double>>>();
    const auto basis = j.at("basis").get<std::vector<std::string>>();
    if (re.size() != n || im.size() != n) throw IoError("density matrix JSON: bad row count");
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (re[i].size() != n || im[i].size() != n) {
            throw IoError("density matrix JSON: bad column count");
        }
        for (std::size_t k = 0; k < n; ++k) m(i, k) = Complex{re[i][k], im[i][k]};
    }
    return DensityMatrix(std::move(m), basis);
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string protocol_outcome_csv_header() { return "delta,probability,eta"; }

inline std::string protocol_outcome_csv_row(const ProtocolOutcome& o) {
    return format_number(o.delta) + "," + format_number(o.probability) + "," +
           format_number(o.eta);
}

} // namespace esd
