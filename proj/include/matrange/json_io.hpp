#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "matrange/matrix.hpp"

namespace matrange {

// Matrix JSON schema: {"rows": n, "cols": m, "data": [[re, im], ...]}
// with data row-major and exactly rows*cols pairs. Non-finite values are
// rejected in both directions; finite round-trips are bit-identical
// (shortest-round-trip double formatting).

inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    if (!m.all_finite()) throw IoError("matrix_to_json: non-finite entry");
    nlohmann::json data = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            data.push_back({m(i, j).real(), m(i, j).imag()});
    return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw IoError("matrix JSON must be an object with rows, cols, data");
    if (!j["rows"].is_number_unsigned() && !j["rows"].is_number_integer())
        throw IoError("matrix JSON: rows must be an integer");
    if (!j["cols"].is_number_unsigned() && !j["cols"].is_number_integer())
        throw IoError("matrix JSON: cols must be an integer");
    const long long rows_ll = j["rows"].get<long long>();
    const long long cols_ll = j["cols"].get<long long>();
    if (rows_ll <= 0 || cols_ll <= 0) throw IoError("matrix JSON: dimensions must be positive");
    const auto rows = static_cast<std::size_t>(rows_ll);
    const auto cols = static_cast<std::size_t>(cols_ll);
    const auto& data = j["data"];
    if (!data.is_array() || data.size() != rows * cols)
        throw IoError("matrix JSON: data must hold rows*cols [re, im] pairs");
    ComplexMatrix m(rows, cols);
    std::size_t k = 0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t jj = 0; jj < cols; ++jj, ++k) {
            const auto& p = data[k];
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                throw IoError("matrix JSON: each entry must be a [re, im] number pair");
            const double re = p[0].get<double>();
            const double im = p[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im))
                throw IoError("matrix JSON: non-finite entry rejected");
            m(i, jj) = cplx(re, im);
        }
    return m;
}

inline void write_matrix_file(const std::string& path, const ComplexMatrix& m) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << matrix_to_json(m).dump(2) << "\n";
    if (!os) throw IoError("write failed: " + path);
}

inline ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open for reading: " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("JSON parse error in " + path + ": " + e.what());
    }
    return matrix_from_json(j);
}

} // namespace matrange
