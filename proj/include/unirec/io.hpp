#pragma once

// JSON documents exchanged by the command-line tool.
//
//   MatrixFile:     {"n": 2, "re": [[...], [...]], "im": [[...], [...]]}
//   ParameterFile:  {"n": 3, "alpha": [...], "beta": [...],
//                    "levels": [{"theta": t, "gammas": [], "deltas": []}, ...]}
//                   level j (1-based) holds j-1 gammas and j-1 deltas.
//   RawFile:        {"n": 3, "raw": true, "psi": [...],
//                    "levels": [{"theta": t, "a_re": [...], "a_im": [...]}, ...]}
//
// Angles are radians. Doubles are written in shortest round-trip form.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "unirec/cxcore.hpp"
#include "unirec/decompose.hpp"
#include "unirec/gauge.hpp"
#include "unirec/toolkit.hpp"

namespace unirec::io {

using json = nlohmann::json;

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Document is not valid JSON or does not match the schema. The message
/// names the offending field.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Numbers parsed but are not finite.
class NumericInputError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline const json& field(const json& doc, const std::string& name, const std::string& where) {
    if (!doc.is_object()) throw FormatError(where + ": expected a JSON object");
    auto it = doc.find(name);
    if (it == doc.end()) throw FormatError("missing field '" + where + name + "'");
    return *it;
}

inline double real_value(const json& value, const std::string& name) {
    if (!value.is_number()) throw FormatError("field '" + name + "' must be a number");
    const double x = value.get<double>();
    if (!std::isfinite(x)) throw NumericInputError("field '" + name + "' is not finite");
    return x;
}

inline std::size_t dimension(const json& doc, const std::string& where) {
    const json& n = field(doc, "n", where);
    if (!n.is_number_integer() || n.get<long long>() < 1) {
        throw FormatError("field '" + where + "n' must be a positive integer");
    }
    return static_cast<std::size_t>(n.get<long long>());
}

inline std::vector<double> real_array(const json& value, const std::string& name, std::size_t expected) {
    if (!value.is_array()) throw FormatError("field '" + name + "' must be an array");
    if (value.size() != expected) {
        throw FormatError("field '" + name + "' has " + std::to_string(value.size()) + " entries, expected " +
                          std::to_string(expected));
    }
    std::vector<double> out;
    out.reserve(expected);
    for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(real_value(value[i], name + "[" + std::to_string(i) + "]"));
    }
    return out;
}

inline std::vector<std::vector<double>> real_rows(const json& value, const std::string& name, std::size_t n) {
    if (!value.is_array()) throw FormatError("field '" + name + "' must be an array of rows");
    if (value.size() != n) {
        throw FormatError("field '" + name + "' has " + std::to_string(value.size()) + " rows, expected " +
                          std::to_string(n));
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (std::size_t r = 0; r < n; ++r) rows.push_back(real_array(value[r], name + "[" + std::to_string(r) + "]", n));
    return rows;
}

} // namespace detail

inline json matrix_to_json(const ComplexMatrix& m) {
    if (!m.is_square()) throw DimensionError("matrix file requires a square matrix, got " + m.shape());
    json re = json::array();
    json im = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json re_row = json::array();
        json im_row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            re_row.push_back(m(r, c).real());
            im_row.push_back(m(r, c).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return {{"n", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline ComplexMatrix matrix_from_json(const json& doc) {
    const std::size_t n = detail::dimension(doc, "");
    const auto re = detail::real_rows(detail::field(doc, "re", ""), "re", n);
    const auto im = detail::real_rows(detail::field(doc, "im", ""), "im", n);
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = Complex{re[r][c], im[r][c]};
    return m;
}

inline json parameters_to_json(const ParameterSet& p) {
    validate_parameter_set(p);
    json levels = json::array();
    for (const auto& level : p.levels) {
        levels.push_back({{"theta", level.theta}, {"gammas", level.coords.gammas}, {"deltas", level.coords.deltas}});
    }
    return {{"n", p.n}, {"alpha", p.alpha}, {"beta", p.beta}, {"levels", std::move(levels)}};
}

struct ParsedParameters {
    ParameterSet parameters;
    /// beta_1 was nonzero on input and has been shifted into alpha.
    bool shifted = false;
};

/// Reads a ParameterFile. A nonzero beta_1 is accepted and normalised to 0
/// (reported through `shifted`).
inline ParsedParameters parameters_from_json(const json& doc) {
    ParsedParameters out;
    ParameterSet& p = out.parameters;
    p.n = detail::dimension(doc, "");
    p.alpha = detail::real_array(detail::field(doc, "alpha", ""), "alpha", p.n);
    p.beta = detail::real_array(detail::field(doc, "beta", ""), "beta", p.n);
    const json& levels = detail::field(doc, "levels", "");
    if (!levels.is_array()) throw FormatError("field 'levels' must be an array");
    if (levels.size() != p.n - 1) {
        throw FormatError("field 'levels' has " + std::to_string(levels.size()) + " entries, expected " +
                          std::to_string(p.n - 1));
    }
    for (std::size_t idx = 0; idx < levels.size(); ++idx) {
        const std::string where = "levels[" + std::to_string(idx) + "].";
        const json& entry = levels[idx];
        LevelParams level;
        level.j = idx + 1;
        level.theta = detail::real_value(detail::field(entry, "theta", where), where + "theta");
        level.coords.gammas = detail::real_array(detail::field(entry, "gammas", where), where + "gammas", idx);
        level.coords.deltas = detail::real_array(detail::field(entry, "deltas", where), where + "deltas", idx);
        p.levels.push_back(std::move(level));
    }
    if (p.beta[0] != 0.0) {
        const double shift = p.beta[0];
        for (auto& x : p.alpha) x += shift;
        for (auto& x : p.beta) x -= shift;
        p.beta[0] = 0.0;
        out.shifted = true;
    }
    return out;
}

inline json raw_to_json(const RawDecomposition& raw) {
    json levels = json::array();
    for (const auto& level : raw.levels) {
        std::vector<double> re;
        std::vector<double> im;
        for (const auto& z : level.a) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
        levels.push_back({{"theta", level.theta}, {"a_re", re}, {"a_im", im}});
    }
    return {{"n", raw.n}, {"raw", true}, {"psi", raw.psi}, {"levels", std::move(levels)}};
}

inline RawDecomposition raw_from_json(const json& doc) {
    RawDecomposition raw;
    raw.n = detail::dimension(doc, "");
    raw.psi = detail::real_array(detail::field(doc, "psi", ""), "psi", raw.n);
    const json& levels = detail::field(doc, "levels", "");
    if (!levels.is_array() || levels.size() != raw.n - 1) {
        throw FormatError("field 'levels' must be an array of " + std::to_string(raw.n - 1) + " entries");
    }
    for (std::size_t idx = 0; idx < levels.size(); ++idx) {
        const std::string where = "levels[" + std::to_string(idx) + "].";
        const json& entry = levels[idx];
        const double theta = detail::real_value(detail::field(entry, "theta", where), where + "theta");
        const auto re = detail::real_array(detail::field(entry, "a_re", where), where + "a_re", idx + 1);
        const auto im = detail::real_array(detail::field(entry, "a_im", where), where + "a_im", idx + 1);
        ComplexVector a(idx + 1);
        for (std::size_t k = 0; k <= idx; ++k) a[k] = Complex{re[k], im[k]};
        raw.levels.push_back({idx + 1, theta, std::move(a)});
    }
    return raw;
}

inline json report_to_json(const UnitaryCheckReport& report) {
    return {{"n", report.n},
            {"deviation", report.deviation},
            {"det_modulus_error", report.det_modulus_error},
            {"tolerance", report.tolerance},
            {"verdict", report.pass ? "pass" : "fail"}};
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    } catch (const json::out_of_range& e) {
        // 406: a number literal overflows double (e.g. 1e999).
        if (e.id == 406) throw NumericInputError("'" + path + "' contains a non-finite number: " + e.what());
        throw FormatError("'" + path + "': " + e.what());
    }
}

inline void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace unirec::io
