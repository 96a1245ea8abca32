#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "expansion.hpp"
#include "pseudomult.hpp"

namespace hpmult {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void dump_json(const Json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(it.key()).dump() + ": ";
                dump_json(it.value(), out, indent, depth + 1);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ", ";
                first = false;
                dump_json(v, out, indent, depth + 1);
            }
            out += "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            // JSON has no inf/nan
            out += std::isfinite(v) ? format_double(v) : "\"" + format_double(v) + "\"";
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace detail

// JSON text with every float at 17 significant digits; keys sorted.
inline std::string to_json_text(const Json& j, int indent = 2) {
    std::string out;
    detail::dump_json(j, out, indent, 0);
    out += "\n";
    return out;
}

// FNV-1a, 64 bit
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    CsvTable& row() {
        rows_.emplace_back();
        return *this;
    }
    CsvTable& operator<<(double v) { return put(format_double(v)); }
    CsvTable& operator<<(int v) { return put(std::to_string(v)); }
    CsvTable& operator<<(long long v) { return put(std::to_string(v)); }
    CsvTable& operator<<(std::size_t v) { return put(std::to_string(v)); }
    CsvTable& operator<<(bool v) { return put(v ? "1" : "0"); }
    CsvTable& operator<<(const std::string& v) { return put(v); }
    CsvTable& operator<<(const char* v) { return put(v); }

    std::size_t size() const { return rows_.size(); }

    // first line: "# hpmult <version> config=<hash>"
    std::string text(const std::string& config_hash) const {
        std::string out = "# hpmult " + std::string(kVersion) + " config=" + config_hash + "\n";
        out += join(columns_) + "\n";
        for (const auto& r : rows_) {
            if (r.size() != columns_.size()) throw std::logic_error("csv row width differs from header");
            out += join(r) + "\n";
        }
        return out;
    }

private:
    CsvTable& put(std::string s) {
        if (rows_.empty()) throw std::logic_error("csv: call row() first");
        rows_.back().push_back(std::move(s));
        return *this;
    }
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
        return s;
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

// Row-major "re,im" pairs, one matrix row per line.
inline std::string matrix_csv(const Eigen::MatrixXcd& m) {
    std::string out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out += ",";
            out += format_double(m(r, c).real()) + "," + format_double(m(r, c).imag());
        }
        out += "\n";
    }
    return out;
}

inline constexpr char kMatrixMagic[8] = {'H', 'P', 'M', 'M', 'A', 'T', '1', '\0'};

namespace detail {

template <class T>
void put_le(std::string& out, T v) {
    static_assert(std::endian::native == std::endian::little, "little-endian host expected");
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    out.append(b, sizeof(T));
}

template <class T>
T get_le(const std::string& in, std::size_t& pos) {
    if (pos + sizeof(T) > in.size()) throw std::runtime_error("truncated matrix file");
    T v;
    std::memcpy(&v, in.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
}

}  // namespace detail

// magic, uint32 n, uint32 Lambda, uint64 D, then D*D little-endian (re, im) doubles, row-major
inline std::string matrix_binary(const OperatorMatrix& M) {
    std::string out(kMatrixMagic, sizeof kMatrixMagic);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(M.spec->dim()));
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(M.spec->max_degree()));
    detail::put_le<std::uint64_t>(out, static_cast<std::uint64_t>(M.m.rows()));
    for (Eigen::Index r = 0; r < M.m.rows(); ++r)
        for (Eigen::Index c = 0; c < M.m.cols(); ++c) {
            detail::put_le<double>(out, M.m(r, c).real());
            detail::put_le<double>(out, M.m(r, c).imag());
        }
    return out;
}

inline OperatorMatrix read_matrix_binary(const std::string& bytes) {
    if (bytes.size() < sizeof kMatrixMagic || std::memcmp(bytes.data(), kMatrixMagic, sizeof kMatrixMagic) != 0)
        throw std::runtime_error("not an operator matrix file");
    std::size_t pos = sizeof kMatrixMagic;
    const auto n = detail::get_le<std::uint32_t>(bytes, pos);
    const auto L = detail::get_le<std::uint32_t>(bytes, pos);
    const auto D = detail::get_le<std::uint64_t>(bytes, pos);
    OperatorMatrix M;
    M.spec = std::make_shared<const BasisSpec>(static_cast<int>(n), static_cast<int>(L));
    if (M.spec->size() != D) throw std::runtime_error("matrix size does not match its basis");
    M.m.resize(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    for (Eigen::Index r = 0; r < M.m.rows(); ++r)
        for (Eigen::Index c = 0; c < M.m.cols(); ++c) {
            const double re = detail::get_le<double>(bytes, pos);
            const double im = detail::get_le<double>(bytes, pos);
            M.m(r, c) = {re, im};
        }
    if (pos != bytes.size()) throw std::runtime_error("trailing bytes in matrix file");
    return M;
}

inline Json expansion_json(const HermiteExpansion& f) {
    Json j;
    j["dim"] = f.dim();
    j["max_degree"] = f.max_degree();
    Json terms = Json::array();
    for (std::size_t p = 0; p < f.spec->size(); ++p) {
        const cd c = f.coeffs[static_cast<Eigen::Index>(p)];
        if (c == cd(0.0)) continue;
        terms.push_back({{"index", (*f.spec)[p]}, {"re", c.real()}, {"im", c.imag()}});
    }
    j["terms"] = terms;
    return j;
}

}  // namespace hpmult
