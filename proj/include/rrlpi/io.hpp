#ifndef RRLPI_IO_HPP
#define RRLPI_IO_HPP

#include "rrlpi/graph.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace rrlpi {

// Writes via a sibling temp file and renames into place so readers never see
// a half-written file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string());
        out << content;
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed for " + path.string() + ": " + ec.message());
}

namespace detail {

inline bool parse_double(const std::string& tok, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(tok, &pos);
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        return pos == tok.size();
    } catch (const std::exception&) {
        return false;
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace detail

// One sample per row in the file; returned in column-per-sample layout. A
// non-numeric first row is treated as a header and skipped.
inline DataMatrix read_csv_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    size_t width = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        std::vector<double> row;
        row.reserve(fields.size());
        bool numeric = true;
        for (const auto& f : fields) {
            double v = 0.0;
            if (!detail::parse_double(f, v)) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue; // header row
            }
            throw CorruptFile("non-numeric field in " + path.string());
        }
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw CorruptFile("ragged row in " + path.string());
        }
        rows.push_back(std::move(row));
        first = false;
    }
    if (rows.empty() || width == 0) throw CorruptFile("no data in " + path.string());

    DataMatrix X;
    X.values.resize(static_cast<Index>(width), static_cast<Index>(rows.size()));
    for (size_t s = 0; s < rows.size(); ++s) {
        for (size_t f = 0; f < width; ++f) {
            X.values(static_cast<Index>(f), static_cast<Index>(s)) = rows[s][f];
        }
    }
    return X;
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// One sample per row, matching the ingestion layout.
inline std::string matrix_to_csv(const Matrix& X, const std::vector<std::string>& header = {}) {
    std::string out;
    if (!header.empty()) {
        for (size_t i = 0; i < header.size(); ++i) {
            if (i) out += ',';
            out += header[i];
        }
        out += '\n';
    }
    for (Index s = 0; s < X.cols(); ++s) {
        for (Index f = 0; f < X.rows(); ++f) {
            if (f) out += ',';
            out += format_double(X(f, s));
        }
        out += '\n';
    }
    return out;
}

inline std::string vector_to_csv(const Vector& y, const std::string& header = "") {
    std::string out;
    if (!header.empty()) out += header + "\n";
    for (Index i = 0; i < y.size(); ++i) out += format_double(y[i]) + "\n";
    return out;
}

// Scatter of value against index, one dot per point, colored by label.
inline std::string svg_scatter(const Vector& y, const std::vector<int>& labels = {},
                               int width = 640, int height = 400) {
    if (!labels.empty() && static_cast<Index>(labels.size()) != y.size())
        throw DimensionMismatch("svg_scatter");
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    double lo = y.size() ? y.minCoeff() : 0.0;
    double hi = y.size() ? y.maxCoeff() : 1.0;
    if (hi - lo < 1e-300) hi = lo + 1.0;
    const double margin = 20.0;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (Index i = 0; i < y.size(); ++i) {
        const double x = margin + (width - 2 * margin) *
                                      (y.size() > 1 ? static_cast<double>(i) /
                                                          static_cast<double>(y.size() - 1)
                                                    : 0.5);
        const double py = height - margin - (height - 2 * margin) * (y[i] - lo) / (hi - lo);
        const char* color =
            labels.empty() ? palette[0]
                           : palette[static_cast<size_t>(std::abs(labels[static_cast<size_t>(i)])) % 8];
        out += "<circle cx=\"" + format_double(x) + "\" cy=\"" + format_double(py) +
               "\" r=\"2.5\" fill=\"" + std::string(color) + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace rrlpi

#endif
