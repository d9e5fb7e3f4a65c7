#include "spdc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spdc::io {

std::string format_double(double value) {
    char buffer[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
        if (std::strtod(buffer, nullptr) == value) break;
    }
    return buffer;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_matrix_csv(const std::filesystem::path& path, const std::string& corner,
                      const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels,
                      const std::vector<double>& values) {
    std::ostringstream out;
    out << corner;
    for (const auto& label : col_labels) out << ',' << label;
    out << '\n';
    for (std::size_t r = 0; r < row_labels.size(); ++r) {
        out << row_labels[r];
        for (std::size_t c = 0; c < col_labels.size(); ++c)
            out << ',' << format_double(values[r * col_labels.size() + c]);
        out << '\n';
    }
    write_text(path, out.str());
}

namespace {

std::vector<std::string> int_labels(const std::vector<int>& axis,
                                    const std::string& prefix) {
    std::vector<std::string> labels;
    labels.reserve(axis.size());
    for (const int v : axis) labels.push_back(prefix + std::to_string(v));
    return labels;
}

} // namespace

void write_correlation_csv(const std::filesystem::path& path,
                           const CorrelationMatrix& matrix,
                           const std::string& axis_prefix) {
    write_matrix_csv(path, axis_prefix + "_s\\" + axis_prefix + "_i",
                     int_labels(matrix.axis_s, ""), int_labels(matrix.axis_i, ""),
                     matrix.values);
}

std::string correlation_json(const CorrelationMatrix& matrix,
                             const std::string& axis_prefix) {
    std::ostringstream out;
    out << "{\n  \"axis_s\": [";
    for (std::size_t i = 0; i < matrix.axis_s.size(); ++i)
        out << (i ? "," : "") << matrix.axis_s[i];
    out << "],\n  \"axis_i\": [";
    for (std::size_t i = 0; i < matrix.axis_i.size(); ++i)
        out << (i ? "," : "") << matrix.axis_i[i];
    out << "],\n  \"axis\": \"" << axis_prefix << "\",\n  \"normalization\": \""
        << (matrix.normalization == CorrelationMatrix::Norm::MaxNormalized ? "max"
                                                                           : "raw")
        << "\",\n  \"values\": [\n";
    for (int s = 0; s < matrix.rows(); ++s) {
        out << "    [";
        for (int i = 0; i < matrix.cols(); ++i)
            out << (i ? "," : "") << format_double(matrix.at(s, i));
        out << (s + 1 < matrix.rows() ? "],\n" : "]\n");
    }
    out << "  ]\n}\n";
    return out.str();
}

void write_counts_csv(const std::filesystem::path& path, const CountMatrix& counts,
                      const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels) {
    write_matrix_csv(path, "mode", row_labels, col_labels, counts.v);
}

void write_pgm(const std::filesystem::path& path, int width, int height,
               const std::vector<double>& values01) {
    std::ostringstream out;
    out << "P5\n" << width << ' ' << height << "\n255\n";
    for (const double v : values01) {
        const double clamped = std::clamp(v, 0.0, 1.0);
        out << static_cast<unsigned char>(std::lround(clamped * 255.0));
    }
    write_text(path, out.str());
}

void write_mask_pgm(const std::filesystem::path& path, const PhaseMask& mask) {
    std::vector<double> scaled(mask.phase.size());
    for (std::size_t i = 0; i < mask.phase.size(); ++i)
        scaled[i] = mask.phase[i] / (2.0 * std::numbers::pi);
    write_pgm(path, mask.grid.n, mask.grid.n, scaled);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string hash_hex(const std::string& bytes) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buffer;
}

} // namespace spdc::io
