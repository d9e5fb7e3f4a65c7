#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "spdc/correlations.hpp"
#include "spdc/detection.hpp"
#include "spdc/holograms.hpp"

namespace spdc::io {

/// Shortest-exact decimal formatting ("%.17g" trimmed) so that equal doubles
/// always serialize to identical bytes.
std::string format_double(double value);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

/// CSV with a header row of idler labels and one leading signal label per row.
void write_matrix_csv(const std::filesystem::path& path, const std::string& corner,
                      const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels,
                      const std::vector<double>& values);

void write_correlation_csv(const std::filesystem::path& path,
                           const CorrelationMatrix& matrix,
                           const std::string& axis_prefix);

std::string correlation_json(const CorrelationMatrix& matrix,
                             const std::string& axis_prefix);

void write_counts_csv(const std::filesystem::path& path, const CountMatrix& counts,
                      const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels);

/// Binary 8-bit PGM (P5). Values are clamped to [0, 1] and mapped to 0..255.
void write_pgm(const std::filesystem::path& path, int width, int height,
               const std::vector<double>& values01);

/// Phase mask as PGM with [0, 2 pi) mapped linearly onto 0..255.
void write_mask_pgm(const std::filesystem::path& path, const PhaseMask& mask);

/// FNV-1a 64-bit hash, hex-formatted; used to fingerprint configurations.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(const std::string& bytes);

} // namespace spdc::io
