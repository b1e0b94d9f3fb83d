#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace mvsc {

/// Shortest decimal representation of a double that round-trips exactly.
std::string format_double(double value);

/// Writes a dense matrix, one row per line, comma separated, '.' decimal.
/// A header row is emitted only when `header` is non-empty; it must then
/// have one entry per column.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header = {});

/// Reads a matrix written by write_matrix_csv. Ragged rows or non-numeric
/// cells raise std::runtime_error naming the file, line and column.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path, bool skip_header = false);

/// Label files: one integer per line.
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);
std::vector<int> read_labels(const std::filesystem::path& path);

}  // namespace mvsc
