#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace pdpp {

// Shortest round-trip decimal text (17 significant digits).
std::string format_double(double value);

// Header row plus one row per matrix row. Throws DataError on IO failure.
void write_matrix_csv(const std::string& path,
                      const std::vector<std::string>& header,
                      const Eigen::MatrixXd& values);
void write_matrix_csv(const std::string& path,
                      const std::vector<std::string>& header,
                      const Eigen::MatrixXi& values);

// Reads a numeric CSV with a mandatory header row. Ragged rows or
// non-numeric fields raise DataError naming the file, line number, and
// offending field.
Eigen::MatrixXd read_matrix_csv(const std::string& path,
                                std::vector<std::string>* header_out = nullptr);

}  // namespace pdpp
