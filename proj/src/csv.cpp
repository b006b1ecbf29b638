#include "pdpp/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pdpp/errors.hpp"

namespace pdpp {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

void write_header(std::ofstream& out, const std::vector<std::string>& header) {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c > 0) out << ',';
    out << header[c];
  }
  out << '\n';
}

std::ofstream open_for_write(const std::string& path,
                             const std::vector<std::string>& header,
                             Eigen::Index cols) {
  if (static_cast<Eigen::Index>(header.size()) != cols) {
    throw DataError("csv write: header width does not match data: " + path);
  }
  std::ofstream out(path);
  if (!out) throw DataError("csv write: cannot open " + path);
  return out;
}

}  // namespace

void write_matrix_csv(const std::string& path,
                      const std::vector<std::string>& header,
                      const Eigen::MatrixXd& values) {
  std::ofstream out = open_for_write(path, header, values.cols());
  write_header(out, header);
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(values(r, c));
    }
    out << '\n';
  }
  if (!out) throw DataError("csv write: failed while writing " + path);
}

void write_matrix_csv(const std::string& path,
                      const std::vector<std::string>& header,
                      const Eigen::MatrixXi& values) {
  std::ofstream out = open_for_write(path, header, values.cols());
  write_header(out, header);
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c > 0) out << ',';
      out << values(r, c);
    }
    out << '\n';
  }
  if (!out) throw DataError("csv write: failed while writing " + path);
}

Eigen::MatrixXd read_matrix_csv(const std::string& path,
                                std::vector<std::string>* header_out) {
  std::ifstream in(path);
  if (!in) throw DataError("csv read: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("csv read: " + path + " is empty (header row required)");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) header.push_back(field);
    if (!line.empty() && line.back() == ',') header.push_back("");
  }
  const std::size_t cols = header.size();
  if (cols == 0) {
    throw DataError("csv read: " + path + " has an empty header row");
  }
  if (header_out != nullptr) *header_out = header;

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // ignore blank lines
    std::size_t col = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string field = line.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      if (col >= cols) {
        throw DataError("csv read: " + path + ":" + std::to_string(line_no) +
                        ": more fields than header columns");
      }
      const char* begin = field.c_str();
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin || *end != '\0') {
        throw DataError("csv read: " + path + ":" + std::to_string(line_no) +
                        ": field " + std::to_string(col + 1) + " ('" + field +
                        "') is not a number");
      }
      values.push_back(v);
      ++col;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (col != cols) {
      throw DataError("csv read: " + path + ":" + std::to_string(line_no) +
                      ": expected " + std::to_string(cols) + " fields, found " +
                      std::to_string(col));
    }
    ++rows;
  }
  Eigen::MatrixXd out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = values[r * cols + c];
  }
  return out;
}

}  // namespace pdpp
