#include "cli/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <vector>

#include "cli/json_writer.hpp"

namespace richcore::cli {

namespace {

std::vector<double> parse_line(const std::string& line, const std::string& path,
                               std::size_t lineno) {
  std::vector<double> fields;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(',', start);
    if (end == std::string::npos) end = line.size();
    std::string token = line.substr(start, end - start);
    const auto first = token.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      throw parse_error(path + ":" + std::to_string(lineno) + ": empty field");
    }
    const auto last = token.find_last_not_of(" \t\r");
    token = token.substr(first, last - first + 1);
    char* tail = nullptr;
    const double v = std::strtod(token.c_str(), &tail);
    if (tail == token.c_str() || *tail != '\0') {
      throw parse_error(path + ":" + std::to_string(lineno) + ": bad number '" +
                        token + "'");
    }
    fields.push_back(v);
    start = end + 1;
    if (end == line.size()) break;
  }
  return fields;
}

}  // namespace

Matrix read_csv_matrix(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_header && lineno == 1) continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = parse_line(line, path, lineno);
    if (!rows.empty() && fields.size() != rows.front().size()) {
      throw parse_error(path + ":" + std::to_string(lineno) +
                        ": inconsistent field count");
    }
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw parse_error(path + ": no data rows");

  Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.front().size(); ++j) {
      M(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return M;
}

void write_csv_matrix(const std::string& path, const Matrix& M) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open " + path + " for writing");
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(M(i, j));
    }
    out << '\n';
  }
}

}  // namespace richcore::cli
