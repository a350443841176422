#pragma once

#include <stdexcept>
#include <string>

#include "richcore/types.hpp"

namespace richcore::cli {

class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a CSV of decimal floats, one matrix row per line. Blank lines are
/// skipped; every data line must have the same number of fields.
Matrix read_csv_matrix(const std::string& path, bool skip_header);

void write_csv_matrix(const std::string& path, const Matrix& M);

}  // namespace richcore::cli
