#pragma once

#include "ellkurt/data_matrix.hpp"

#include <istream>
#include <string>
#include <vector>

namespace ellkurt {

struct CsvData {
  DataMatrix data;
  std::vector<std::string> header;  ///< empty when the first row was numeric
};

/// Rows are observations, columns variables, comma separated with '.'
/// decimals. A first row that does not parse as numbers is taken as a header.
/// Throws ParseError with the offending 1-based line number.
CsvData read_data_csv(std::istream& in);
CsvData read_data_csv_file(const std::string& path);

}  // namespace ellkurt
