#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pdcov/data_matrix.hpp"

namespace pdcov::cli {

struct Table {
  DataMatrix data;
  std::vector<std::string> names;
};

// Rectangular numeric CSV, '.' decimal separator. Without a header the
// columns are named v1..vd. Ragged rows and non-numeric cells raise
// InvalidInput with the line (and column) number.
Table parse_csv(std::istream& in, bool has_header, std::string_view source = "input");
Table read_csv(const std::string& path, bool has_header = true);

// Shortest decimal string that reads back to the same double.
std::string format_number(double value);

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const Eigen::MatrixXd& values);

// Column selector: comma-separated names, 1-based indices, or ranges
// "a-b" whose ends are indices or names; e.g. "1-5,mkt,f1-f3,9".
// Duplicates are rejected.
std::vector<Index> parse_selector(std::string_view selector,
                                  const std::vector<std::string>& names);

}  // namespace pdcov::cli
