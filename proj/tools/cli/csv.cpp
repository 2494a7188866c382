#include "csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "pdcov/error.hpp"

namespace pdcov::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

Table parse_csv(std::istream& in, bool has_header, std::string_view source) {
  const std::string where(source);
  std::vector<std::vector<double>> rows;
  Table table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (blank(line)) continue;
    const auto fields = split_fields(line);
    if (header_pending) {
      for (auto f : fields) table.names.push_back(unquote(f));
      width = fields.size();
      header_pending = false;
      continue;
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw InvalidInput(where + ": line " + std::to_string(line_no) + " has " +
                         std::to_string(fields.size()) + " fields, expected " +
                         std::to_string(width));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      if (!parse_double(fields[c], row[c])) {
        throw InvalidInput(where + ": non-numeric cell '" + std::string(fields[c]) +
                           "' at line " + std::to_string(line_no) + ", column " +
                           std::to_string(c + 1));
      }
    }
    rows.push_back(std::move(row));
  }
  if (width == 0) throw InvalidInput(where + ": no data");
  if (!has_header) {
    for (std::size_t c = 0; c < width; ++c) table.names.push_back("v" + std::to_string(c + 1));
  }
  Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  table.data = DataMatrix(std::move(m));
  return table;
}

Table read_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return parse_csv(in, has_header, path);
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const Eigen::MatrixXd& values) {
  if (static_cast<Index>(header.size()) != values.cols()) {
    throw InvalidInput("header width does not match the matrix");
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    out << (c ? "," : "") << header[c];
  }
  out << '\n';
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      out << (c ? "," : "") << format_number(values(r, c));
    }
    out << '\n';
  }
}

std::vector<Index> parse_selector(std::string_view selector,
                                  const std::vector<std::string>& names) {
  const auto width = static_cast<Index>(names.size());
  auto as_index = [&](std::string_view token, Index& out) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) return false;
    if (value < 1 || value > width) {
      throw InvalidInput("column index " + std::string(token) + " out of range 1.." +
                         std::to_string(width));
    }
    out = value - 1;
    return true;
  };
  auto as_column = [&](std::string_view token, Index& out) {
    const auto it = std::find(names.begin(), names.end(), token);
    if (it != names.end()) {
      out = static_cast<Index>(it - names.begin());
      return true;
    }
    return as_index(token, out);
  };
  std::vector<Index> out;
  std::set<Index> seen;
  auto add = [&](Index c) {
    if (!seen.insert(c).second) {
      throw InvalidInput("column '" + names[static_cast<std::size_t>(c)] +
                         "' selected twice");
    }
    out.push_back(c);
  };
  for (std::string_view token : split_fields(selector)) {
    if (token.empty()) continue;
    const auto name = std::find(names.begin(), names.end(), token);
    if (name != names.end()) {
      add(static_cast<Index>(name - names.begin()));
      continue;
    }
    Index single = 0;
    if (as_index(token, single)) {
      add(single);
      continue;
    }
    const std::size_t dash = token.find('-');
    Index lo = 0;
    Index hi = 0;
    if (dash != std::string_view::npos && as_column(token.substr(0, dash), lo) &&
        as_column(token.substr(dash + 1), hi)) {
      if (hi < lo) throw InvalidInput("empty column range '" + std::string(token) + "'");
      for (Index c = lo; c <= hi; ++c) add(c);
      continue;
    }
    throw InvalidInput("unknown column '" + std::string(token) + "'");
  }
  return out;
}

}  // namespace pdcov::cli
