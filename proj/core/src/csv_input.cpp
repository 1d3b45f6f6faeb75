#include "ellkurt/csv_input.hpp"

#include "ellkurt/error.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <string_view>

namespace ellkurt {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - start)));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

}  // namespace

CsvData read_data_csv(std::istream& in) {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t line_no = 0;
  bool first = true;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split(view);
    std::vector<double> values;
    values.reserve(fields.size());
    std::optional<std::size_t> bad;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const auto v = parse_number(fields[k]);
      if (!v) {
        bad = k;
        break;
      }
      values.push_back(*v);
    }
    if (first) {
      first = false;
      width = fields.size();
      if (bad) {
        for (auto f : fields) header.emplace_back(f);
        continue;
      }
    }
    if (fields.size() != width) {
      parse_fail(line_no, "expected " + std::to_string(width) + " fields, found " +
                              std::to_string(fields.size()));
    }
    if (bad) {
      parse_fail(line_no, "field " + std::to_string(*bad + 1) + " is not a number: '" +
                              std::string(fields[*bad]) + "'");
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": no data rows");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  if (!m.allFinite()) throw Error(ErrorCode::ParseError, "data contains non-finite values");
  return CsvData{DataMatrix(std::move(m)), std::move(header)};
}

CsvData read_data_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return read_data_csv(in);
}

}  // namespace ellkurt
