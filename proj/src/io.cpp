#include "maxent/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

namespace maxent {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_comment_header(
    std::ostream& out,
    const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [key, value] : entries) out << "# " << key << "=" << value << "\n";
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  const bool has_comma = line.find(',') != std::string::npos;
  for (char ch : line) {
    const bool sep = has_comma ? (ch == ',')
                               : (std::isspace(static_cast<unsigned char>(ch)) != 0);
    if (sep) {
      if (has_comma || !cur.empty()) fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (has_comma || !cur.empty()) fields.push_back(cur);
  return fields;
}

std::string trimmed(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Selection read_sample_file(const std::string& path, const ReadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  std::size_t data_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trimmed(line);
    if (body.empty() || body.front() == '#') continue;
    if (data_rows < opts.skip_rows) {
      ++data_rows;
      continue;
    }
    ++data_rows;
    const std::vector<std::string> fields = split_fields(body);
    if (opts.column >= fields.size())
      throw IoFailure(path + ":" + std::to_string(line_no) + ": only " +
                      std::to_string(fields.size()) +
                      " columns, requested column " +
                      std::to_string(opts.column));
    const std::string cell = trimmed(fields[opts.column]);
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
      throw IoFailure(path + ":" + std::to_string(line_no) +
                      ": cannot parse \"" + cell + "\" as a number");
    if (!std::isfinite(v))
      throw NonFiniteValue(path + ":" + std::to_string(line_no) +
                           ": non-finite value");
    values.push_back(v);
  }
  if (in.bad()) throw IoFailure("read error on " + path);
  return build_selection(std::move(values));
}

}  // namespace maxent
