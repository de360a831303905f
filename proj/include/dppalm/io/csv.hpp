#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace dppalm::io {

inline constexpr int csv_digits = 12;

// Locale-independent rendering with 12 significant digits; "inf", "-inf"
// and "nan" for non-finite values.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, csv_digits);
  return std::string(buf, res.ptr);
}

inline std::string quote_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

using Cell = std::variant<double, long long, std::string>;

// Writes comma-separated blocks, each a header row followed by data rows.
// Consecutive blocks are separated by one empty line.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& columns) {
    if (blocks_++ > 0) out_ << '\n';
    write(columns);
  }

  void row(const std::vector<Cell>& cells) {
    std::vector<std::string> text;
    for (const Cell& c : cells) {
      if (const double* d = std::get_if<double>(&c)) {
        text.push_back(format_number(*d));
      } else if (const long long* i = std::get_if<long long>(&c)) {
        text.push_back(std::to_string(*i));
      } else {
        text.push_back(quote_field(std::get<std::string>(c)));
      }
    }
    write(text);
  }

 private:
  void write(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
    out_ << '\n';
  }

  std::ostream& out_;
  int blocks_ = 0;
};

}  // namespace dppalm::io
