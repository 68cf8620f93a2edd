#pragma once

// Minimal RFC-4180 reading and writing. Numbers are written with 17
// significant digits so that doubles round-trip exactly.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace biphoton::csv {

std::string format_number(double v, int precision = 17);
std::string quote(std::string_view field);

class Writer {
 public:
  explicit Writer(std::ostream& os, int precision = 17) : os_(os), precision_(precision) {}
  void comment(std::string_view text);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);
  void row(const std::vector<double>& values);

 private:
  std::ostream& os_;
  int precision_;
};

/// Parses a whole document; lines starting with '#' are skipped.
std::vector<std::vector<std::string>> parse(std::istream& is);
double to_double(const std::string& field);

}  // namespace biphoton::csv
