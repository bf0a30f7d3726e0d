#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dd {

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based physical line where the record starts
};

// RFC-4180 reader: quoted fields may contain commas, doubled quotes and
// newlines. Accepts LF and CRLF line endings.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(&in) {}

  // Reads one record. Returns false on clean EOF; throws Error(parse) on
  // broken quoting.
  bool next(CsvRecord& rec);

 private:
  std::istream* in_;
  std::size_t line_ = 1;
};

// Quotes a field if it contains a comma, quote or newline.
std::string csv_field(std::string_view field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace dd
