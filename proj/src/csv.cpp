#include "depdetect/csv.hpp"

#include "depdetect/error.hpp"

namespace dd {

bool CsvReader::next(CsvRecord& rec) {
  std::istream& in = *in_;
  int c = in.get();
  if (c == EOF) return false;

  rec.fields.clear();
  rec.line = line_;
  std::string field;
  bool quoted = false;
  bool in_field_quotes = false;  // currently inside a quoted section

  for (;;) {
    if (c == EOF) {
      if (in_field_quotes)
        fail(Errc::parse, "line " + std::to_string(rec.line) +
                              ": unterminated quoted field");
      rec.fields.push_back(std::move(field));
      return true;
    }
    char ch = static_cast<char>(c);
    if (in_field_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_field_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty() && !quoted) {
      quoted = true;
      in_field_quotes = true;
    } else if (ch == ',') {
      rec.fields.push_back(std::move(field));
      field.clear();
      quoted = false;
    } else if (ch == '\n') {
      ++line_;
      rec.fields.push_back(std::move(field));
      return true;
    } else if (ch == '\r' && in.peek() == '\n') {
      // handled on the next iteration as '\n'
    } else if (quoted && !in_field_quotes) {
      fail(Errc::parse, "line " + std::to_string(line_) +
                            ": text after closing quote");
    } else {
      field.push_back(ch);
    }
    c = in.get();
  }
}

std::string csv_field(std::string_view field) {
  bool needs_quotes = false;
  for (char ch : field) {
    if (ch == ',' || ch == '"' || ch == '\n' || ch == '\r') {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.put(',');
    out << csv_field(fields[i]);
  }
  out.put('\n');
}

}  // namespace dd
