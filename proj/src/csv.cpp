#include "tc/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tc {

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool record_started = false;

  auto end_field = [&]() {
    record.push_back(field);
    field.clear();
  };
  auto end_record = [&]() {
    end_field();
    if (record.size() == 1 && !record[0].empty() && record[0][0] == '#') {
      table.comments.push_back(record[0]);
    } else {
      table.records.push_back(record);
    }
    record.clear();
    record_started = false;
  };

  bool in_comment = false;
  std::string comment_text;

  char ch;
  while (in.get(ch)) {
    // A '#' opening a line starts a comment that runs to the newline; commas
    // inside it (config echoes carry JSON) must not split it into fields.
    if (in_comment) {
      if (ch == '\n') {
        table.comments.push_back(comment_text);
        comment_text.clear();
        in_comment = false;
      } else if (ch != '\r') {
        comment_text += ch;
      }
      continue;
    }
    if (ch == '#' && !record_started && field.empty() && record.empty() &&
        !quoted) {
      in_comment = true;
      comment_text = "#";
      continue;
    }
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (field.empty() && !record_started) record_started = true;
        if (field.empty()) {
          quoted = true;
        } else {
          field += ch;  // stray quote mid-field, keep literally
        }
        break;
      case ',':
        record_started = true;
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        if (record_started || !field.empty() || !record.empty()) end_record();
        break;
      default:
        record_started = true;
        field += ch;
        break;
    }
  }
  if (quoted) throw FormatError("unterminated quoted field at end of input");
  if (in_comment) table.comments.push_back(comment_text);
  if (record_started || !field.empty() || !record.empty()) end_record();
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return read_csv(in);
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

double parse_cell(const std::string& text, int row, int col) {
  if (text.empty() || text == "NA" || text == "na" || text == "NaN" || text == ".")
    return missing_value;
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw FormatError("row " + std::to_string(row) + ", column " +
                      std::to_string(col) + ": '" + text + "' is not numeric");
  return v;
}

}  // namespace tc
