#pragma once

#include <istream>
#include <string>
#include <vector>

#include "tc/types.hpp"

namespace tc {

// RFC-style CSV: quoted fields with "" escapes, embedded separators and
// newlines inside quotes, CRLF tolerated. Lines starting with '#' outside
// any record are kept separately as comments (schema/config annotations).
struct CsvTable {
  std::vector<std::string> comments;               // leading '#' lines, verbatim
  std::vector<std::vector<std::string>> records;   // including the header row
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

// Field quoting for writers; quotes only when needed.
std::string csv_field(const std::string& value);

// "", "NA", "na", "NaN", "." parse as the missing marker; anything else must
// be a full numeric literal. row/col are 1-based and used in diagnostics.
double parse_cell(const std::string& text, int row, int col);

}  // namespace tc
