// Copyright 2026 The asqlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace asqlab {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Comma-separated table with a header row. Blank lines and lines starting
/// with '#' are skipped on input.
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return cells_.size(); }
  const std::string& cell(std::size_t row, std::size_t col) const { return cells_[row][col]; }
  /// Source line of a row, for error messages.
  std::size_t line(std::size_t row) const { return lines_[row]; }

  bool has_column(const std::string& name) const;
  /// Throws CsvError naming the missing column.
  std::size_t column(const std::string& name) const;
  /// Throws CsvError with the line number on unparsable values.
  std::vector<double> numbers(const std::string& name) const;
  std::vector<std::string> strings(const std::string& name) const;

  void add_row(std::vector<std::string> cells);
  void add_row(std::vector<std::string> cells, std::size_t source_line);
  void add_row(const std::vector<double>& values);

  std::string source = "<memory>";

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> cells_;
  std::vector<std::size_t> lines_;
};

/// Shortest round-trip-safe text at 12 significant digits ("%.12g").
std::string format_number(double v);
/// Parses a full token as a double; throws std::invalid_argument otherwise.
double parse_number(const std::string& text);

CsvTable read_csv(std::istream& in, const std::string& source = "<stream>");
CsvTable read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

}  // namespace asqlab
