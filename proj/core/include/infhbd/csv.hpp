// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace infhbd::csv {

// All CSV emitted by the tool starts with a "# infhbd-csv v1 <name>" comment
// line so downstream scripts can detect schema drift.
inline constexpr const char* kSchemaPrefix = "# infhbd-csv v1 ";

struct Table {
  std::string schema_name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write(std::ostream& out, const Table& table);

// Parses a table written by write(); throws ParseError on malformed input
// (missing schema line, ragged rows), naming the line.
Table read(std::istream& in);

std::string format_double(double v);

}  // namespace infhbd::csv
