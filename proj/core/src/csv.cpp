// SPDX-License-Identifier: Apache-2.0

#include "infhbd/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "infhbd/error.hpp"

namespace infhbd::csv {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write(std::ostream& out, const Table& table) {
  out << kSchemaPrefix << table.schema_name << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

Table read(std::istream& in) {
  Table table;
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw ParseError("csv: empty input");
  ++lineno;
  const std::string prefix(kSchemaPrefix);
  if (line.rfind(prefix, 0) != 0)
    throw ParseError("csv line 1: missing schema header");
  table.schema_name = line.substr(prefix.size());

  if (!std::getline(in, line)) throw ParseError("csv: missing column header");
  ++lineno;
  table.columns = split_fields(line);

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') continue;
    auto fields = split_fields(line);
    if (fields.size() != table.columns.size()) {
      std::ostringstream msg;
      msg << "csv line " << lineno << ": expected " << table.columns.size()
          << " fields, got " << fields.size();
      throw ParseError(msg.str());
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace infhbd::csv
