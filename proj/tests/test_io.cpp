// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <sstream>

#include "doctest.h"
#include "infhbd/csv.hpp"
#include "infhbd/error.hpp"

using namespace infhbd;

TEST_CASE("csv round trip over random tables") {
  std::mt19937_64 rng(19);
  for (int iter = 0; iter < 20; ++iter) {
    csv::Table table;
    table.schema_name = "fuzz";
    int cols = 1 + static_cast<int>(rng() % 5);
    for (int c = 0; c < cols; ++c) table.columns.push_back("c" + std::to_string(c));
    int rows = static_cast<int>(rng() % 12);
    for (int r = 0; r < rows; ++r) {
      std::vector<std::string> row;
      for (int c = 0; c < cols; ++c)
        row.push_back(csv::format_double(
            static_cast<double>(rng() % 10000) / 7.0));
      table.rows.push_back(std::move(row));
    }
    std::ostringstream out;
    csv::write(out, table);
    std::istringstream in(out.str());
    auto back = csv::read(in);
    CHECK(back.schema_name == table.schema_name);
    CHECK(back.columns == table.columns);
    CHECK(back.rows == table.rows);
  }
}

TEST_CASE("csv reader rejects malformed input") {
  std::istringstream missing_header("a,b\n1,2\n");
  CHECK_THROWS_AS(csv::read(missing_header), ParseError);

  std::istringstream ragged(
      "# infhbd-csv v1 x\n"
      "a,b\n"
      "1,2,3\n");
  CHECK_THROWS_WITH_AS(csv::read(ragged), doctest::Contains("line 3"),
                       ParseError);
}

TEST_CASE("format_double is stable for integers and fractions") {
  CHECK(csv::format_double(42.0) == "42");
  CHECK(csv::format_double(0.5) == "0.5");
}
