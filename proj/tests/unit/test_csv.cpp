#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "vremix/csv.hpp"
#include "vremix/errors.hpp"

using namespace vremix;
using testutil::TempDir;

TEST_SUITE("csv") {

TEST_CASE("double formatting round trips bit-exactly") {
  std::vector<double> cases{0.0,
                            -0.0,
                            1.0,
                            0.1,
                            1.0 / 3.0,
                            2.0 / 3.0,
                            123456.789,
                            1e-300,
                            1e300,
                            -9.2559631349317831e61,
                            std::numeric_limits<double>::denorm_min(),
                            std::numeric_limits<double>::max(),
                            4.9406564584124654e-321};
  for (double v : cases) {
    double back = parse_double(format_double(v), "round trip");
    // Bit-exact comparison (covers the sign of zero as well).
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
}

TEST_CASE("double parsing is strict about trailing garbage") {
  CHECK(parse_double("2.5", "t") == 2.5);
  CHECK(parse_double("-1e-3", "t") == -1e-3);
  CHECK_THROWS_AS(parse_double("2.5x", "t"), ParseError);
  CHECK_THROWS_AS(parse_double("", "t"), ParseError);
  CHECK_THROWS_AS(parse_double("nan?", "t"), ParseError);
  // The context string surfaces in the message.
  CHECK_THROWS_WITH_AS(parse_double("oops", "file.csv:7"),
                       doctest::Contains("file.csv:7"), ParseError);
}

TEST_CASE("reader exposes comments, header, and rows") {
  TempDir dir("csv_reader");
  auto path = dir.file("table.csv");
  testutil::write_file(path,
                       "# alpha=1\n"
                       "# beta = two\n"
                       "time,value\n"
                       "\n"
                       "2010-01-01,1.5\n"
                       "2010-01-02,2.5\n");
  CsvReader reader(path);
  CHECK(reader.comment_lines().size() == 2);
  CHECK(reader.header() == std::vector<std::string>{"time", "value"});
  std::vector<std::string> row;
  REQUIRE(reader.next_row(row));
  CHECK(row == std::vector<std::string>{"2010-01-01", "1.5"});
  REQUIRE(reader.next_row(row));
  CHECK(row[1] == "2.5");
  CHECK(!reader.next_row(row));
}

TEST_CASE("reader rejects a column-count mismatch with the line number") {
  TempDir dir("csv_mismatch");
  auto path = dir.file("bad.csv");
  testutil::write_file(path, "a,b\n1,2\n1,2,3\n");
  CsvReader reader(path);
  std::vector<std::string> row;
  REQUIRE(reader.next_row(row));
  CHECK_THROWS_AS(reader.next_row(row), ParseError);
}

TEST_CASE("reader requires the file to exist") {
  CHECK_THROWS_AS(CsvReader("/nonexistent/vremix/input.csv"), ParseError);
}

TEST_CASE("writer commits atomically") {
  TempDir dir("csv_writer");
  auto path = dir.file("out.csv");
  {
    CsvWriter writer(path);
    writer.comment("note=1");
    writer.row({"h1", "h2"});
    writer.row({"1", "2"});
    // Not committed yet: the target must not exist.
    CHECK(!std::filesystem::exists(path));
    writer.commit();
    CHECK(std::filesystem::exists(path));
    writer.commit();  // second commit is a no-op
  }
  CHECK(testutil::read_file(path) == "# note=1\nh1,h2\n1,2\n");
}

TEST_CASE("abandoned writer leaves no file behind") {
  TempDir dir("csv_abandon");
  auto path = dir.file("gone.csv");
  {
    CsvWriter writer(path);
    writer.row({"a"});
  }
  CHECK(!std::filesystem::exists(path));
}

TEST_CASE("atomic text writing replaces existing content") {
  TempDir dir("csv_text");
  auto path = dir.file("report.txt");
  write_text_atomic(path, "first\n");
  write_text_atomic(path, "second\n");
  CHECK(testutil::read_file(path) == "second\n");
}

TEST_CASE("line splitting keeps empty fields") {
  CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_csv_line("a,,c") == std::vector<std::string>{"a", "", "c"});
  CHECK(split_csv_line("") == std::vector<std::string>{""});
  CHECK(split_csv_line("x,") == std::vector<std::string>{"x", ""});
}

}  // TEST_SUITE("csv")
